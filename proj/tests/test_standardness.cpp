#include <gtest/gtest.h>

#include <random>

#include "bratteli/builders.hpp"
#include "bratteli/standardness.hpp"
#include "oracles.hpp"

using namespace bratteli;

namespace {

MarkovMeasure<Rational> two_state_chain(std::size_t depth, const Rational& a, const Rational& b, const Rational& c,
                                        const Rational& d) {
  const GraphPtr g = share(dyadic(depth));
  Matrix<Rational> P(2, 2, Rational(0));
  P(0, 0) = a;
  P(0, 1) = b;
  P(1, 0) = c;
  P(1, 1) = d;
  return markov_chain_measure<Rational>(g, {Rational(1, 2), Rational(1, 2)}, P);
}

MarkovMeasure<Rational> flip(std::size_t depth, const Rational& p) {
  return two_state_chain(depth, p, 1 - p, 1 - p, p);
}

}  // namespace

TEST(Standardness, FlipChainWeakScanDecaysGeometrically) {
  const auto mu = flip(13, Rational(7, 10));
  const auto eq = cotransitions_of(mu);
  const auto r = weak_standardness_scan(eq, mu, 12);
  ASSERT_EQ(r.values.size(), 13u);
  for (long n = 0; n <= 12; ++n) {
    EXPECT_EQ(r.pairwise[static_cast<std::size_t>(n)](0, 1), oracle::power(Rational(2, 5), n));
    // Uniform level masses: s_n = 2 · 1/4 · ρ_n(0, 1).
    EXPECT_EQ(r.values[static_cast<std::size_t>(n)], oracle::power(Rational(2, 5), n) / 2);
  }
  EXPECT_EQ(r.verdict, "weakly_standard_evidence");
}

TEST(Standardness, FlipChainStrongScanStaysAtTwoFifths) {
  const auto mu = flip(8, Rational(7, 10));
  const auto eq = cotransitions_of(mu);
  const auto r = standardness_scan(eq, mu, 6);
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_EQ(r.pairwise[n](0, 1), Rational(2, 5));
    EXPECT_EQ(r.values[n], Rational(1, 5));
  }
  EXPECT_EQ(r.verdict, "nonstandard");
}

TEST(Standardness, BernoulliChainIsStandard) {
  for (const Rational& p : {Rational(7, 10), Rational(1, 3)}) {
    const auto mu = two_state_chain(4, p, 1 - p, p, 1 - p);
    const auto eq = cotransitions_of(mu);
    EXPECT_EQ(weak_standardness_scan(eq, mu, 1).values[1], 0);
    const auto s = standardness_scan(eq, mu, 1);
    EXPECT_EQ(s.values[1], 0);
    EXPECT_EQ(s.verdict, "standard");
  }
}

TEST(Standardness, TransferMetricIsKantorovich) {
  const auto mu = flip(3, Rational(7, 10));
  const auto eq = cotransitions_of(mu);
  const auto rho1 = transfer_metric(eq, discrete_level_metric<Rational>(eq.graph(), 1));
  EXPECT_EQ(rho1.level, 2u);
  EXPECT_EQ(rho1.d(0, 1), Rational(2, 5));
  EXPECT_THROW(transfer_metric(eq, discrete_level_metric<Rational>(eq.graph(), 3)), Error);
  LevelMetric<Rational> bad{1, Matrix<Rational>(2, 2, Rational(1))};
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Standardness, ScannerAgreesWithExplicitTrees) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 6; ++t) {
    const Rational a(static_cast<long>(1 + rng() % 9), 10), c(static_cast<long>(1 + rng() % 9), 10);
    const auto mu = two_state_chain(6, a, 1 - a, c, 1 - c);
    const auto eq = cotransitions_of(mu);
    StrongScanner<Rational> sup(eq, 1, {});
    LeafCost<Rational> base_leaf;
    base_leaf.mode = LeafCost<Rational>::Mode::base_coordinate;
    StrongScanner<Rational> basec(eq, 1, base_leaf);
    const std::function<Rational(const Label&, const Label&)> base_cost = [](const Label& x, const Label& y) {
      return x.back() == y.back() ? Rational(0) : Rational(1);
    };
    for (std::size_t level = 2; level <= 5; ++level) {
      const auto A = conditional_tree(eq, {level, 0}, 1), B = conditional_tree(eq, {level, 1}, 1);
      EXPECT_EQ(sup.distance(level, 0, 1), filtration_distance<Rational>(A, B, discrete_leaf_cost<Rational>()));
      EXPECT_EQ(basec.distance(level, 0, 1), filtration_distance<Rational>(A, B, base_cost));
    }
  }
}

TEST(Standardness, ScannerAgreesWithExplicitTreesOnYoung) {
  const GraphPtr g = share(young(6));
  const auto eq = central_equipment<Rational>(g);
  StrongScanner<Rational> sup(eq, 1, {});
  for (std::size_t v = 0; v < g->level_size(5); ++v)
    for (std::size_t w = v + 1; w < g->level_size(5); ++w)
      EXPECT_EQ(sup.distance(5, v, w), filtration_distance<Rational>(conditional_tree(eq, {5, v}, 1),
                                                                    conditional_tree(eq, {5, w}, 1),
                                                                    discrete_leaf_cost<Rational>()));
}

TEST(Standardness, FiltrationTreeChecks) {
  const auto mu = flip(4, Rational(7, 10));
  const auto eq = cotransitions_of(mu);
  const auto A = conditional_tree(eq, {3, 0}, 1), B = conditional_tree(eq, {4, 0}, 1);
  EXPECT_EQ(A.height(), 2u);
  EXPECT_THROW(filtration_distance<Rational>(A, B, discrete_leaf_cost<Rational>()), Error);
  Rational total = 0;
  for (const auto& [leaf, p] : A.leaf_distribution()) total += p;
  EXPECT_EQ(total, 1);
  EXPECT_EQ(filtration_distance<Rational>(A, A, discrete_leaf_cost<Rational>()), 0);
}

TEST(Standardness, TreeOrbitDpMatchesAutomorphisms) {
  std::mt19937_64 rng(21);
  for (std::size_t h : {1u, 2u, 3u, 4u})
    for (int t = 0; t < 40; ++t) {
      std::vector<int> a(std::size_t{1} << h), b(a.size());
      for (auto& x : a) x = static_cast<int>(rng() & 1);
      for (auto& x : b) x = static_cast<int>(rng() & 1);
      EXPECT_EQ(tree_orbit_hamming(a, b, h), oracle::orbit_hamming_brute(a, b, h));
    }
  EXPECT_EQ(oracle::binary_tree_automorphisms(3).size(), 128u);
  EXPECT_THROW(tree_orbit_hamming({0, 1, 1}, {0, 1, 1}), Error);
  EXPECT_THROW(tree_orbit_hamming({0, 2}, {0, 1}, 1), Error);
}

TEST(Standardness, LacunaryTelescopingDrivesTheFlipChainDown) {
  const auto r = lacunary_search<Rational>([](std::size_t depth) { return flip(depth, Rational(7, 10)); }, 1, 3, 0.05, 2);
  EXPECT_TRUE(r.found);
  EXPECT_EQ(r.base_gap, 1u);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1, 2, 4, 8}));
  EXPECT_EQ(r.values[0], Rational(1, 5));
  EXPECT_LT(to_double(r.values[r.hit - 1]), 0.05);
}

TEST(Standardness, ScanNeedsDeepEnoughGraph) {
  const auto mu = flip(4, Rational(7, 10));
  EXPECT_THROW(weak_standardness_scan(cotransitions_of(mu), mu, 4), Error);
}
