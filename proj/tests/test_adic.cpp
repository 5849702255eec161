#include <gtest/gtest.h>

#include <set>

#include "bratteli/adic.hpp"
#include "bratteli/builders.hpp"
#include "oracles.hpp"

using namespace bratteli;

namespace {

std::string digits(const GradedGraph& g, const PathPrefix& p) {
  std::string s;
  for (int d : digits_of(g, p)) s += static_cast<char>('0' + d);
  return s;
}

InfinitePath word(const GradedGraph& g, const std::string& s, TailRule tail = AllMinimalTail{}) {
  std::vector<int> d;
  for (char c : s) d.push_back(c - '0');
  return {path_from_digits(g, d), tail};
}

}  // namespace

TEST(Adic, DyadicOdometerAddsOneWithCarry) {
  const GraphPtr d = share(dyadic(8));
  const auto order = AdicOrder::by_predecessor(d);
  EXPECT_EQ(digits(*d, successor(order, word(*d, "1101")).prefix), "0011");
  EXPECT_EQ(digits(*d, successor(order, word(*d, "0000")).prefix), "1000");
  // The carry reaches the step after the prefix, which joins it.
  EXPECT_EQ(digits(*d, successor(order, word(*d, "111")).prefix), "00010");
  EXPECT_EQ(digits(*d, predecessor(order, word(*d, "0011")).prefix), "1101");
}

TEST(Adic, OdometerOrbitVisitsEveryPrefix) {
  // Step k is ordered by the vertex at level k-1, so six steps carry five digits.
  const GraphPtr d = share(dyadic(6));
  const auto order = AdicOrder::by_predecessor(d);
  const auto path = orbit(order, word(*d, "000000", ExplicitTail{}), 31);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < path.size(); ++i) {
    seen.insert(digits(*d, path[i].prefix));
    long value = 0;
    const auto w = digits_of(*d, path[i].prefix);
    for (std::size_t k = 0; k + 1 < w.size(); ++k) value += static_cast<long>(w[k]) << k;
    EXPECT_EQ(value, static_cast<long>(i));
  }
  EXPECT_EQ(seen.size(), 32u);
  EXPECT_THROW(successor(order, path.back()), Error);
  try {
    successor(order, path.back());
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "no_successor");
  }
  try {
    predecessor(order, path.front());
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "no_predecessor");
  }
}

TEST(Adic, PascalAutomorphismPermutesWordsOfEqualWeight) {
  const GraphPtr g = share(pascal(1, 8));
  const auto order = AdicOrder::by_predecessor(g);
  EXPECT_EQ(digits(*g, successor(order, word(*g, "0110")).prefix), "1001");
  // Orbit of the minimal word with k ones and length n covers all C(n, k).
  for (long k = 0; k <= 6; ++k) {
    // Minimal path: ones at the lowest levels.
    const std::string w = std::string(static_cast<std::size_t>(k), '1') + std::string(static_cast<std::size_t>(6 - k), '0');
    const long count = oracle::binomial(6, k).get_si();
    const auto o = orbit(order, word(*g, w, ExplicitTail{}), count - 1);
    std::set<std::string> seen;
    for (const auto& x : o) {
      const auto s = digits(*g, x.prefix);
      EXPECT_EQ(std::count(s.begin(), s.end(), '1'), k);
      seen.insert(s);
    }
    EXPECT_EQ(static_cast<long>(seen.size()), count);
    EXPECT_THROW(successor(order, o.back()), Error);
  }
}

TEST(Adic, SuccessorAndPredecessorAreInverse) {
  const GraphPtr g = share(young(6));
  const auto order = AdicOrder::by_predecessor(g);
  InfinitePath x{path_through(*g, {0, 0, 1, 2}), ExplicitTail{}};
  const auto y = successor(order, x);
  EXPECT_EQ(y.prefix, path_through(*g, {0, 1, 1, 2}));
  EXPECT_EQ(predecessor(order, y).prefix, x.prefix);
  EXPECT_TRUE(cofinal(order, x, y));
  EXPECT_EQ(compare_paths(order, x, y), -1);
  EXPECT_EQ(compare_paths(order, y, x), 1);
}

TEST(Adic, BernoulliIsInvariantUnderThePascalAutomorphism) {
  const GraphPtr g = share(pascal(1, 8));
  const auto order = AdicOrder::by_predecessor(g);
  for (const Rational& p : {Rational(1, 3), Rational(1, 2), Rational(2, 3)})
    EXPECT_EQ(invariance_check(order, bernoulli_measure<Rational>(g, p), 6), 0);
}

TEST(Adic, BiasedOdometerIsNotInvariant) {
  const GraphPtr d = share(dyadic(6));
  const auto order = AdicOrder::by_predecessor(d);
  EXPECT_EQ(invariance_check(order, bernoulli_measure<Rational>(d, Rational(1, 2)), 5), 0);
  // Rank 2: the two paths into a vertex differ by |p - q| times its last step.
  EXPECT_EQ(invariance_check(order, bernoulli_measure<Rational>(d, Rational(3, 5)), 4), Rational(3, 25));
}

TEST(Adic, MorseOrderDiffersFromTheOdometer) {
  const GraphPtr d = share(dyadic(6));
  const auto lex = AdicOrder::by_predecessor(d), morse = AdicOrder::morse(d);
  const auto x = word(*d, "01");
  EXPECT_NE(digits(*d, successor(lex, x).prefix), digits(*d, successor(morse, x).prefix));
  EXPECT_THROW(AdicOrder::morse(share(pascal(1, 3))), Error);
}

TEST(Adic, PeriodicTailIsAnchored) {
  const GraphPtr d = share(dyadic(10));
  const auto order = AdicOrder::by_predecessor(d);
  const auto prefix = path_from_digits(*d, {1, 1});
  InfinitePath x{prefix, periodic_digits(*d, 2, prefix.end().index, {0, 1})};
  EXPECT_EQ(digits(*d, materialize(order, x, 8)), "11010101");
  const auto y = successor(order, x);
  EXPECT_EQ(digits(*d, materialize(order, y, 8)), "00110101");
}

TEST(Adic, TakagiValues) {
  EXPECT_EQ(takagi<Rational>(Rational(0)), 0);
  EXPECT_EQ(takagi<Rational>(Rational(1, 2)), Rational(1, 2));
  EXPECT_EQ(takagi<Rational>(Rational(1, 4)), Rational(1, 2));
  // 1/3 = 0.0101...: every term contributes 1/3 · 2^{-k}.
  EXPECT_EQ(takagi<Rational>(Rational(1, 3), 10), Rational(2, 3) * (1 - Rational(1, 1024)));
  EXPECT_NEAR(takagi(1.0 / 3), 2.0 / 3, 1e-15);
  EXPECT_THROW(takagi(1.5), Error);
}
