#include <gtest/gtest.h>

#include "bratteli/builders.hpp"
#include "bratteli/equipment.hpp"
#include "bratteli/paths.hpp"
#include "bratteli/telescope.hpp"
#include "oracles.hpp"

using namespace bratteli;

TEST(Graph, PascalDimensionsAreBinomials) {
  const GradedGraph g = pascal(1, 12);
  for (std::size_t n = 0; n <= 12; ++n) {
    ASSERT_EQ(g.level_size(n), n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const VertexId v{n, pascal_index(n, k)};
      EXPECT_EQ(g.label(v), (Label{static_cast<long>(n - k), static_cast<long>(k)}));
      EXPECT_EQ(g.dim(v), oracle::binomial(static_cast<long>(n), static_cast<long>(k)));
    }
  }
}

TEST(Graph, PascalHigherDimensionCountsMultinomials) {
  const GradedGraph g = pascal(2, 6);
  EXPECT_EQ(g.level_size(6), 28u);
  BigInt total = 0;
  for (std::size_t v = 0; v < g.level_size(6); ++v) total += g.dim({6, v});
  EXPECT_EQ(total, BigInt(729));
}

TEST(Graph, YoungDimensionsCountTableaux) {
  const GradedGraph g = young(9);
  const long partition_counts[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30};
  for (std::size_t n = 0; n <= 9; ++n) {
    ASSERT_EQ(static_cast<long>(g.level_size(n)), partition_counts[n]);
    BigInt sum_sq = 0, fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<long>(k);
    for (std::size_t v = 0; v < g.level_size(n); ++v) {
      EXPECT_EQ(g.dim({n, v}), oracle::count_tableaux(g.label({n, v})));
      sum_sq += g.dim({n, v}) * g.dim({n, v});
    }
    EXPECT_EQ(sum_sq, fact);
  }
  EXPECT_EQ(g.label({3, 0}), (Label{3}));
}

TEST(Graph, FibonacciAndDyadic) {
  const GradedGraph f = fibonacci(10);
  BigInt a = 1, b = 1;
  for (std::size_t n = 1; n <= 10; ++n) {
    BigInt total = 0;
    for (std::size_t v = 0; v < f.level_size(n); ++v) total += f.dim({n, v});
    BigInt next = a + b;
    a = b;
    b = next;
    EXPECT_EQ(total, b) << n;
  }
  const GradedGraph d = dyadic(5);
  EXPECT_EQ(d.dim({5, 0}) + d.dim({5, 1}), BigInt(32));
}

TEST(Graph, PairsGraphsCarryDoubleDiagonalEdges) {
  const GradedGraph op = ordered_pairs(3);
  EXPECT_EQ(op.level_size(2), 4u);
  EXPECT_EQ(op.level_size(3), 16u);
  const auto diag = op.find(2, {1, 1});
  ASSERT_TRUE(diag);
  EXPECT_EQ(op.multiplicity(2, 1, *diag), BigInt(2));
  EXPECT_EQ(op.dim({2, *diag}), BigInt(2));
  const GradedGraph up = unordered_pairs(3);
  EXPECT_EQ(up.level_size(2), 3u);
  EXPECT_EQ(up.level_size(3), 6u);
}

TEST(Graph, PascalizationOfTheLineIsPascal) {
  const GradedGraph line = pascalization(chain_base(), 6);
  for (std::size_t n = 0; n <= 6; ++n) {
    ASSERT_EQ(line.level_size(n), n + 1);
    BigInt total = 0;
    for (std::size_t v = 0; v < line.level_size(n); ++v) total += line.dim({n, v});
    EXPECT_EQ(total, BigInt(1) << static_cast<unsigned>(n));
  }
}

TEST(Graph, TreePascalizationCountsWalks) {
  // Walks of length n from the root of T_3: total dimension is 3^n.
  const GradedGraph t = pascalization(tree_base(2), 5);
  EXPECT_EQ(t.kind(), "pascalization:tree3");
  for (std::size_t n = 0; n <= 5; ++n) {
    BigInt total = 0;
    for (std::size_t v = 0; v < t.level_size(n); ++v) total += t.dim({n, v});
    BigInt expect = 1;
    for (std::size_t k = 0; k < n; ++k) expect *= 3;
    EXPECT_EQ(total, expect);
  }
}

TEST(Graph, ConstructionErrors) {
  EXPECT_THROW(GradedGraph("x", {{{}, {}}}, {}), Error);
  EXPECT_THROW(GradedGraph("x", {{{}}, {{0}, {1}}}, {{{0, 0, BigInt(1)}}}), Error);  // (1,1) unreachable
  EXPECT_THROW(GradedGraph("x", {{{}}, {{0}}}, {{{0, 3, BigInt(1)}}}), Error);
  EXPECT_THROW(GradedGraph("x", {{{}}, {{0}}}, {{{0, 0, BigInt(-1)}}}), Error);
  EXPECT_THROW(pascal(0, 3), Error);
  const GradedGraph g = pascal(1, 3);
  EXPECT_THROW(g.check({4, 0}), Error);
  EXPECT_THROW(g.check({2, 3}), Error);
}

TEST(Graph, ParallelEdgesMerge) {
  const GradedGraph g("m", {{{}}, {{0}}, {{0}, {1}}},
                      {{{0, 0, BigInt(1)}}, {{0, 0, BigInt(2)}, {0, 0, BigInt(1)}, {0, 1, BigInt(1)}}});
  EXPECT_EQ(g.multiplicity(2, 0, 0), BigInt(3));
  EXPECT_EQ(g.in_edges({2, 0}).size(), 1u);
  EXPECT_EQ(g.dim({2, 0}), BigInt(3));
}

TEST(Telescope, EdgeMultiplicitiesArePathCounts) {
  const GradedGraph g = pascal(1, 8);
  const GradedGraph t = telescope(g, {0, 3, 8});
  EXPECT_EQ(t.depth(), 2u);
  EXPECT_EQ(t.kind(), "pascal/telescoped");
  for (std::size_t v = 0; v < t.level_size(2); ++v) EXPECT_EQ(t.dim({2, v}), g.dim({8, v}));
  // From (3 - i, i) to (8 - k, k): C(5, k - i) paths.
  for (std::size_t i = 0; i <= 3; ++i)
    for (std::size_t k = 0; k <= 8; ++k)
      EXPECT_EQ(t.multiplicity(2, pascal_index(3, i), pascal_index(8, k)),
                oracle::binomial(5, static_cast<long>(k) - static_cast<long>(i)));
  EXPECT_THROW(telescope(g, {1, 3}), Error);
  EXPECT_THROW(telescope(g, {0, 3, 3}), Error);
  EXPECT_THROW(telescope(g, {0, 9}), Error);
}

TEST(Telescope, CentralEquipmentComposes) {
  const GraphPtr g = share(pascal(1, 6));
  const auto eq = central_equipment<Rational>(g);
  const std::vector<std::size_t> idx{0, 2, 6};
  const GraphPtr t = share(telescope(*g, idx));
  const auto teq = telescope_equipment(eq, t, idx);
  const auto direct = central_equipment<Rational>(t);
  for (std::size_t n = 1; n <= 2; ++n)
    for (std::size_t v = 0; v < t->level_size(n); ++v) EXPECT_EQ(teq.bundle_weights({n, v}), direct.bundle_weights({n, v}));
}

TEST(Paths, EnumerationMatchesDimension) {
  const GradedGraph g = ordered_pairs(3);
  for (std::size_t v = 0; v < g.level_size(3); ++v) {
    long count = 0;
    for_each_path_into(g, {3, v}, [&](const PathPrefix& p) {
      validate_path(g, p);
      ++count;
    });
    EXPECT_EQ(BigInt(count), g.dim({3, v}));
  }
}

TEST(Paths, ValidationRejectsBrokenPaths) {
  const GradedGraph g = pascal(1, 4);
  PathPrefix p = path_through(g, {0, 1});
  EXPECT_NO_THROW(validate_path(g, p));
  p.steps[1].parallel = 1;
  EXPECT_THROW(validate_path(g, p), Error);
  EXPECT_THROW(path_through(g, {0, 2}), Error);
}

TEST(Equipment, CentralWeightsAreDimensionRatios) {
  const GraphPtr g = share(young(6));
  const auto eq = central_equipment<Rational>(g);
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t v = 0; v < g->level_size(n); ++v) {
      Rational total = 0;
      const auto in = g->in_edges({n, v});
      for (std::size_t s = 0; s < in.size(); ++s) {
        EXPECT_EQ(eq.bundle_weights({n, v})[s], oracle::ratio(in[s].mult * g->dim({n - 1, in[s].from}), g->dim({n, v})));
        total += eq.bundle_weights({n, v})[s];
      }
      EXPECT_EQ(total, 1);
    }
  EXPECT_TRUE(eq.strictly_positive());
}

TEST(Equipment, RejectsBadWeights) {
  const GraphPtr g = share(pascal(1, 2));
  std::vector<std::vector<std::vector<Rational>>> w{{}, {{1}, {1}}, {{1}, {Rational(1, 3), Rational(1, 3)}, {1}}};
  EXPECT_THROW(Equipment<Rational>(g, w), Error);
}
