#pragma once

// Telescoping: keep the levels n_0 = 0 < n_1 < n_2 < ... and replace the
// removed stretches by path bundles, multiplicity = number of old paths.

#include <vector>

#include "bratteli/equipment.hpp"
#include "bratteli/graph.hpp"

namespace bratteli {

namespace detail {

inline void check_telescope_indices(const GradedGraph& g, const std::vector<std::size_t>& idx) {
  if (idx.empty() || idx[0] != 0) throw invalid_argument("telescope indices must start at 0");
  for (std::size_t k = 1; k < idx.size(); ++k)
    if (idx[k] <= idx[k - 1]) throw invalid_argument("telescope indices must be strictly increasing");
  if (idx.back() > g.depth())
    throw Error("out_of_range", "telescope index " + std::to_string(idx.back()) +
                                    " beyond graph depth " + std::to_string(g.depth()));
}

// Path counts from every vertex of level a to every vertex of level b.
inline Matrix<BigInt> path_counts(const GradedGraph& g, std::size_t a, std::size_t b) {
  Matrix<BigInt> cur(g.level_size(a), g.level_size(a), BigInt(0));
  for (std::size_t i = 0; i < g.level_size(a); ++i) cur(i, i) = 1;
  for (std::size_t n = a; n < b; ++n) {
    Matrix<BigInt> next(g.level_size(a), g.level_size(n + 1), BigInt(0));
    for (std::size_t w = 0; w < g.level_size(n + 1); ++w)
      for (const auto& e : g.in_edges({n + 1, w}))
        for (std::size_t i = 0; i < cur.rows(); ++i)
          if (sgn(cur(i, e.from)) != 0) next(i, w) += cur(i, e.from) * e.mult;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace detail

inline GradedGraph telescope(const GradedGraph& g, const std::vector<std::size_t>& indices) {
  detail::check_telescope_indices(g, indices);
  std::vector<std::vector<Label>> levels;
  std::vector<std::vector<EdgeSpec>> edges;
  for (std::size_t n : indices) levels.push_back(g.labels(n));
  for (std::size_t k = 1; k < indices.size(); ++k) {
    const auto counts = detail::path_counts(g, indices[k - 1], indices[k]);
    std::vector<EdgeSpec> e;
    for (std::size_t u = 0; u < counts.rows(); ++u)
      for (std::size_t w = 0; w < counts.cols(); ++w)
        if (sgn(counts(u, w)) != 0) e.push_back({u, w, counts(u, w)});
    edges.push_back(std::move(e));
  }
  return GradedGraph(g.kind() + "/telescoped", std::move(levels), std::move(edges));
}

// Composed cotransitions on a telescoped graph: the product of the stepwise
// cotransition matrices over each removed stretch. `telescoped` must be
// telescope(eq.graph(), indices).
template <Scalar S>
Equipment<S> telescope_equipment(const Equipment<S>& eq, const GraphPtr& telescoped,
                                 const std::vector<std::size_t>& indices) {
  const auto& g = eq.graph();
  detail::check_telescope_indices(g, indices);
  if (telescoped->depth() + 1 != indices.size())
    throw Error("domain_mismatch", "telescoped graph does not match the index list");
  std::vector<std::vector<std::vector<S>>> w(indices.size());
  for (std::size_t k = 1; k < indices.size(); ++k) {
    // Rows are level indices[k], cols level indices[k-1].
    Matrix<S> prod = cotransition_matrix(eq, indices[k - 1] + 1);
    for (std::size_t n = indices[k - 1] + 2; n <= indices[k]; ++n) {
      const Matrix<S> step = cotransition_matrix(eq, n);
      Matrix<S> next(step.rows(), prod.cols(), S(0));
      for (std::size_t v = 0; v < step.rows(); ++v)
        for (std::size_t u = 0; u < step.cols(); ++u) {
          if (near_zero<S>(step(v, u), S(0))) continue;
          for (std::size_t j = 0; j < prod.cols(); ++j) next(v, j) += step(v, u) * prod(u, j);
        }
      prod = std::move(next);
    }
    w[k].resize(telescoped->level_size(k));
    for (std::size_t v = 0; v < telescoped->level_size(k); ++v) {
      if (!eq.defined({indices[k], v})) continue;
      for (const auto& e : telescoped->in_edges({k, v})) w[k][v].push_back(prod(v, e.from));
    }
  }
  return Equipment<S>(telescoped, std::move(w));
}

}  // namespace bratteli
