#pragma once

// Cotransition systems (Λ-structures) on a graded graph.
//
// Weights are stored per incoming edge bundle, i.e. summed over parallel
// edges; each individual parallel edge carries bundle_weight / mult. A vertex
// may be left undefined, which is how measure-derived equipments restrict
// themselves to the subgraph carrying mass.

#include <utility>
#include <vector>

#include "bratteli/graph.hpp"

namespace bratteli {

template <Scalar S>
class Equipment {
 public:
  // weights[n][v][slot] for n = 1..depth (weights[0] is ignored); an empty
  // weight vector marks v as outside the equipment's domain.
  Equipment(GraphPtr graph, std::vector<std::vector<std::vector<S>>> weights)
      : graph_(std::move(graph)), weights_(std::move(weights)) {
    const auto& g = *graph_;
    if (weights_.size() != g.depth() + 1)
      throw invalid_argument("equipment must cover every level of the graph");
    weights_[0].assign(1, {});
    for (std::size_t n = 1; n <= g.depth(); ++n) {
      if (weights_[n].size() != g.level_size(n))
        throw Error("domain_mismatch", "equipment level size mismatch at level " + std::to_string(n));
      for (std::size_t v = 0; v < weights_[n].size(); ++v) {
        const auto& w = weights_[n][v];
        if (w.empty()) continue;
        if (w.size() != g.in_edges({n, v}).size())
          throw Error("domain_mismatch", "equipment weights do not match incoming edges");
        S total(0);
        for (const auto& x : w) {
          if (x < S(0)) throw invalid_argument("negative cotransition weight");
          total += x;
        }
        if (!near_zero<S>(S(total - S(1)), S(ScalarTraits<S>::tolerance() * 1000)))
          throw invalid_argument("cotransition weights at (" + std::to_string(n) + "," +
                                 std::to_string(v) + ") do not sum to 1");
      }
    }
  }

  const GradedGraph& graph() const noexcept { return *graph_; }
  const GraphPtr& graph_ptr() const noexcept { return graph_; }

  bool defined(VertexId v) const {
    graph_->check(v);
    return v.level == 0 || !weights_[v.level][v.index].empty();
  }

  const std::vector<S>& bundle_weights(VertexId v) const {
    require(v);
    return weights_[v.level][v.index];
  }

  // Weight of a single parallel edge inside bundle `slot`.
  S edge_weight(VertexId v, std::size_t slot) const {
    require(v);
    return weights_[v.level][v.index][slot] / from_bigint<S>(graph_->in_edges(v)[slot].mult);
  }

  // Cotransition distribution of v as a dense vector over the previous level.
  std::vector<S> distribution(VertexId v) const {
    require(v);
    std::vector<S> d(graph_->level_size(v.level - 1), S(0));
    const auto edges = graph_->in_edges(v);
    for (std::size_t s = 0; s < edges.size(); ++s) d[edges[s].from] = weights_[v.level][v.index][s];
    return d;
  }

  bool strictly_positive() const {
    for (std::size_t n = 1; n < weights_.size(); ++n)
      for (const auto& w : weights_[n])
        for (const auto& x : w)
          if (!(x > S(0))) return false;
    return true;
  }

  template <Scalar T>
  Equipment<T> convert() const {
    std::vector<std::vector<std::vector<T>>> w(weights_.size());
    for (std::size_t n = 0; n < weights_.size(); ++n) {
      w[n].resize(weights_[n].size());
      for (std::size_t v = 0; v < weights_[n].size(); ++v)
        for (const auto& x : weights_[n][v]) {
          if constexpr (std::same_as<T, S>) {
            w[n][v].push_back(x);
          } else if constexpr (std::same_as<S, Rational>) {
            w[n][v].push_back(static_cast<T>(to_double(x)));
          } else {
            w[n][v].push_back(from_rational<T>(Rational(static_cast<double>(x))));
          }
        }
    }
    return Equipment<T>(graph_, std::move(w));
  }

 private:
  void require(VertexId v) const {
    graph_->check(v);
    if (v.level == 0) throw invalid_argument("the root has no cotransitions");
    if (weights_[v.level][v.index].empty())
      throw Error("domain_mismatch", "vertex (" + std::to_string(v.level) + "," +
                                         std::to_string(v.index) + ") is outside the equipment domain");
  }

  GraphPtr graph_;
  std::vector<std::vector<std::vector<S>>> weights_;
};

// λ_v^u = mult(u,v)·dim(u)/dim(v) per bundle, i.e. dim(u)/dim(v) per parallel
// edge: the fraction of root paths into v that pass through that edge.
template <Scalar S = Rational>
Equipment<S> central_equipment(const GraphPtr& graph) {
  const auto& g = *graph;
  std::vector<std::vector<std::vector<S>>> w(g.depth() + 1);
  for (std::size_t n = 1; n <= g.depth(); ++n) {
    w[n].resize(g.level_size(n));
    for (std::size_t v = 0; v < g.level_size(n); ++v) {
      const BigInt& dv = g.dim({n, v});
      for (const auto& e : g.in_edges({n, v})) {
        Rational q(e.mult * g.dim({n - 1, e.from}), dv);
        q.canonicalize();
        w[n][v].push_back(from_rational<S>(q));
      }
    }
  }
  return Equipment<S>(graph, std::move(w));
}

// Cotransition matrix of level n: rows = level n vertices, cols = level n-1.
template <Scalar S>
Matrix<S> cotransition_matrix(const Equipment<S>& eq, std::size_t n) {
  const auto& g = eq.graph();
  Matrix<S> m(g.level_size(n), g.level_size(n - 1), S(0));
  for (std::size_t v = 0; v < g.level_size(n); ++v) {
    if (!eq.defined({n, v})) continue;
    const auto edges = g.in_edges({n, v});
    const auto& w = eq.bundle_weights({n, v});
    for (std::size_t s = 0; s < edges.size(); ++s) m(v, edges[s].from) = w[s];
  }
  return m;
}

}  // namespace bratteli
