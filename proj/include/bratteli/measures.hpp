#pragma once

// Markov measures on path spaces, their cotransitions, centrality, cocycles,
// level/vertex projections and the extremality (ergodicity) statistic.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bratteli/equipment.hpp"
#include "bratteli/paths.hpp"
#include "bratteli/telescope.hpp"

namespace bratteli {

template <Scalar S>
struct LevelDistribution {
  std::size_t level = 0;
  std::vector<S> probabilities;
};

// Transition probabilities per outgoing bundle (summed over parallel edges;
// each parallel edge carries bundle / mult). Initial distribution is δ_root.
// Level masses are computed at construction.
template <Scalar S>
class MarkovMeasure {
 public:
  // probs[n][u][k] is the probability of bundle graph.out_edges({n,u})[k],
  // for n = 0..depth-1. Vertices without mass may have empty rows.
  MarkovMeasure(GraphPtr graph, std::vector<std::vector<std::vector<S>>> probs)
      : graph_(std::move(graph)), probs_(std::move(probs)) {
    const auto& g = *graph_;
    if (probs_.size() != g.depth())
      throw invalid_argument("measure must give transitions for every level below the top");
    masses_.resize(g.depth() + 1);
    masses_[0] = {S(1)};
    for (std::size_t n = 0; n < g.depth(); ++n) {
      if (probs_[n].size() != g.level_size(n))
        throw Error("domain_mismatch", "transition table size mismatch at level " + std::to_string(n));
      masses_[n + 1].assign(g.level_size(n + 1), S(0));
      for (std::size_t u = 0; u < g.level_size(n); ++u) {
        auto& row = probs_[n][u];
        const auto out = g.out_edges({n, u});
        if (row.empty()) row.assign(out.size(), S(0));
        if (row.size() != out.size())
          throw Error("domain_mismatch", "transition row does not match outgoing edges");
        S total(0);
        for (const auto& x : row) {
          if (x < S(0)) throw invalid_argument("negative transition probability");
          total += x;
        }
        const bool reachable = masses_[n][u] > S(0);
        if (reachable && !near_zero<S>(S(total - S(1)), S(ScalarTraits<S>::tolerance() * 1000)))
          throw invalid_argument("transitions out of (" + std::to_string(n) + "," + std::to_string(u) +
                                 ") do not sum to 1");
        if (!reachable) continue;
        for (std::size_t k = 0; k < out.size(); ++k) masses_[n + 1][out[k].to] += masses_[n][u] * row[k];
      }
    }
  }

  const GradedGraph& graph() const noexcept { return *graph_; }
  const GraphPtr& graph_ptr() const noexcept { return graph_; }

  const S& bundle_probability(VertexId u, std::size_t k) const {
    graph_->check(u);
    return probs_.at(u.level).at(u.index).at(k);
  }
  S edge_probability(VertexId u, std::size_t k) const {
    const auto o = graph_->out_edges(u)[k];
    return bundle_probability(u, k) / from_bigint<S>(graph_->in_edges({u.level + 1, o.to})[o.slot].mult);
  }
  const std::vector<S>& level_masses(std::size_t n) const { return masses_.at(n); }
  const S& mass(VertexId v) const {
    graph_->check(v);
    return masses_[v.level][v.index];
  }
  const std::vector<std::vector<std::vector<S>>>& table() const noexcept { return probs_; }

  // Position in out_edges(from) of the bundle entering `to` through `slot`.
  std::size_t out_position(VertexId to, std::size_t slot) const {
    const std::size_t from = graph_->in_edges(to)[slot].from;
    const auto out = graph_->out_edges({to.level - 1, from});
    for (std::size_t k = 0; k < out.size(); ++k)
      if (out[k].to == to.index && out[k].slot == slot) return k;
    throw invalid_argument("inconsistent edge lookup");
  }

  // Probability of a single parallel edge entering `to` via bundle `slot`.
  S in_edge_probability(VertexId to, std::size_t slot) const {
    const std::size_t from = graph_->in_edges(to)[slot].from;
    return edge_probability({to.level - 1, from}, out_position(to, slot));
  }

  // Cylinder mass of a finite path.
  S path_mass(const PathPrefix& p) const {
    validate_path(*graph_, p);
    S m(1);
    for (std::size_t k = 1; k <= p.length(); ++k) m *= in_edge_probability({k, p.steps[k - 1].vertex}, p.steps[k - 1].slot);
    return m;
  }

 private:
  GraphPtr graph_;
  std::vector<std::vector<std::vector<S>>> probs_;
  std::vector<std::vector<S>> masses_;
};

// Measure whose bundle probabilities are given by rule(from, out_edge).
template <Scalar S, class Rule>
MarkovMeasure<S> measure_from_rule(const GraphPtr& graph, Rule rule) {
  const auto& g = *graph;
  std::vector<std::vector<std::vector<S>>> probs(g.depth());
  for (std::size_t n = 0; n < g.depth(); ++n) {
    probs[n].resize(g.level_size(n));
    for (std::size_t u = 0; u < g.level_size(n); ++u)
      for (const auto& o : g.out_edges({n, u})) probs[n][u].push_back(rule(VertexId{n, u}, o));
  }
  return MarkovMeasure<S>(graph, std::move(probs));
}

// i.i.d. digits on a Pascal graph pascal(d): digit j has probability probs[j].
template <Scalar S>
MarkovMeasure<S> multinomial_measure(const GraphPtr& graph, const std::vector<S>& probs) {
  const auto& g = *graph;
  return measure_from_rule<S>(graph, [&](VertexId u, const OutEdge& o) {
    const Label& from = g.label(u);
    const Label& to = g.label({u.level + 1, o.to});
    for (std::size_t j = 0; j < from.size(); ++j)
      if (to[j] == from[j] + 1) return probs.at(j);
    throw invalid_argument("multinomial_measure: not a Pascal-type graph");
  });
}

// Bernoulli(p) digits: on pascal(1) a step adding a one, on the dyadic graph
// a step into vertex 1, has probability p.
template <Scalar S>
MarkovMeasure<S> bernoulli_measure(const GraphPtr& graph, const S& p) {
  const auto& g = *graph;
  if (p < S(0) || p > S(1)) throw invalid_argument("bernoulli parameter outside [0,1]");
  if (g.kind() == "pascal") return multinomial_measure<S>(graph, {S(S(1) - p), p});
  return measure_from_rule<S>(graph, [&](VertexId u, const OutEdge& o) {
    const Label& to = g.label({u.level + 1, o.to});
    if (to.size() != 1 || to[0] < 0 || to[0] > 1)
      throw invalid_argument("bernoulli_measure: expects pascal(1) or dyadic");
    return to[0] == 1 ? p : S(S(1) - p);
  });
}

// Chain on the state graph whose positive levels carry states label[0]:
// the first step uses `initial`, later steps the transition matrix.
template <Scalar S>
MarkovMeasure<S> markov_chain_measure(const GraphPtr& graph, const std::vector<S>& initial,
                                      const Matrix<S>& transition) {
  const auto& g = *graph;
  return measure_from_rule<S>(graph, [&](VertexId u, const OutEdge& o) {
    const auto to = static_cast<std::size_t>(g.label({u.level + 1, o.to}).at(0));
    if (u.level == 0) return initial.at(to);
    const auto from = static_cast<std::size_t>(g.label(u).at(0));
    return transition(from, to);
  });
}

// Cotransitions induced by a measure. Vertices without mass are left outside
// the equipment's domain.
template <Scalar S>
Equipment<S> cotransitions_of(const MarkovMeasure<S>& mu) {
  const auto& g = mu.graph();
  std::vector<std::vector<std::vector<S>>> w(g.depth() + 1);
  for (std::size_t n = 1; n <= g.depth(); ++n) {
    w[n].resize(g.level_size(n));
    for (std::size_t v = 0; v < g.level_size(n); ++v) {
      const S& mv = mu.mass({n, v});
      if (!(mv > S(0))) continue;
      const auto edges = g.in_edges({n, v});
      for (std::size_t s = 0; s < edges.size(); ++s) {
        const S& mu_u = mu.mass({n - 1, edges[s].from});
        const auto k = mu.out_position({n, v}, s);
        w[n][v].push_back(S(mu_u * mu.bundle_probability({n - 1, edges[s].from}, k) / mv));
      }
    }
  }
  return Equipment<S>(mu.graph_ptr(), std::move(w));
}

// Markov measure with prescribed level masses and cotransitions:
// p(u -> v) = μ_{n+1}(v) λ_v^u / μ_n(u).
template <Scalar S>
MarkovMeasure<S> measure_from_masses(const Equipment<S>& eq, const std::vector<std::vector<S>>& masses) {
  const auto& g = eq.graph();
  if (masses.size() != g.depth() + 1) throw invalid_argument("need masses for every level");
  std::vector<std::vector<std::vector<S>>> probs(g.depth());
  for (std::size_t n = 0; n < g.depth(); ++n) {
    probs[n].resize(g.level_size(n));
    for (std::size_t u = 0; u < g.level_size(n); ++u) {
      const auto out = g.out_edges({n, u});
      if (!(masses[n][u] > S(0))) continue;
      for (const auto& o : out) {
        const VertexId v{n + 1, o.to};
        S p(0);
        if (masses[n + 1][o.to] > S(0)) p = masses[n + 1][o.to] * eq.bundle_weights(v)[o.slot] / masses[n][u];
        probs[n][u].push_back(p);
      }
    }
  }
  return MarkovMeasure<S>(eq.graph_ptr(), std::move(probs));
}

// Convex combination of measures that share one cotransition system (for
// example central measures); the result is again Markov on the graph.
template <Scalar S>
MarkovMeasure<S> mixture(const std::vector<MarkovMeasure<S>>& parts, const std::vector<S>& weights) {
  if (parts.empty() || parts.size() != weights.size()) throw invalid_argument("mixture: bad arguments");
  const auto& g = parts[0].graph();
  std::vector<std::vector<S>> masses(g.depth() + 1);
  for (std::size_t n = 0; n <= g.depth(); ++n) {
    masses[n].assign(g.level_size(n), S(0));
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::size_t v = 0; v < g.level_size(n); ++v) masses[n][v] += weights[i] * parts[i].level_masses(n)[v];
  }
  // Cotransitions of the mixture; they must agree with each component's.
  std::vector<std::vector<std::vector<S>>> w(g.depth() + 1);
  std::vector<Equipment<S>> cot;
  for (const auto& p : parts) cot.push_back(cotransitions_of(p));
  for (std::size_t n = 1; n <= g.depth(); ++n) {
    w[n].resize(g.level_size(n));
    for (std::size_t v = 0; v < g.level_size(n); ++v) {
      if (!(masses[n][v] > S(0))) continue;
      const std::size_t k = g.in_edges({n, v}).size();
      w[n][v].assign(k, S(0));
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!cot[i].defined({n, v})) continue;
        const auto& lam = cot[i].bundle_weights({n, v});
        for (std::size_t s = 0; s < k; ++s) w[n][v][s] += weights[i] * parts[i].mass({n, v}) * lam[s] / masses[n][v];
      }
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!cot[i].defined({n, v})) continue;
        const auto& lam = cot[i].bundle_weights({n, v});
        for (std::size_t s = 0; s < k; ++s)
          if (!near_zero<S>(S(lam[s] - w[n][v][s]), S(ScalarTraits<S>::tolerance() * 1000)))
            throw invalid_argument("mixture components do not share cotransitions");
      }
    }
  }
  return measure_from_masses(Equipment<S>(parts[0].graph_ptr(), std::move(w)), masses);
}

// Image of a measure on telescope(graph, indices): same level masses at the
// kept levels, composed cotransitions in between.
template <Scalar S>
MarkovMeasure<S> telescope_measure(const MarkovMeasure<S>& mu, const GraphPtr& telescoped,
                                   const std::vector<std::size_t>& indices) {
  const auto eq = telescope_equipment(cotransitions_of(mu), telescoped, indices);
  std::vector<std::vector<S>> masses;
  for (std::size_t n : indices) masses.push_back(mu.level_masses(n));
  return measure_from_masses(eq, masses);
}

template <Scalar S>
LevelDistribution<S> level_projection(const MarkovMeasure<S>& mu, std::size_t n) {
  if (n > mu.graph().depth()) throw Error("unknown_vertex", "level beyond graph depth");
  return {n, mu.level_masses(n)};
}

template <Scalar S>
struct CentralityReport {
  bool central = true;
  S deviation = S(0);
  std::optional<VertexId> worst;
};

// All root paths into each vertex (up to max_level) carry equal mass iff the
// minimum and maximum path masses agree; both come from a forward DP.
template <Scalar S>
CentralityReport<S> is_central(const MarkovMeasure<S>& mu, std::size_t max_level) {
  const auto& g = mu.graph();
  if (max_level > g.depth()) throw Error("unknown_vertex", "max_level beyond graph depth");
  CentralityReport<S> report;
  std::vector<S> lo{S(1)}, hi{S(1)};
  for (std::size_t n = 1; n <= max_level; ++n) {
    std::vector<S> nlo(g.level_size(n)), nhi(g.level_size(n));
    for (std::size_t v = 0; v < g.level_size(n); ++v) {
      const VertexId id{n, v};
      const auto edges = g.in_edges(id);
      bool first = true;
      for (std::size_t s = 0; s < edges.size(); ++s) {
        const S p = mu.in_edge_probability(id, s);
        const S a = lo[edges[s].from] * p;
        const S b = hi[edges[s].from] * p;
        if (first || a < nlo[v]) nlo[v] = a;
        if (first || b > nhi[v]) nhi[v] = b;
        first = false;
      }
      const S& m = mu.mass(id);
      if (!(m > S(0))) continue;
      const S mean = m / from_bigint<S>(g.dim(id));
      const S dev = (nhi[v] - nlo[v]) / mean;
      if (dev > report.deviation) {
        report.deviation = dev;
        report.worst = id;
      }
    }
    lo = std::move(nlo);
    hi = std::move(nhi);
  }
  report.central = near_zero<S>(report.deviation, S(1e-12));
  return report;
}

// Ratio of cotransition products along two cofinal prefixes (same length,
// same endpoint; the shared tail cancels).
template <Scalar S>
S cocycle(const Equipment<S>& eq, const PathPrefix& a, const PathPrefix& b) {
  const auto& g = eq.graph();
  validate_path(g, a);
  validate_path(g, b);
  if (a.length() != b.length() || a.end() != b.end())
    throw Error("not_cofinal", "cocycle needs paths ending at the same vertex");
  std::size_t k = a.length();
  while (k > 0 && a.steps[k - 1] == b.steps[k - 1]) --k;
  S num(1), den(1);
  for (std::size_t j = 1; j <= k; ++j) {
    num *= eq.edge_weight({j, a.steps[j - 1].vertex}, a.steps[j - 1].slot);
    den *= eq.edge_weight({j, b.steps[j - 1].vertex}, b.steps[j - 1].slot);
  }
  if (near_zero<S>(den, S(0))) throw invalid_argument("cocycle undefined: zero cotransition product");
  return num / den;
}

// Rows: vertices of level m; columns: level n < m. Row v is p_{m,n}(δ_v), the
// composition of one-step cotransition projections. Built upward from n.
template <Scalar S>
Matrix<S> projection_table(const Equipment<S>& eq, std::size_t m, std::size_t n) {
  const auto& g = eq.graph();
  if (n >= m) throw invalid_argument("projection needs target level n < m");
  if (m > g.depth()) throw Error("unknown_vertex", "level beyond graph depth");
  Matrix<S> cur(g.level_size(n), g.level_size(n), S(0));
  for (std::size_t i = 0; i < g.level_size(n); ++i) cur(i, i) = S(1);
  for (std::size_t k = n + 1; k <= m; ++k) {
    Matrix<S> next(g.level_size(k), g.level_size(n), S(0));
    for (std::size_t v = 0; v < g.level_size(k); ++v) {
      if (!eq.defined({k, v})) continue;
      const auto edges = g.in_edges({k, v});
      const auto& lam = eq.bundle_weights({k, v});
      for (std::size_t s = 0; s < edges.size(); ++s) {
        if (near_zero<S>(lam[s], S(0))) continue;
        for (std::size_t j = 0; j < cur.cols(); ++j)
          if (!near_zero<S>(cur(edges[s].from, j), S(0))) next(v, j) += lam[s] * cur(edges[s].from, j);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

template <Scalar S>
LevelDistribution<S> vertex_projection(const Equipment<S>& eq, VertexId v, std::size_t n) {
  eq.graph().check(v);
  if (n >= v.level) throw invalid_argument("vertex_projection needs n < level of the vertex");
  if (!eq.defined(v)) throw Error("domain_mismatch", "vertex outside the equipment domain");
  // Backward composition from the single vertex; cheaper than a full table.
  const auto& g = eq.graph();
  std::vector<S> cur(g.level_size(v.level), S(0));
  cur[v.index] = S(1);
  for (std::size_t k = v.level; k > n; --k) {
    std::vector<S> next(g.level_size(k - 1), S(0));
    for (std::size_t w = 0; w < cur.size(); ++w) {
      if (near_zero<S>(cur[w], S(0))) continue;
      const auto edges = g.in_edges({k, w});
      const auto& lam = eq.bundle_weights({k, w});
      for (std::size_t s = 0; s < edges.size(); ++s) next[edges[s].from] += cur[w] * lam[s];
    }
    cur = std::move(next);
  }
  return {n, std::move(cur)};
}

enum class Norm { l1, euclidean, sup };

// Σ_{v ∈ Γ_m} μ_m(v)·1[‖p_{m,n}(δ_v) − μ_n‖ ≤ ε]. Euclidean distances are
// compared squared, so rational inputs give an exact answer.
template <Scalar S>
S extremality_statistic(const Equipment<S>& eq, const MarkovMeasure<S>& mu, std::size_t n, std::size_t m,
                        const S& eps, Norm norm = Norm::euclidean) {
  if (n >= m) throw invalid_argument("extremality statistic needs n < m");
  const auto table = projection_table(eq, m, n);
  const auto& target = mu.level_masses(n);
  const auto& weights = mu.level_masses(m);
  const S eps2 = eps * eps;
  S total(0);
  for (std::size_t v = 0; v < table.rows(); ++v) {
    if (!(weights[v] > S(0))) continue;
    S dist(0);
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const S diff = abs_value<S>(S(table(v, j) - target[j]));
      switch (norm) {
        case Norm::l1: dist += diff; break;
        case Norm::euclidean: dist += diff * diff; break;
        case Norm::sup: if (diff > dist) dist = diff; break;
      }
    }
    if (dist <= (norm == Norm::euclidean ? eps2 : eps)) total += weights[v];
  }
  return total;
}

}  // namespace bratteli
