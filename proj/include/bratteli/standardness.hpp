#pragma once

// Metric iterations on tail filtrations: the transferred (Kantorovich) level
// metrics ρ_n behind weak standardness, the filtration distance between
// conditional trees behind standardness (ρ̄_n), the binary-tree orbit
// distance, and a lacunary (telescoping) search.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bratteli/measures.hpp"
#include "bratteli/telescope.hpp"
#include "bratteli/transport.hpp"

namespace bratteli {

template <Scalar S>
struct LevelMetric {
  std::size_t level = 0;
  Matrix<S> d;

  void validate() const {
    if (d.rows() != d.cols()) throw invalid_argument("level metric must be square");
    for (std::size_t i = 0; i < d.rows(); ++i) {
      if (!near_zero<S>(d(i, i))) throw invalid_argument("level metric must have a zero diagonal");
      for (std::size_t j = 0; j < d.cols(); ++j) {
        if (d(i, j) < S(0)) throw invalid_argument("level metric must be nonnegative");
        if (!near_zero<S>(S(d(i, j) - d(j, i)))) throw invalid_argument("level metric must be symmetric");
      }
    }
  }
};

template <Scalar S>
LevelMetric<S> discrete_level_metric(const GradedGraph& g, std::size_t level, const S& scale = S(1)) {
  LevelMetric<S> m{level, discrete_metric<S>(g.level_size(level))};
  for (std::size_t i = 0; i < m.d.rows(); ++i)
    for (std::size_t j = 0; j < m.d.cols(); ++j) m.d(i, j) *= scale;
  return m;
}

// ρ_{n+1}(v, w) = K_{ρ_n}(λ_v, λ_w). With skip_undefined, vertices outside the
// equipment domain get zero rows instead of raising.
template <Scalar S>
LevelMetric<S> transfer_metric(const Equipment<S>& eq, const LevelMetric<S>& rho, bool skip_undefined = false) {
  const auto& g = eq.graph();
  const std::size_t n = rho.level;
  if (n >= g.depth()) throw Error("unknown_vertex", "no level above the metric's level");
  if (rho.d.rows() != g.level_size(n)) throw Error("domain_mismatch", "metric does not cover its level");
  const std::size_t size = g.level_size(n + 1);
  LevelMetric<S> out{n + 1, Matrix<S>(size, size, S(0))};
  std::vector<std::optional<std::vector<S>>> lam(size);
  for (std::size_t v = 0; v < size; ++v) {
    if (eq.defined({n + 1, v}))
      lam[v] = eq.distribution({n + 1, v});
    else if (!skip_undefined)
      throw Error("domain_mismatch", "vertex (" + std::to_string(n + 1) + "," + std::to_string(v) +
                                         ") is outside the equipment domain");
  }
  for (std::size_t v = 0; v < size; ++v)
    for (std::size_t w = v + 1; w < size; ++w) {
      if (!lam[v] || !lam[w]) continue;
      const S k = kantorovich(*lam[v], *lam[w], rho.d);
      out.d(v, w) = k;
      out.d(w, v) = k;
    }
  return out;
}

// Σ_{v,w} μ(v) μ(w) d(v, w).
template <Scalar S>
S expected_distance(const Matrix<S>& d, const std::vector<S>& mass) {
  S total(0);
  for (std::size_t v = 0; v < mass.size(); ++v) {
    if (near_zero<S>(mass[v])) continue;
    for (std::size_t w = 0; w < mass.size(); ++w)
      if (!near_zero<S>(mass[w])) total += mass[v] * mass[w] * d(v, w);
  }
  return total;
}

struct ScanOptions {
  // Graph level carrying ρ_0; ρ_n lives on level base + n.
  std::size_t base = 1;
  double tol = 1e-3;
};

template <Scalar S>
struct ScanResult {
  // values[n] for n = 0..N; values[0] is the initial expectation.
  std::vector<S> values;
  // Weak scan: ρ_n. Strong scan: pairwise filtration distances at level base+n.
  std::vector<Matrix<S>> pairwise;
  std::string verdict;
};

namespace detail {

template <Scalar S>
bool below(const S& x, double tol) {
  return to_double(x) < tol;
}

template <Scalar S>
void check_scan(const Equipment<S>& eq, const MarkovMeasure<S>& mu, std::size_t N, const ScanOptions& opt) {
  if (eq.graph().depth() < opt.base + N)
    throw Error("out_of_range", "graph too shallow: scan needs level " + std::to_string(opt.base + N));
  if (mu.graph().depth() != eq.graph().depth()) throw Error("domain_mismatch", "measure and equipment differ");
}

}  // namespace detail

// s_n = Σ μ_n(v) μ_n(w) ρ_n(v, w) for n = 0..N, ρ_0 = rho0 (discrete if absent).
template <Scalar S>
ScanResult<S> weak_standardness_scan(const Equipment<S>& eq, const MarkovMeasure<S>& mu, std::size_t N,
                                     const ScanOptions& opt = {},
                                     const std::optional<LevelMetric<S>>& rho0 = std::nullopt) {
  detail::check_scan(eq, mu, N, opt);
  LevelMetric<S> rho = rho0 ? *rho0 : discrete_level_metric<S>(eq.graph(), opt.base);
  rho.level = opt.base;
  rho.validate();
  ScanResult<S> r;
  for (std::size_t n = 0;; ++n) {
    r.values.push_back(expected_distance(rho.d, mu.level_masses(opt.base + n)));
    r.pairwise.push_back(rho.d);
    if (n == N) break;
    rho = transfer_metric(eq, rho, true);
  }
  bool tail_down = true;
  for (std::size_t n = r.values.size() / 2; n + 1 < r.values.size(); ++n)
    if (r.values[n + 1] > r.values[n]) tail_down = false;
  r.verdict = detail::below(r.values.back(), opt.tol) && tail_down ? "weakly_standard_evidence" : "no_evidence";
  return r;
}

// Leaf cost between two finite path segments (the vertex sequences at levels
// top-1 .. base of two conditional trees). PathSup takes the largest per-level
// metric entry along the segments, which for discrete metrics is the discrete
// metric on segments; BaseCoordinate compares only the base-level vertices.
template <Scalar S>
struct LeafCost {
  enum class Mode { path_sup, base_coordinate };
  Mode mode = Mode::path_sup;
  // Metric on each level; unspecified levels use the discrete metric.
  std::map<std::size_t, Matrix<S>> level_metrics;

  Matrix<S> at(const GradedGraph& g, std::size_t level) const {
    auto it = level_metrics.find(level);
    return it != level_metrics.end() ? it->second : discrete_metric<S>(g.level_size(level));
  }
};

// Filtration distance between the conditional trees of two vertices of the
// same level, computed by the level-recursive (Markov coupling) optimum with
// memoization over (level, a, b, running leaf cost). Parallel edges are merged
// by vertex.
template <Scalar S>
class StrongScanner {
 public:
  StrongScanner(const Equipment<S>& eq, std::size_t base, LeafCost<S> leaf)
      : eq_(eq), base_(base), leaf_(std::move(leaf)) {
    const auto& g = eq_.graph();
    if (base_ > g.depth()) throw Error("out_of_range", "base level beyond graph depth");
    for (std::size_t n = base_; n <= g.depth(); ++n) {
      metrics_.push_back(leaf_.at(g, n));
      if (metrics_.back().rows() != g.level_size(n)) throw Error("domain_mismatch", "leaf metric size mismatch");
      for (std::size_t i = 0; i < metrics_.back().rows(); ++i)
        for (std::size_t j = 0; j < metrics_.back().cols(); ++j)
          if (!bound_ || metrics_.back()(i, j) > *bound_) bound_ = metrics_.back()(i, j);
    }
  }

  // Distance between the trees of a and b at `level` (>= base).
  S distance(std::size_t level, std::size_t a, std::size_t b) {
    if (level < base_) throw invalid_argument("level below the tree base");
    if (level == base_) return d(base_, a, b);
    return rec(level, a, b, S(0));
  }

  Matrix<S> pairwise(std::size_t level) {
    const std::size_t n = eq_.graph().level_size(level);
    Matrix<S> m(n, n, S(0));
    for (std::size_t v = 0; v < n; ++v) {
      if (!eq_.defined({level, v})) continue;
      for (std::size_t w = v + 1; w < n; ++w) {
        if (!eq_.defined({level, w})) continue;
        m(v, w) = m(w, v) = distance(level, v, w);
      }
    }
    return m;
  }

 private:
  const S& d(std::size_t level, std::size_t a, std::size_t b) const { return metrics_[level - base_](a, b); }

  S rec(std::size_t level, std::size_t a, std::size_t b, const S& acc) {
    const bool sup = leaf_.mode == LeafCost<S>::Mode::path_sup;
    if (level == base_) return sup ? acc : S(0);
    if (sup && (a == b || (bound_ && acc >= *bound_))) return acc;
    if (!sup && a == b) return S(0);
    const auto key = std::make_tuple(level, std::min(a, b), std::max(a, b), sup ? acc : S(0));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const VertexId va{level, a}, vb{level, b};
    const auto ea = eq_.graph().in_edges(va), eb = eq_.graph().in_edges(vb);
    const auto& la = eq_.bundle_weights(va);
    const auto& lb = eq_.bundle_weights(vb);
    Matrix<S> cost(ea.size(), eb.size(), S(0));
    for (std::size_t i = 0; i < ea.size(); ++i)
      for (std::size_t j = 0; j < eb.size(); ++j) {
        if (near_zero<S>(la[i]) || near_zero<S>(lb[j])) continue;
        const std::size_t x = ea[i].from, y = eb[j].from;
        if (level - 1 == base_ && !sup) {
          cost(i, j) = d(base_, x, y);
          continue;
        }
        const S& step = d(level - 1, x, y);
        cost(i, j) = rec(level - 1, x, y, sup && step > acc ? step : acc);
      }
    const S value = transport(la, lb, cost).value;
    memo_.emplace(key, value);
    return value;
  }

  const Equipment<S>& eq_;
  std::size_t base_;
  LeafCost<S> leaf_;
  std::vector<Matrix<S>> metrics_;
  std::optional<S> bound_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, S>, S> memo_;
};

// ρ̄_n = Σ μ(v) μ(w) · filtration distance of the conditional trees of v, w at
// level base + n, for n = 0..N.
template <Scalar S>
ScanResult<S> standardness_scan(const Equipment<S>& eq, const MarkovMeasure<S>& mu, std::size_t N,
                                const ScanOptions& opt = {}, LeafCost<S> leaf = {}) {
  detail::check_scan(eq, mu, N, opt);
  StrongScanner<S> scanner(eq, opt.base, std::move(leaf));
  ScanResult<S> r;
  for (std::size_t n = 0; n <= N; ++n) {
    const std::size_t level = opt.base + n;
    const std::size_t size = eq.graph().level_size(level);
    Matrix<S> m(size, size, S(0));
    const auto& mass = mu.level_masses(level);
    for (std::size_t v = 0; v < size; ++v)
      for (std::size_t w = v + 1; w < size; ++w)
        if (!near_zero<S>(mass[v]) && !near_zero<S>(mass[w])) m(v, w) = m(w, v) = scanner.distance(level, v, w);
    r.values.push_back(expected_distance(m, mass));
    r.pairwise.push_back(std::move(m));
  }
  r.verdict = detail::below(r.values.back(), opt.tol) ? "standard" : "nonstandard";
  return r;
}

// Explicit tree of partitions: node 0 is the root, every leaf sits at the
// same depth and carries an identity used by the leaf cost.
template <Scalar S>
struct FiltrationTree {
  struct Node {
    std::vector<std::pair<S, std::size_t>> children;
    Label leaf;
  };
  std::vector<Node> nodes;

  std::size_t height() const {
    std::function<std::size_t(std::size_t)> h = [&](std::size_t i) -> std::size_t {
      const auto& c = nodes.at(i).children;
      if (c.empty()) return 0;
      const std::size_t first = h(c[0].second);
      for (const auto& [p, k] : c)
        if (h(k) != first) throw invalid_argument("filtration tree height is not uniform");
      return first + 1;
    };
    return h(0);
  }

  void validate() const {
    if (nodes.empty()) throw invalid_argument("empty filtration tree");
    for (const auto& n : nodes) {
      if (n.children.empty()) continue;
      S total(0);
      for (const auto& [p, k] : n.children) {
        if (p < S(0)) throw invalid_argument("negative tree edge probability");
        if (k >= nodes.size()) throw invalid_argument("tree child index out of range");
        total += p;
      }
      if (!near_zero<S>(S(total - S(1)), S(1e-9))) throw invalid_argument("tree children do not sum to 1");
    }
    (void)height();
  }

  // Leaves with their total probabilities.
  std::vector<std::pair<Label, S>> leaf_distribution() const {
    std::vector<std::pair<Label, S>> out;
    std::function<void(std::size_t, const S&)> walk = [&](std::size_t i, const S& p) {
      if (nodes[i].children.empty()) {
        out.emplace_back(nodes[i].leaf, p);
        return;
      }
      for (const auto& [q, k] : nodes[i].children) walk(k, S(p * q));
    };
    walk(0, S(1));
    return out;
  }
};

// Conditional tree of the finite paths into v, truncated at level `base`. A
// leaf's identity is its vertex sequence at levels v.level-1 .. base.
template <Scalar S>
FiltrationTree<S> conditional_tree(const Equipment<S>& eq, VertexId v, std::size_t base) {
  if (base > v.level) throw invalid_argument("tree base above the vertex");
  FiltrationTree<S> t;
  t.nodes.emplace_back();
  std::function<void(std::size_t, std::size_t, std::size_t, Label)> grow = [&](std::size_t node, std::size_t level,
                                                                                std::size_t vertex, Label seq) {
    if (level == base) {
      t.nodes[node].leaf = std::move(seq);
      return;
    }
    const auto edges = eq.graph().in_edges({level, vertex});
    const auto& lam = eq.bundle_weights({level, vertex});
    for (std::size_t s = 0; s < edges.size(); ++s) {
      if (near_zero<S>(lam[s])) continue;
      const std::size_t child = t.nodes.size();
      t.nodes.emplace_back();
      t.nodes[node].children.push_back({lam[s], child});
      Label next = seq;
      next.push_back(static_cast<long>(edges[s].from));
      grow(child, level - 1, edges[s].from, std::move(next));
    }
  };
  grow(0, v.level, v.index, {});
  return t;
}

// Recursive optimum: leaves cost leaf_cost(a, b); an internal pair costs the
// transport optimum between the children laws under the children's costs.
template <Scalar S>
S filtration_distance(const FiltrationTree<S>& A, const FiltrationTree<S>& B,
                      const std::function<S(const Label&, const Label&)>& leaf_cost) {
  A.validate();
  B.validate();
  if (A.height() != B.height()) throw Error("height_mismatch", "filtration trees have different heights");
  std::map<std::pair<std::size_t, std::size_t>, S> memo;
  std::function<S(std::size_t, std::size_t)> rec = [&](std::size_t a, std::size_t b) -> S {
    const auto& na = A.nodes[a];
    const auto& nb = B.nodes[b];
    if (na.children.empty()) return leaf_cost(na.leaf, nb.leaf);
    if (auto it = memo.find({a, b}); it != memo.end()) return it->second;
    std::vector<S> pa, pb;
    for (const auto& c : na.children) pa.push_back(c.first);
    for (const auto& c : nb.children) pb.push_back(c.first);
    Matrix<S> cost(pa.size(), pb.size(), S(0));
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = 0; j < pb.size(); ++j) cost(i, j) = rec(na.children[i].second, nb.children[j].second);
    const S value = transport(pa, pb, cost).value;
    memo.emplace(std::make_pair(a, b), value);
    return value;
  };
  return rec(0, 0);
}

template <Scalar S>
std::function<S(const Label&, const Label&)> discrete_leaf_cost() {
  return [](const Label& a, const Label& b) { return a == b ? S(0) : S(1); };
}

// min over automorphisms of the complete binary tree of the Hamming distance
// between two leaf labelings.
inline long tree_orbit_hamming(const std::vector<int>& a, const std::vector<int>& b, std::size_t height) {
  if (height >= 8 * sizeof(std::size_t) - 1) throw invalid_argument("tree height too large");
  const std::size_t n = std::size_t{1} << height;
  if (a.size() != n || b.size() != n) throw invalid_argument("labelings must have 2^height entries");
  for (int x : a)
    if (x != 0 && x != 1) throw invalid_argument("labels must be 0 or 1");
  for (int x : b)
    if (x != 0 && x != 1) throw invalid_argument("labels must be 0 or 1");
  std::function<long(std::size_t, std::size_t, std::size_t)> rec = [&](std::size_t ia, std::size_t ib,
                                                                        std::size_t len) -> long {
    if (len == 1) return a[ia] != b[ib];
    const std::size_t h = len / 2;
    const long straight = rec(ia, ib, h) + rec(ia + h, ib + h, h);
    const long swapped = rec(ia, ib + h, h) + rec(ia + h, ib, h);
    return std::min(straight, swapped);
  };
  return rec(0, 0, n);
}

inline long tree_orbit_hamming(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t h = 0;
  while ((std::size_t{1} << h) < a.size()) ++h;
  if ((std::size_t{1} << h) != a.size()) throw invalid_argument("labelings must have 2^height entries");
  return tree_orbit_hamming(a, b, h);
}

template <Scalar S>
struct LacunaryResult {
  bool found = false;
  std::size_t base_gap = 0;
  std::vector<std::size_t> indices;
  // ρ̄ at telescoped levels base+1 .. base+levels (for the chosen base gap).
  std::vector<S> values;
  std::size_t hit = 0;
};

// Telescope at base, base+g, base+3g, base+7g, ... (gaps g, 2g, 4g, ...) and
// look for the smallest g for which the strong scan of the telescoped measure
// drops below `threshold` within `levels` telescoped levels. `make` builds
// the measure on a graph of the requested depth.
template <Scalar S>
LacunaryResult<S> lacunary_search(const std::function<MarkovMeasure<S>(std::size_t)>& make, std::size_t base,
                                  std::size_t levels, double threshold, std::size_t max_gap) {
  LacunaryResult<S> best;
  for (std::size_t g = 1; g <= max_gap; ++g) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k <= base; ++k) idx.push_back(k);
    std::size_t gap = g;
    for (std::size_t k = 0; k < levels; ++k, gap *= 2) idx.push_back(idx.back() + gap);
    const MarkovMeasure<S> mu = make(idx.back());
    const GraphPtr tg = share(telescope(mu.graph(), idx));
    const MarkovMeasure<S> tm = telescope_measure(mu, tg, idx);
    const Equipment<S> eq = cotransitions_of(tm);
    ScanOptions opt;
    opt.base = base;
    const auto scan = standardness_scan(eq, tm, levels, opt);
    LacunaryResult<S> r;
    r.base_gap = g;
    r.indices = idx;
    r.values.assign(scan.values.begin() + 1, scan.values.end());
    for (std::size_t k = 0; k < r.values.size(); ++k)
      if (to_double(r.values[k]) < threshold) {
        r.found = true;
        r.hit = k + 1;
        break;
      }
    if (r.found) return r;
    if (g == 1) best = r;
  }
  return best;
}

}  // namespace bratteli
