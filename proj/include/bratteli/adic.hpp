#pragma once

// Adic transformations: per-vertex orders on incoming edges, the
// successor/predecessor maps on cofinal paths, orbits, cylinder invariance and
// the Takagi curve.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bratteli/measures.hpp"
#include "bratteli/paths.hpp"

namespace bratteli {

// For every vertex, the order of its incoming bundles (a permutation of slots);
// parallel edges inside a bundle are ordered by their index.
class AdicOrder {
 public:
  AdicOrder(GraphPtr graph, std::vector<std::vector<std::vector<std::size_t>>> slot_order)
      : graph_(std::move(graph)), order_(std::move(slot_order)) {
    const auto& g = *graph_;
    if (order_.size() != g.depth() + 1) throw invalid_argument("adic order must cover every level");
    rank_.resize(order_.size());
    for (std::size_t n = 1; n <= g.depth(); ++n) {
      if (order_[n].size() != g.level_size(n)) throw Error("domain_mismatch", "adic order level size mismatch");
      rank_[n].resize(g.level_size(n));
      for (std::size_t v = 0; v < g.level_size(n); ++v) {
        const std::size_t k = g.in_edges({n, v}).size();
        auto& perm = order_[n][v];
        if (perm.size() != k) throw Error("domain_mismatch", "adic order does not list every incoming bundle");
        rank_[n][v].assign(k, k);
        for (std::size_t r = 0; r < k; ++r) {
          if (perm[r] >= k || rank_[n][v][perm[r]] != k) throw invalid_argument("adic order is not a permutation");
          rank_[n][v][perm[r]] = r;
        }
      }
    }
  }

  // Incoming bundles ordered by predecessor index.
  static AdicOrder by_predecessor(const GraphPtr& graph) {
    const auto& g = *graph;
    std::vector<std::vector<std::vector<std::size_t>>> o(g.depth() + 1);
    for (std::size_t n = 1; n <= g.depth(); ++n) {
      o[n].resize(g.level_size(n));
      for (std::size_t v = 0; v < g.level_size(n); ++v) {
        o[n][v].resize(g.in_edges({n, v}).size());
        for (std::size_t s = 0; s < o[n][v].size(); ++s) o[n][v][s] = s;
      }
    }
    return AdicOrder(graph, std::move(o));
  }

  // Dyadic-graph order of Morse type: edges into vertex 1 are reversed, so the
  // map no longer acts as binary addition.
  static AdicOrder morse(const GraphPtr& graph) {
    if (graph->kind() != "dyadic") throw invalid_argument("morse order is defined on the dyadic graph");
    AdicOrder base = by_predecessor(graph);
    auto o = base.order_;
    for (std::size_t n = 2; n < o.size(); ++n) std::reverse(o[n][1].begin(), o[n][1].end());
    return AdicOrder(graph, std::move(o));
  }

  const GradedGraph& graph() const noexcept { return *graph_; }
  const GraphPtr& graph_ptr() const noexcept { return graph_; }
  const std::vector<std::size_t>& slots(VertexId v) const { return order_.at(v.level).at(v.index); }

  PathStep minimal_edge(VertexId v) const { return {v.index, slots(v).front(), 0}; }
  PathStep maximal_edge(VertexId v) const {
    const std::size_t s = slots(v).back();
    return {v.index, s, small_multiplicity(graph_->in_edges(v)[s].mult) - 1};
  }

  std::optional<PathStep> next_edge(VertexId v, const PathStep& e) const {
    const auto edges = graph_->in_edges(v);
    if (e.parallel + 1 < small_multiplicity(edges[e.slot].mult)) return PathStep{v.index, e.slot, e.parallel + 1};
    const std::size_t r = rank_[v.level][v.index][e.slot];
    if (r + 1 == edges.size()) return std::nullopt;
    return PathStep{v.index, order_[v.level][v.index][r + 1], 0};
  }
  std::optional<PathStep> previous_edge(VertexId v, const PathStep& e) const {
    const auto edges = graph_->in_edges(v);
    if (e.parallel > 0) return PathStep{v.index, e.slot, e.parallel - 1};
    const std::size_t r = rank_[v.level][v.index][e.slot];
    if (r == 0) return std::nullopt;
    const std::size_t s = order_[v.level][v.index][r - 1];
    return PathStep{v.index, s, small_multiplicity(edges[s].mult) - 1};
  }

  // -1, 0, 1 comparing two edges into the same vertex.
  int compare_edges(VertexId v, const PathStep& a, const PathStep& b) const {
    const std::size_t ra = rank_[v.level][v.index][a.slot], rb = rank_[v.level][v.index][b.slot];
    if (ra != rb) return ra < rb ? -1 : 1;
    if (a.parallel != b.parallel) return a.parallel < b.parallel ? -1 : 1;
    return 0;
  }

  // Overwrite steps 1..level of p with the minimal (maximal) path into `vertex`
  // at `level`.
  void fill_minimal(PathPrefix& p, std::size_t level, std::size_t vertex) const { fill(p, level, vertex, false); }
  void fill_maximal(PathPrefix& p, std::size_t level, std::size_t vertex) const { fill(p, level, vertex, true); }

 private:
  void fill(PathPrefix& p, std::size_t level, std::size_t v, bool maximal) const {
    for (std::size_t k = level; k >= 1; --k) {
      const PathStep e = maximal ? maximal_edge({k, v}) : minimal_edge({k, v});
      p.steps[k - 1] = e;
      v = graph_->in_edges({k, v})[e.slot].from;
    }
  }

  GraphPtr graph_;
  std::vector<std::vector<std::vector<std::size_t>>> order_;
  std::vector<std::vector<std::vector<std::size_t>>> rank_;
};

// Continuation beyond the prefix. All-minimal: at each level the out-edge that
// is minimal into its target, or the first out-edge if none is (on the dyadic
// and Pascal graphs this appends zero digits).
struct AllMinimalTail {};
// Out-edge choices (position in out_edges, parallel index) repeating with
// period pattern.size(), anchored at level `anchor`: the step entering level
// j > anchor uses pattern[(j - anchor - 1) % period].
struct PeriodicTail {
  std::size_t anchor = 0;
  std::vector<std::pair<std::size_t, std::uint64_t>> pattern;
};
// The prefix is the whole path; nothing beyond it.
struct ExplicitTail {};

using TailRule = std::variant<AllMinimalTail, PeriodicTail, ExplicitTail>;

// Infinite path, represented up to the graph's truncation depth.
struct InfinitePath {
  PathPrefix prefix;
  TailRule tail = ExplicitTail{};
};

namespace detail {

inline std::optional<PathStep> tail_step(const GradedGraph& g, const AdicOrder& order, const TailRule& tail,
                                         std::size_t from_index, std::size_t target_level) {
  const std::size_t n = target_level - 1;
  const auto out = g.out_edges({n, from_index});
  if (std::holds_alternative<ExplicitTail>(tail)) return std::nullopt;
  if (std::holds_alternative<AllMinimalTail>(tail)) {
    for (const auto& o : out) {
      const PathStep e{o.to, o.slot, 0};
      if (order.compare_edges({target_level, o.to}, e, order.minimal_edge({target_level, o.to})) == 0) return e;
    }
    return PathStep{out[0].to, out[0].slot, 0};
  }
  const auto& per = std::get<PeriodicTail>(tail);
  if (per.pattern.empty()) throw invalid_argument("periodic tail needs a nonempty pattern");
  if (target_level <= per.anchor) throw invalid_argument("periodic tail queried below its anchor");
  const auto [pos, par] = per.pattern[(target_level - per.anchor - 1) % per.pattern.size()];
  if (pos >= out.size())
    throw invalid_argument("periodic tail is inconsistent with the graph at level " + std::to_string(target_level));
  const auto o = out[pos];
  if (par >= small_multiplicity(g.in_edges({target_level, o.to})[o.slot].mult))
    throw invalid_argument("periodic tail parallel index out of range");
  return PathStep{o.to, o.slot, par};
}

}  // namespace detail

// Prefix of length `level` (prefix followed by the tail), level <= depth.
inline PathPrefix materialize(const AdicOrder& order, const InfinitePath& x, std::size_t level) {
  const auto& g = order.graph();
  if (level > g.depth()) throw Error("out_of_range", "requested level beyond the graph depth");
  PathPrefix p = x.prefix;
  if (p.length() >= level) {
    p.steps.resize(level);
    return p;
  }
  while (p.length() < level) {
    auto s = detail::tail_step(g, order, x.tail, p.end().index, p.length() + 1);
    if (!s) throw Error("out_of_range", "path is explicit only up to level " + std::to_string(x.prefix.length()));
    p.steps.push_back(*s);
  }
  return p;
}

// How far the path is representable.
inline std::size_t horizon(const AdicOrder& order, const InfinitePath& x) {
  return std::holds_alternative<ExplicitTail>(x.tail) ? x.prefix.length() : order.graph().depth();
}

namespace detail {

inline InfinitePath adic_step(const AdicOrder& order, const InfinitePath& x, bool forward) {
  const auto& g = order.graph();
  validate_path(g, x.prefix);
  const std::size_t h = horizon(order, x);
  PathPrefix p = materialize(order, x, h);
  for (std::size_t k = 1; k <= h; ++k) {
    const VertexId v{k, p.steps[k - 1].vertex};
    auto e = forward ? order.next_edge(v, p.steps[k - 1]) : order.previous_edge(v, p.steps[k - 1]);
    if (!e) continue;
    p.steps[k - 1] = *e;
    const std::size_t u = g.in_edges(v)[e->slot].from;
    if (forward)
      order.fill_minimal(p, k - 1, u);
    else
      order.fill_maximal(p, k - 1, u);
    // Keep the original prefix length unless the change reached past it; a
    // periodic tail stays anchored at its absolute level.
    p.steps.resize(std::max(k, x.prefix.length()));
    return {std::move(p), x.tail};
  }
  if (forward) throw Error("no_successor", "path is maximal through level " + std::to_string(h));
  throw Error("no_predecessor", "path is minimal through level " + std::to_string(h));
}

}  // namespace detail

inline InfinitePath successor(const AdicOrder& order, const InfinitePath& x) {
  return detail::adic_step(order, x, true);
}
inline InfinitePath predecessor(const AdicOrder& order, const InfinitePath& x) {
  return detail::adic_step(order, x, false);
}

// x followed by k successors (k > 0) or |k| predecessors (k < 0).
inline std::vector<InfinitePath> orbit(const AdicOrder& order, const InfinitePath& x, long k) {
  std::vector<InfinitePath> out{x};
  for (long i = 0; i < std::labs(k); ++i) out.push_back(k > 0 ? successor(order, out.back()) : predecessor(order, out.back()));
  return out;
}

// Lexicographic comparison of two cofinal paths, both materialized to the
// shared horizon; the highest differing level decides.
inline int compare_paths(const AdicOrder& order, const InfinitePath& a, const InfinitePath& b) {
  const std::size_t h = std::min(horizon(order, a), horizon(order, b));
  const PathPrefix pa = materialize(order, a, h), pb = materialize(order, b, h);
  if (pa.end() != pb.end()) throw Error("not_cofinal", "paths do not meet at the horizon");
  for (std::size_t k = h; k >= 1; --k) {
    if (pa.steps[k - 1] == pb.steps[k - 1]) continue;
    if (pa.vertex_at(k) != pb.vertex_at(k)) throw Error("not_cofinal", "paths differ above a shared vertex");
    return order.compare_edges({k, pa.vertex_at(k)}, pa.steps[k - 1], pb.steps[k - 1]);
  }
  return 0;
}

// True iff the two paths coincide from some level on (within the horizon).
inline bool cofinal(const AdicOrder& order, const InfinitePath& a, const InfinitePath& b) {
  const std::size_t h = std::min(horizon(order, a), horizon(order, b));
  return materialize(order, a, h).end() == materialize(order, b, h).end();
}

// Digit words on the dyadic graph (digit = vertex label) and on pascal(d)
// (digit = which coordinate grows).
inline std::vector<int> digits_of(const GradedGraph& g, const PathPrefix& p) {
  std::vector<int> d;
  for (std::size_t k = 1; k <= p.length(); ++k) {
    const Label& to = g.label({k, p.vertex_at(k)});
    if (g.kind() == "pascal") {
      const Label& from = g.label({k - 1, p.vertex_at(k - 1)});
      for (std::size_t j = 0; j < to.size(); ++j)
        if (to[j] != from[j]) d.push_back(static_cast<int>(j));
    } else if (g.kind() == "dyadic") {
      d.push_back(static_cast<int>(to.at(0)));
    } else {
      throw invalid_argument("digit words are defined for dyadic and pascal graphs");
    }
  }
  return d;
}

inline PathPrefix path_from_digits(const GradedGraph& g, const std::vector<int>& digits) {
  std::vector<std::size_t> vertices;
  Label cur = g.label({0, 0});
  for (std::size_t k = 1; k <= digits.size(); ++k) {
    Label next;
    if (g.kind() == "pascal") {
      if (digits[k - 1] < 0 || static_cast<std::size_t>(digits[k - 1]) >= cur.size())
        throw invalid_argument("digit out of range for this Pascal graph");
      next = cur;
      ++next[static_cast<std::size_t>(digits[k - 1])];
    } else if (g.kind() == "dyadic") {
      if (digits[k - 1] != 0 && digits[k - 1] != 1) throw invalid_argument("dyadic digits are 0 or 1");
      next = {digits[k - 1]};
    } else {
      throw invalid_argument("digit words are defined for dyadic and pascal graphs");
    }
    if (k > g.depth()) throw Error("out_of_range", "digit word longer than the graph");
    auto idx = g.find(k, next);
    if (!idx) throw Error("unknown_vertex", "digit word leaves the graph");
    vertices.push_back(*idx);
    cur = std::move(next);
  }
  return path_through(g, vertices);
}

// Periodic tail repeating a digit pattern, anchored at the end of `prefix`.
inline TailRule periodic_digits(const GradedGraph& g, std::size_t anchor, std::size_t anchor_vertex,
                                const std::vector<int>& pattern) {
  // Out-edge positions depend on the vertex; resolve them along one period and
  // require the same positions to recur.
  PeriodicTail tail{anchor, {}};
  Label cur = g.label({anchor, anchor_vertex});
  std::size_t v = anchor_vertex;
  for (std::size_t i = 0; i < pattern.size() && anchor + i < g.depth(); ++i) {
    Label next = g.kind() == "dyadic" ? Label{pattern[i]} : cur;
    if (g.kind() == "pascal") ++next.at(static_cast<std::size_t>(pattern[i]));
    const auto idx = g.find(anchor + i + 1, next);
    if (!idx) throw Error("unknown_vertex", "periodic pattern leaves the graph");
    const auto out = g.out_edges({anchor + i, v});
    std::size_t pos = out.size();
    for (std::size_t j = 0; j < out.size(); ++j)
      if (out[j].to == *idx) pos = j;
    tail.pattern.push_back({pos, 0});
    cur = std::move(next);
    v = *idx;
  }
  if (tail.pattern.empty()) tail.pattern.push_back({0, 0});
  return tail;
}

// max over non-maximal cylinders C of rank <= rank of |μ(P C) − μ(C)|, where
// P moves C onto the cylinder of its prefix's successor.
template <Scalar S>
S invariance_check(const AdicOrder& order, const MarkovMeasure<S>& mu, std::size_t rank) {
  const auto& g = order.graph();
  if (rank > g.depth() || rank > mu.graph().depth()) throw Error("out_of_range", "rank beyond graph depth");
  for (std::size_t n = 0; n <= rank; ++n)
    if (g.level_size(n) != mu.graph().level_size(n))
      throw Error("domain_mismatch", "order and measure live on different graphs");
  S worst(0);
  for (std::size_t r = 1; r <= rank; ++r)
    for (std::size_t v = 0; v < g.level_size(r); ++v) {
      // Paths into v in adic order: start at the minimal one, step forward.
      InfinitePath x{PathPrefix{std::vector<PathStep>(r)}, ExplicitTail{}};
      order.fill_minimal(x.prefix, r, v);
      S prev = mu.path_mass(x.prefix);
      while (true) {
        InfinitePath y;
        try {
          y = successor(order, x);
        } catch (const Error& e) {
          if (e.kind() != "no_successor") throw;
          break;
        }
        const S cur = mu.path_mass(y.prefix);
        const S diff = abs_value<S>(S(cur - prev));
        if (diff > worst) worst = diff;
        prev = cur;
        x = std::move(y);
      }
    }
  if constexpr (!ScalarTraits<S>::exact) {
    if (worst < S(1e-12)) worst = S(0);
  }
  return worst;
}

// Partial sum Σ_{k<terms} 2^{-k} dist(2^k x, Z); exact for rationals.
template <Scalar S = double>
S takagi(const S& x, std::size_t terms = 53) {
  if (x < S(0) || x > S(1)) throw invalid_argument("takagi argument outside [0,1]");
  S y = x, scale(1), total(0);
  for (std::size_t k = 0; k < terms; ++k) {
    S frac;
    if constexpr (ScalarTraits<S>::exact) {
      BigInt fl;
      mpz_fdiv_q(fl.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
      frac = y - Rational(fl);
    } else {
      frac = y - std::floor(y);
    }
    const S dist = frac < S(1) - frac ? frac : S(S(1) - frac);
    total += scale * dist;
    scale /= 2;
    y = frac * 2;
  }
  return total;
}

}  // namespace bratteli
