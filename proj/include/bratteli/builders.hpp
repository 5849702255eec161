#pragma once

// Canonical graded graphs, truncated at a declared level.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/graph.hpp"

namespace bratteli {

// Builders refuse to materialize more vertices than this.
inline constexpr std::size_t kMaxBuilderVertices = 4'000'000;

namespace detail {

inline void charge(std::size_t& total, std::size_t add, const std::string& kind) {
  total += add;
  if (total > kMaxBuilderVertices)
    throw resource_limit(kind + ": more than " + std::to_string(kMaxBuilderVertices) +
                         " vertices requested");
}

// Generic level-by-level construction from a successor rule on labels.
// Each level is sorted with `less`; successor multiplicities come from
// repeated entries returned by `successors`.
template <class Successors, class Less>
GradedGraph grow(std::string kind, std::size_t max_n, Label root, Successors successors, Less less) {
  std::vector<std::vector<Label>> levels{{std::move(root)}};
  std::vector<std::vector<EdgeSpec>> edges;
  std::size_t total = 1;
  for (std::size_t n = 0; n < max_n; ++n) {
    std::map<Label, std::size_t, Less> index(less);
    std::vector<std::vector<Label>> succ(levels[n].size());
    for (std::size_t u = 0; u < levels[n].size(); ++u) {
      succ[u] = successors(n, levels[n][u]);
      for (const auto& l : succ[u]) index.emplace(l, 0);
    }
    charge(total, index.size(), kind);
    std::vector<Label> next;
    next.reserve(index.size());
    for (auto& [l, i] : index) {
      i = next.size();
      next.push_back(l);
    }
    std::vector<EdgeSpec> e;
    for (std::size_t u = 0; u < succ.size(); ++u)
      for (const auto& l : succ[u]) e.push_back({u, index.at(l), BigInt(1)});
    edges.push_back(std::move(e));
    levels.push_back(std::move(next));
  }
  return GradedGraph(std::move(kind), std::move(levels), std::move(edges));
}

struct Lexicographic {
  bool operator()(const Label& a, const Label& b) const { return a < b; }
};
struct ReverseLexicographic {
  bool operator()(const Label& a, const Label& b) const { return a > b; }
};
struct ShortLex {
  bool operator()(const Label& a, const Label& b) const {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }
};

}  // namespace detail

// d-dimensional Pascal graph: level n holds the digit counts (c_0..c_d) of
// words of length n, sorted lexicographically so that appending digit j is
// ranked before appending digit j+1 by the default adic order. pascal(1) is
// the Pascal triangle; its vertex with k ones has label (n-k, k).
inline GradedGraph pascal(std::size_t d, std::size_t max_n) {
  if (d == 0) throw invalid_argument("pascal: dimension must be >= 1");
  Label root(d + 1, 0);
  return detail::grow(
      "pascal", max_n, root,
      [d](std::size_t, const Label& c) {
        std::vector<Label> out;
        for (std::size_t j = 0; j <= d; ++j) {
          Label next = c;
          ++next[j];
          out.push_back(std::move(next));
        }
        return out;
      },
      detail::Lexicographic{});
}

// Index of the Pascal-triangle vertex (n, k) (k = number of ones).
inline std::size_t pascal_index(std::size_t n, std::size_t k) {
  if (k > n) throw Error("unknown_vertex", "pascal vertex with k > n");
  return n - k;
}

// Young graph: partitions of n (weakly decreasing parts), level sorted
// reverse-lexicographically so (n) comes first.
inline GradedGraph young(std::size_t max_n) {
  return detail::grow(
      "young", max_n, Label{},
      [](std::size_t, const Label& p) {
        std::vector<Label> out;
        for (std::size_t i = 0; i <= p.size(); ++i) {
          if (i < p.size() && i > 0 && p[i - 1] == p[i]) continue;
          Label next = p;
          if (i == p.size())
            next.push_back(1);
          else
            ++next[i];
          out.push_back(std::move(next));
        }
        return out;
      },
      detail::ReverseLexicographic{});
}

// Two vertices {0, 1} on every positive level, all edges between adjacent
// levels present. Paths are binary digit sequences x_1 x_2 ...
inline GradedGraph dyadic(std::size_t max_n) {
  return detail::grow(
      "dyadic", max_n, Label{},
      [](std::size_t, const Label&) { return std::vector<Label>{{0}, {1}}; },
      detail::Lexicographic{});
}

// Fibonacci graph: vertices a=(0), b=(1); a -> a, a -> b, b -> a.
inline GradedGraph fibonacci(std::size_t max_n) {
  return detail::grow(
      "fibonacci", max_n, Label{},
      [](std::size_t n, const Label& l) {
        if (n == 0 || l[0] == 0) return std::vector<Label>{{0}, {1}};
        return std::vector<Label>{{0}};
      },
      detail::Lexicographic{});
}

// One vertex per level.
inline GradedGraph chain(std::size_t max_n) {
  return detail::grow(
      "chain", max_n, Label{}, [](std::size_t, const Label&) { return std::vector<Label>{{0}}; },
      detail::Lexicographic{});
}

namespace detail {

// Graphs of ordered/unordered pairs. Level 1 is {0, 1}; level n+1 consists of
// pairs (i, j) of level-n indices, with label (i, j). A pair is joined to each
// of its slots, so (v, v) receives a double edge from v.
inline GradedGraph pairs_graph(std::size_t max_n, bool ordered) {
  const std::string kind = ordered ? "ordered_pairs" : "unordered_pairs";
  std::vector<std::vector<Label>> levels{{Label{}}};
  std::vector<std::vector<EdgeSpec>> edges;
  if (max_n >= 1) {
    levels.push_back({{0}, {1}});
    edges.push_back({{0, 0, BigInt(1)}, {0, 1, BigInt(1)}});
  }
  std::size_t total = 3;
  for (std::size_t n = 1; n < max_n; ++n) {
    const std::size_t m = levels[n].size();
    const std::size_t count = ordered ? m * m : m * (m + 1) / 2;
    if (count > kMaxBuilderVertices) throw resource_limit(kind + ": level too large");
    charge(total, count, kind);
    std::vector<Label> next;
    std::vector<EdgeSpec> e;
    next.reserve(count);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = ordered ? 0 : i; j < m; ++j) {
        const std::size_t idx = next.size();
        next.push_back({static_cast<long>(i), static_cast<long>(j)});
        if (i == j) {
          e.push_back({i, idx, BigInt(2)});
        } else {
          e.push_back({i, idx, BigInt(1)});
          e.push_back({j, idx, BigInt(1)});
        }
      }
    levels.push_back(std::move(next));
    edges.push_back(std::move(e));
  }
  return GradedGraph(kind, std::move(levels), std::move(edges));
}

}  // namespace detail

inline GradedGraph ordered_pairs(std::size_t max_n) { return detail::pairs_graph(max_n, true); }
inline GradedGraph unordered_pairs(std::size_t max_n) { return detail::pairs_graph(max_n, false); }

// A locally finite base graph for pascalization: a root label and the
// neighbour rule.
struct BaseGraph {
  std::string name;
  Label root;
  std::function<std::vector<Label>(const Label&)> neighbours;
};

// The integer line Z with 0 as root; labels are (x).
inline BaseGraph chain_base() {
  return {"chain", Label{0}, [](const Label& x) {
            return std::vector<Label>{{x[0] - 1}, {x[0] + 1}};
          }};
}

// Homogeneous tree T_{q+1}. A vertex is the reduced word of child choices
// from the root: the root has children 0..q, every other vertex has children
// 0..q-1 besides its parent.
inline BaseGraph tree_base(long q) {
  if (q < 1) throw invalid_argument("tree_base: q must be >= 1");
  return {"tree" + std::to_string(q + 1), Label{}, [q](const Label& w) {
            std::vector<Label> out;
            if (!w.empty()) out.emplace_back(w.begin(), w.end() - 1);
            const long children = w.empty() ? q + 1 : q;
            for (long c = 0; c < children; ++c) {
              Label next = w;
              next.push_back(c);
              out.push_back(std::move(next));
            }
            return out;
          }};
}

// Dynamic graph of a base graph: level n is the set of base vertices reached
// from the root by walks of length n; (v, n) -> (w, n+1) iff v ~ w in the base.
// Level 0 is the base root. Levels are sorted shortlex.
inline GradedGraph pascalization(const BaseGraph& base, std::size_t max_n) {
  std::vector<std::vector<Label>> levels{{base.root}};
  std::vector<std::vector<EdgeSpec>> edges;
  std::size_t total = 1;
  for (std::size_t n = 0; n < max_n; ++n) {
    std::map<Label, std::size_t, detail::ShortLex> index;
    std::vector<std::vector<Label>> succ(levels[n].size());
    for (std::size_t u = 0; u < levels[n].size(); ++u) {
      succ[u] = base.neighbours(levels[n][u]);
      for (const auto& l : succ[u]) index.emplace(l, 0);
    }
    detail::charge(total, index.size(), "pascalization");
    std::vector<Label> next;
    next.reserve(index.size());
    for (auto& [l, i] : index) {
      i = next.size();
      next.push_back(l);
    }
    std::vector<EdgeSpec> e;
    for (std::size_t u = 0; u < succ.size(); ++u)
      for (const auto& l : succ[u]) e.push_back({u, index.at(l), BigInt(1)});
    edges.push_back(std::move(e));
    levels.push_back(std::move(next));
  }
  return GradedGraph("pascalization:" + base.name, std::move(levels), std::move(edges));
}

}  // namespace bratteli
