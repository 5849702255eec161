#pragma once

// Finite path prefixes from the root. Step k (1-based) enters level k: it
// names the vertex reached, the incoming bundle used and which parallel edge
// of that bundle.

#include <cstdint>
#include <functional>
#include <vector>

#include "bratteli/graph.hpp"

namespace bratteli {

struct PathStep {
  std::size_t vertex = 0;
  std::size_t slot = 0;
  std::uint64_t parallel = 0;
  bool operator==(const PathStep&) const = default;
};

struct PathPrefix {
  std::vector<PathStep> steps;

  std::size_t length() const noexcept { return steps.size(); }
  VertexId end() const noexcept {
    return steps.empty() ? VertexId{0, 0} : VertexId{steps.size(), steps.back().vertex};
  }
  // Vertex index at level k (0 = root).
  std::size_t vertex_at(std::size_t k) const { return k == 0 ? 0 : steps.at(k - 1).vertex; }
  bool operator==(const PathPrefix&) const = default;
};

inline std::uint64_t small_multiplicity(const BigInt& m) {
  if (!m.fits_ulong_p()) throw resource_limit("edge multiplicity too large for path addressing");
  return m.get_ui();
}

inline void validate_path(const GradedGraph& g, const PathPrefix& p) {
  if (p.length() > g.depth()) throw invalid_argument("path longer than the graph");
  std::size_t prev = 0;
  for (std::size_t k = 1; k <= p.length(); ++k) {
    const PathStep& s = p.steps[k - 1];
    g.check({k, s.vertex});
    const auto edges = g.in_edges({k, s.vertex});
    if (s.slot >= edges.size() || edges[s.slot].from != prev)
      throw invalid_argument("path step " + std::to_string(k) + " is not incident to the previous vertex");
    if (s.parallel >= small_multiplicity(edges[s.slot].mult))
      throw invalid_argument("parallel edge index out of range at step " + std::to_string(k));
    prev = s.vertex;
  }
}

// Path through the given vertices (levels 1..n), first parallel edge each time.
inline PathPrefix path_through(const GradedGraph& g, const std::vector<std::size_t>& vertices) {
  PathPrefix p;
  std::size_t prev = 0;
  for (std::size_t k = 1; k <= vertices.size(); ++k) {
    auto slot = g.slot_of(k, prev, vertices[k - 1]);
    if (!slot) throw invalid_argument("no edge into level " + std::to_string(k) + " along the given vertices");
    p.steps.push_back({vertices[k - 1], *slot, 0});
    prev = vertices[k - 1];
  }
  return p;
}

// Visit every root path into v (parallel edges distinguished), in the order
// (slot, parallel) ascending at each level from the top down.
inline void for_each_path_into(const GradedGraph& g, VertexId v,
                               const std::function<void(const PathPrefix&)>& visit) {
  g.check(v);
  PathPrefix p;
  p.steps.resize(v.level);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t level, std::size_t vertex) {
    if (level == 0) {
      visit(p);
      return;
    }
    const auto edges = g.in_edges({level, vertex});
    for (std::size_t s = 0; s < edges.size(); ++s) {
      const std::uint64_t mult = small_multiplicity(edges[s].mult);
      for (std::uint64_t j = 0; j < mult; ++j) {
        p.steps[level - 1] = {vertex, s, j};
        rec(level - 1, edges[s].from);
      }
    }
  };
  rec(v.level, v.index);
}

}  // namespace bratteli
