#pragma once

// N-graded graphs (Bratteli diagrams) truncated at a declared depth.
//
// Vertices are addressed as (level, index); labels are payload for builders
// and never identity. Edges only join adjacent levels and carry a big-integer
// multiplicity, so telescoped graphs (path counts) and multi-edge builders
// share one representation. Path-count dimensions are computed eagerly at
// construction, after which the graph is immutable and safe to share.

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/common.hpp"

namespace bratteli {

struct VertexId {
  std::size_t level = 0;
  std::size_t index = 0;
  auto operator<=>(const VertexId&) const = default;
};

using Label = std::vector<long>;

// Incoming edge bundle of a vertex: `mult` parallel edges from `from` on the
// previous level. Bundles are sorted by `from`.
struct InEdge {
  std::size_t from = 0;
  BigInt mult;
};

// Outgoing edge bundle: target index on the next level and the position of the
// matching InEdge in the target's incoming list.
struct OutEdge {
  std::size_t to = 0;
  std::size_t slot = 0;
};

// Edge description used to construct graphs: level k vertex `from` to level
// k+1 vertex `to`.
struct EdgeSpec {
  std::size_t from = 0;
  std::size_t to = 0;
  BigInt mult;
};

class GradedGraph {
 public:
  // labels[n] lists the vertices of level n; edges[k] joins level k to k+1.
  GradedGraph(std::string kind, std::vector<std::vector<Label>> labels,
              std::vector<std::vector<EdgeSpec>> edges)
      : kind_(std::move(kind)), labels_(std::move(labels)) {
    if (labels_.empty() || labels_[0].size() != 1)
      throw invalid_argument("level 0 must contain exactly one vertex");
    if (edges.size() + 1 != labels_.size())
      throw invalid_argument("edge table must have one entry per level transition");
    const std::size_t levels = labels_.size();
    in_.resize(levels);
    out_.resize(levels);
    for (std::size_t n = 0; n < levels; ++n) {
      if (labels_[n].empty()) throw invalid_argument("level " + std::to_string(n) + " is empty");
      in_[n].resize(labels_[n].size());
      out_[n].resize(labels_[n].size());
    }
    for (std::size_t k = 0; k + 1 < levels; ++k) {
      std::map<std::pair<std::size_t, std::size_t>, BigInt> merged;
      for (const auto& e : edges[k]) {
        if (e.from >= labels_[k].size() || e.to >= labels_[k + 1].size())
          throw invalid_argument("edge endpoint out of range at level " + std::to_string(k));
        if (sgn(e.mult) < 0) throw invalid_argument("negative edge multiplicity");
        if (sgn(e.mult) == 0) continue;
        merged[{e.to, e.from}] += e.mult;
      }
      for (auto& [key, mult] : merged) in_[k + 1][key.first].push_back(InEdge{key.second, mult});
      for (std::size_t v = 0; v < in_[k + 1].size(); ++v) {
        if (in_[k + 1][v].empty())
          throw invalid_argument("vertex (" + std::to_string(k + 1) + "," + std::to_string(v) +
                                 ") has no predecessor");
        for (std::size_t s = 0; s < in_[k + 1][v].size(); ++s)
          out_[k][in_[k + 1][v][s].from].push_back(OutEdge{v, s});
      }
      for (std::size_t u = 0; u < out_[k].size(); ++u)
        if (out_[k][u].empty())
          throw invalid_argument("vertex (" + std::to_string(k) + "," + std::to_string(u) +
                                 ") has no successor");
    }
    dims_.resize(levels);
    dims_[0] = {BigInt(1)};
    for (std::size_t n = 1; n < levels; ++n) {
      dims_[n].assign(labels_[n].size(), BigInt(0));
      for (std::size_t v = 0; v < labels_[n].size(); ++v)
        for (const auto& e : in_[n][v]) dims_[n][v] += e.mult * dims_[n - 1][e.from];
    }
  }

  const std::string& kind() const noexcept { return kind_; }
  // Index of the last level.
  std::size_t depth() const noexcept { return labels_.size() - 1; }
  std::size_t level_size(std::size_t n) const {
    check_level(n);
    return labels_[n].size();
  }
  std::size_t vertex_count() const {
    std::size_t total = 0;
    for (const auto& l : labels_) total += l.size();
    return total;
  }

  bool contains(VertexId v) const noexcept {
    return v.level < labels_.size() && v.index < labels_[v.level].size();
  }
  void check(VertexId v) const {
    if (!contains(v))
      throw Error("unknown_vertex", "unknown vertex (" + std::to_string(v.level) + "," +
                                        std::to_string(v.index) + ")");
  }

  const Label& label(VertexId v) const {
    check(v);
    return labels_[v.level][v.index];
  }
  const std::vector<Label>& labels(std::size_t n) const {
    check_level(n);
    return labels_[n];
  }
  std::span<const InEdge> in_edges(VertexId v) const {
    check(v);
    return in_[v.level][v.index];
  }
  std::span<const OutEdge> out_edges(VertexId v) const {
    check(v);
    return out_[v.level][v.index];
  }

  // Number of paths from the root to v, multiplicities counted.
  const BigInt& dim(VertexId v) const {
    check(v);
    return dims_[v.level][v.index];
  }

  // Multiplicity of the bundle (level-1, from) -> (level, to).
  BigInt multiplicity(std::size_t level, std::size_t from, std::size_t to) const {
    const auto edges = in_edges({level, to});
    auto it = std::lower_bound(edges.begin(), edges.end(), from,
                               [](const InEdge& e, std::size_t f) { return e.from < f; });
    return (it != edges.end() && it->from == from) ? it->mult : BigInt(0);
  }

  // Position of the bundle from `from` in the incoming list of (level, to).
  std::optional<std::size_t> slot_of(std::size_t level, std::size_t from, std::size_t to) const {
    const auto edges = in_edges({level, to});
    for (std::size_t s = 0; s < edges.size(); ++s)
      if (edges[s].from == from) return s;
    return std::nullopt;
  }

  std::optional<std::size_t> find(std::size_t level, const Label& label) const {
    check_level(level);
    const auto& l = labels_[level];
    for (std::size_t i = 0; i < l.size(); ++i)
      if (l[i] == label) return i;
    return std::nullopt;
  }

  // Edge table in construction format (level k -> k+1), deterministic order.
  std::vector<EdgeSpec> edges_from(std::size_t k) const {
    std::vector<EdgeSpec> result;
    for (std::size_t u = 0; u < out_[k].size(); ++u)
      for (const auto& o : out_[k][u]) result.push_back({u, o.to, in_[k + 1][o.to][o.slot].mult});
    return result;
  }

 private:
  void check_level(std::size_t n) const {
    if (n >= labels_.size())
      throw Error("unknown_vertex", "level " + std::to_string(n) + " beyond graph depth " +
                                        std::to_string(depth()));
  }

  std::string kind_;
  std::vector<std::vector<Label>> labels_;
  std::vector<std::vector<std::vector<InEdge>>> in_;
  std::vector<std::vector<std::vector<OutEdge>>> out_;
  std::vector<std::vector<BigInt>> dims_;
};

using GraphPtr = std::shared_ptr<const GradedGraph>;

inline GraphPtr share(GradedGraph g) { return std::make_shared<const GradedGraph>(std::move(g)); }

}  // namespace bratteli
