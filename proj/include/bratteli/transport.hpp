#pragma once

// Discrete optimal transport by the transportation simplex (northwest-corner
// start, u-v potentials, cycle pivoting). Exact on rationals.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "bratteli/common.hpp"

namespace bratteli {

template <Scalar S>
struct TransportResult {
  S value = S(0);
  // coupling(i, j) in the caller's indices.
  Matrix<S> coupling;
};

// Pivot-count ceiling; the simplex terminates far below it on sane input.
inline constexpr std::size_t kTransportMaxPivots = 1'000'000;

namespace detail {

template <Scalar S>
S mass_tolerance() {
  if constexpr (ScalarTraits<S>::exact) {
    return S(0);
  } else {
    return S(1e-9);
  }
}

template <Scalar S>
bool is_negative(const S& x) {
  if constexpr (ScalarTraits<S>::exact) {
    return sgn(x) < 0;
  } else {
    return x < S(-1e-12);
  }
}

struct BasicCell {
  std::size_t i;
  std::size_t j;
};

}  // namespace detail

template <Scalar S>
TransportResult<S> transport(const std::vector<S>& a, const std::vector<S>& b, const Matrix<S>& cost) {
  if (cost.rows() != a.size() || cost.cols() != b.size())
    throw invalid_argument("cost matrix shape does not match the marginals");
  S sa(0), sb(0);
  for (const auto& x : a) {
    if (x < S(0)) throw invalid_argument("negative source mass");
    sa += x;
  }
  for (const auto& x : b) {
    if (x < S(0)) throw invalid_argument("negative target mass");
    sb += x;
  }
  if (!near_zero<S>(S(sa - sb), detail::mass_tolerance<S>()))
    throw Error("marginal_mismatch", "source and target masses differ");

  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!near_zero<S>(a[i])) rows.push_back(i);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!near_zero<S>(b[j])) cols.push_back(j);

  TransportResult<S> result;
  result.coupling = Matrix<S>(a.size(), b.size(), S(0));
  const std::size_t m = rows.size(), n = cols.size();
  if (m == 0 || n == 0) return result;

  auto c = [&](std::size_t i, std::size_t j) -> const S& { return cost(rows[i], cols[j]); };

  // Northwest corner: m + n - 1 basic cells, degenerate zeros included.
  std::vector<detail::BasicCell> basis;
  std::vector<S> flow;
  {
    std::vector<S> supply, demand;
    for (auto i : rows) supply.push_back(a[i]);
    for (auto j : cols) demand.push_back(b[j]);
    std::size_t i = 0, j = 0;
    while (true) {
      if (i == m - 1 && j == n - 1) {
        S rest = supply[i] < demand[j] ? supply[i] : demand[j];
        if (rest < S(0)) rest = S(0);
        basis.push_back({i, j});
        flow.push_back(rest);
        break;
      }
      if (j == n - 1 || (i < m - 1 && supply[i] <= demand[j])) {
        basis.push_back({i, j});
        flow.push_back(supply[i]);
        demand[j] -= supply[i];
        supply[i] = S(0);
        ++i;
      } else {
        basis.push_back({i, j});
        flow.push_back(demand[j]);
        supply[i] -= demand[j];
        demand[j] = S(0);
        ++j;
      }
    }
  }

  // Tree nodes: rows 0..m-1, columns m..m+n-1.
  const std::size_t nodes = m + n;
  std::vector<std::vector<std::size_t>> adj(nodes);
  std::vector<S> u(m), v(n);
  std::vector<std::size_t> parent_cell(nodes), parent(nodes), order;
  std::vector<char> seen(nodes);
  std::size_t degenerate_run = 0;

  for (std::size_t pivots = 0;; ++pivots) {
    if (pivots > kTransportMaxPivots) throw resource_limit("transport simplex did not converge");
    for (auto& l : adj) l.clear();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      adj[basis[k].i].push_back(k);
      adj[m + basis[k].j].push_back(k);
    }
    // Potentials by BFS from row 0; parents double as path lookup.
    std::fill(seen.begin(), seen.end(), 0);
    order.assign(1, 0);
    seen[0] = 1;
    u[0] = S(0);
    for (std::size_t h = 0; h < order.size(); ++h) {
      const std::size_t x = order[h];
      for (std::size_t k : adj[x]) {
        const std::size_t y = x < m ? m + basis[k].j : basis[k].i;
        if (seen[y]) continue;
        seen[y] = 1;
        parent[y] = x;
        parent_cell[y] = k;
        if (y >= m)
          v[y - m] = c(basis[k].i, basis[k].j) - u[x];
        else
          u[y] = c(basis[k].i, basis[k].j) - v[x - m];
        order.push_back(y);
      }
    }
    if (order.size() != nodes) throw invalid_argument("transport basis is not a spanning tree");

    // Entering cell: Dantzig, or Bland after a long degenerate streak.
    const bool bland = degenerate_run > 2 * nodes;
    bool found = false;
    std::size_t ei = 0, ej = 0;
    S best(0);
    for (std::size_t i = 0; i < m && !(bland && found); ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const S r = c(i, j) - u[i] - v[j];
        if (!detail::is_negative(r)) continue;
        if (!found || r < best) {
          found = true;
          best = r;
          ei = i;
          ej = j;
          if (bland) break;
        }
      }
    if (!found) break;

    // Tree path from column node ej up to the root and from row ei likewise;
    // meet at the lowest common ancestor.
    auto climb = [&](std::size_t x) {
      std::vector<std::size_t> path{x};
      while (x != 0) {
        x = parent[x];
        path.push_back(x);
      }
      return path;
    };
    auto pr = climb(ei);
    auto pc = climb(m + ej);
    while (pr.size() > 1 && pc.size() > 1 && pr[pr.size() - 2] == pc[pc.size() - 2]) {
      pr.pop_back();
      pc.pop_back();
    }
    // Cells from ei to the ancestor, then from the ancestor down to ej.
    std::vector<std::size_t> cycle;
    for (std::size_t k = 0; k + 1 < pr.size(); ++k) cycle.push_back(parent_cell[pr[k]]);
    std::vector<std::size_t> down;
    for (std::size_t k = 0; k + 1 < pc.size(); ++k) down.push_back(parent_cell[pc[k]]);
    cycle.insert(cycle.end(), down.rbegin(), down.rend());
    // Even positions leave the entering row or column first: those lose flow.
    std::size_t leave = cycle[0];
    for (std::size_t k = 0; k < cycle.size(); k += 2)
      if (flow[cycle[k]] < flow[leave] || (flow[cycle[k]] == flow[leave] && cycle[k] < leave)) leave = cycle[k];
    const S theta = flow[leave];
    degenerate_run = near_zero<S>(theta) ? degenerate_run + 1 : 0;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      if (k % 2 == 0) {
        flow[cycle[k]] -= theta;
      } else {
        flow[cycle[k]] += theta;
      }
    }
    basis[leave] = {ei, ej};
    flow[leave] = theta;
  }

  for (std::size_t k = 0; k < basis.size(); ++k) {
    S x = flow[k];
    if (x < S(0)) x = S(0);
    result.coupling(rows[basis[k].i], cols[basis[k].j]) += x;
    result.value += x * c(basis[k].i, basis[k].j);
  }
  return result;
}

// Kantorovich distance between two distributions on a finite metric space.
template <Scalar S>
S kantorovich(const std::vector<S>& a, const std::vector<S>& b, const Matrix<S>& metric) {
  return transport(a, b, metric).value;
}

}  // namespace bratteli
