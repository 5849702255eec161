#pragma once

// Central measures on the pascalization of the homogeneous tree T_{q+1},
// indexed by a boundary ray ω and r ∈ (0, 1), and their ergodicity scan.

#include <cmath>
#include <vector>

#include "bratteli/builders.hpp"
#include "bratteli/measures.hpp"

namespace bratteli {

template <Scalar S>
struct TreeBoundaryParam {
  long q = 2;
  // Child choices of the ray from the root; continued by child 0.
  Label omega;
  S r = S(1) / S(2);

  void validate() const {
    if (q < 1) throw invalid_argument("tree branching q must be >= 1");
    if (!(r > S(0)) || !(r < S(1))) throw invalid_argument("r must lie strictly between 0 and 1");
    for (std::size_t k = 0; k < omega.size(); ++k) {
      const long limit = k == 0 ? q + 1 : q;
      if (omega[k] < 0 || omega[k] >= limit) throw invalid_argument("omega is not a ray of the tree");
    }
  }
  long omega_at(std::size_t k) const { return k < omega.size() ? omega[k] : 0; }

  // r = s²/(s² + q), eigenvalue c = s + q/s; then r·c = s.
  double s() const { return std::sqrt(static_cast<double>(q) * to_double(r) / (1 - to_double(r))); }
  double c() const { return s() + static_cast<double>(q) / s(); }
};

// Is the reduced word w a prefix of the ray ω?
template <Scalar S>
bool on_ray(const TreeBoundaryParam<S>& param, const Label& w) {
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] != param.omega_at(k)) return false;
  return true;
}

// h-transform of f(v) = s^{h_ω(v)}: the ω-ward neighbour gets r and each of
// the q others (1 − r)/q. The graph must be pascalization(tree_base(q), ·).
template <Scalar S>
MarkovMeasure<S> tree_central_measure(const GraphPtr& graph, const TreeBoundaryParam<S>& param) {
  param.validate();
  const auto& g = *graph;
  if (g.kind() != "pascalization:tree" + std::to_string(param.q + 1))
    throw invalid_argument("tree measure needs the pascalization of T_" + std::to_string(param.q + 1));
  const S other = (S(1) - param.r) / S(param.q);
  return measure_from_rule<S>(graph, [&](VertexId u, const OutEdge& o) {
    const Label& from = g.label(u);
    const Label& to = g.label({u.level + 1, o.to});
    bool toward;
    if (on_ray(param, from))
      toward = to.size() == from.size() + 1 && to.back() == param.omega_at(from.size());
    else
      toward = to.size() + 1 == from.size();
    return toward ? param.r : other;
  });
}

// The same statistic at n = 1, computed on the quotient by the tree
// automorphisms fixing ω. A vertex class is (k, d): word length d, common
// prefix with ω of length k. Walk counts on T_{q+1} depend only on length and
// endpoint distance, which gives the level-1 projections in closed form.
template <Scalar S>
S tree_level1_statistic(long q, const S& r, std::size_t m, const S& eps, Norm norm = Norm::euclidean) {
  if (q < 1) throw invalid_argument("tree branching q must be >= 1");
  if (!(r > S(0)) || !(r < S(1))) throw invalid_argument("r must lie strictly between 0 and 1");
  if (m < 2) throw invalid_argument("level-1 statistic needs m >= 2");
  // walks[L][δ]: walks of length L from a vertex at distance δ to a fixed one.
  std::vector<std::vector<BigInt>> walks(m + 1, std::vector<BigInt>(m + 3, BigInt(0)));
  walks[0][0] = 1;
  for (std::size_t L = 1; L <= m; ++L) {
    walks[L][0] = (q + 1) * walks[L - 1][1];
    for (std::size_t d = 1; d + 1 < m + 3; ++d) walks[L][d] = walks[L - 1][d - 1] + q * walks[L - 1][d + 1];
  }
  const S other = (S(1) - r) / S(q);
  // mass[k][d] for the current level.
  std::vector<std::vector<S>> mass(1, std::vector<S>(1, S(1)));
  for (std::size_t n = 0; n < m; ++n) {
    std::vector<std::vector<S>> next(n + 2, std::vector<S>(n + 2, S(0)));
    for (std::size_t k = 0; k < mass.size(); ++k)
      for (std::size_t d = k; d < mass[k].size(); ++d) {
        const S& p = mass[k][d];
        if (near_zero<S>(p)) continue;
        if (k == d) {
          next[d + 1][d + 1] += p * r;
          if (d >= 1) next[d - 1][d - 1] += p * other;
          next[d][d + 1] += p * other * S(d == 0 ? q : q - 1);
        } else {
          next[k][d - 1] += p * r;
          next[k][d + 1] += p * other * S(q);
        }
      }
    mass = std::move(next);
  }
  std::vector<S> target(static_cast<std::size_t>(q) + 1, other);
  target[0] = r;
  const S eps2 = eps * eps;
  S total(0);
  for (std::size_t k = 0; k < mass.size(); ++k)
    for (std::size_t d = k; d < mass[k].size(); ++d) {
      if (near_zero<S>(mass[k][d])) continue;
      const BigInt& all = walks[m][d];
      if (sgn(all) == 0) continue;
      auto frac = [&](std::size_t delta) {
        Rational x(walks[m - 1][delta], all);
        x.canonicalize();
        return from_rational<S>(x);
      };
      // Root-child coordinates: the ω child first.
      std::vector<S> proj(target.size());
      if (d == 0) {
        for (auto& x : proj) x = frac(1);
      } else if (k >= 1) {
        proj.assign(proj.size(), frac(d + 1));
        proj[0] = frac(d - 1);
      } else {
        proj.assign(proj.size(), frac(d + 1));
        proj[1] = frac(d - 1);
      }
      S dist(0);
      for (std::size_t j = 0; j < proj.size(); ++j) {
        const S diff = abs_value<S>(S(proj[j] - target[j]));
        switch (norm) {
          case Norm::l1: dist += diff; break;
          case Norm::euclidean: dist += diff * diff; break;
          case Norm::sup: if (diff > dist) dist = diff; break;
        }
      }
      if (dist <= (norm == Norm::euclidean ? eps2 : eps)) total += mass[k][d];
    }
  return total;
}

template <Scalar S>
struct PhaseRow {
  S r;
  std::size_t m;
  S statistic;
};

// Extremality statistic of tree_central_measure(q, r) at (n, m, ε) for every
// r and m. n = 1 uses the symmetry quotient; other n build the graph once at
// max(m).
template <Scalar S>
std::vector<PhaseRow<S>> tree_phase_transition_scan(long q, const std::vector<S>& r_list, std::size_t n,
                                                    const std::vector<std::size_t>& m_list, const S& eps,
                                                    Norm norm = Norm::euclidean) {
  if (n == 1) {
    std::vector<PhaseRow<S>> rows;
    for (const auto& r : r_list)
      for (auto m : m_list) rows.push_back({r, m, tree_level1_statistic<S>(q, r, m, eps, norm)});
    return rows;
  }
  std::size_t top = 0;
  for (auto m : m_list) top = std::max(top, m);
  const GraphPtr g = share(pascalization(tree_base(q), top));
  const Equipment<S> eq = central_equipment<S>(g);
  std::vector<PhaseRow<S>> rows;
  for (const auto& r : r_list) {
    TreeBoundaryParam<S> param{q, {}, r};
    const auto mu = tree_central_measure<S>(g, param);
    for (auto m : m_list) rows.push_back({r, m, extremality_statistic(eq, mu, n, m, eps, norm)});
  }
  return rows;
}

}  // namespace bratteli
