#pragma once

// Random Young diagrams: Plancherel growth, Boltzmann-sampled uniform
// partitions, their scaled profiles and the reference limit curves.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "bratteli/common.hpp"
#include "bratteli/random.hpp"

namespace bratteli {

using Partition = std::vector<long>;

inline long partition_size(const Partition& p) {
  long n = 0;
  for (long x : p) n += x;
  return n;
}

inline Partition conjugate(const Partition& p) {
  Partition c(p.empty() ? 0 : static_cast<std::size_t>(p[0]), 0);
  for (long row : p)
    for (long j = 0; j < row; ++j) ++c[static_cast<std::size_t>(j)];
  return c;
}

// All partitions of n, in reverse-lexicographic order.
inline std::vector<Partition> partitions_of(long n) {
  std::vector<Partition> out;
  Partition cur;
  std::function<void(long, long)> rec = [&](long rest, long max_part) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (long k = std::min(rest, max_part); k >= 1; --k) {
      cur.push_back(k);
      rec(rest - k, k);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

// Number of standard tableaux by the hook length formula.
inline BigInt young_dim(const Partition& p) {
  const Partition c = conjugate(p);
  BigInt num = 1, den = 1;
  long n = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (long j = 0; j < p[i]; ++j) {
      ++n;
      num *= n;
      den *= p[i] - j + c[static_cast<std::size_t>(j)] - static_cast<long>(i) - 1;
    }
  return num / den;
}

// Plancherel growth step probabilities P(λ -> λ + box in row i) = H(λ)/H(Λ),
// the product of h/(h+1) over the cells whose hooks the new box lengthens.
// Returns one entry per row 0..rows (row `rows` starts a new row); rows where
// no box can be added get 0.
template <Scalar S>
std::vector<S> plancherel_transitions(const Partition& p, const Partition& conj) {
  std::vector<S> out(p.size() + 1, S(0));
  for (std::size_t i = 0; i <= p.size(); ++i) {
    const long j = i < p.size() ? p[i] : 0;
    if (i > 0 && p[i - 1] == j) continue;
    S prob(1);
    for (long c = 0; c < j; ++c) {
      const long h = p[i] - c + conj[static_cast<std::size_t>(c)] - static_cast<long>(i) - 1;
      prob *= S(h) / S(h + 1);
    }
    const long col_len = static_cast<std::size_t>(j) < conj.size() ? conj[static_cast<std::size_t>(j)] : 0;
    for (long r = 0; r < col_len; ++r) {
      const long h = p[static_cast<std::size_t>(r)] - j + col_len - r - 1;
      prob *= S(h) / S(h + 1);
    }
    out[i] = prob;
  }
  return out;
}

template <Scalar S>
std::vector<S> plancherel_transitions(const Partition& p) {
  return plancherel_transitions<S>(p, conjugate(p));
}

struct GrowthPath {
  // rows[k] is the row receiving box k+1; the final shape is `shape`.
  std::vector<std::size_t> rows;
  Partition shape;
};

inline GrowthPath plancherel_growth_sample(long n, Rng& rng) {
  if (n < 0) throw invalid_argument("plancherel sample size must be nonnegative");
  GrowthPath g;
  Partition conj;
  for (long k = 0; k < n; ++k) {
    const auto probs = plancherel_transitions<double>(g.shape, conj);
    const std::size_t i = rng.categorical(probs);
    if (i == g.shape.size()) g.shape.push_back(0);
    const std::size_t col = static_cast<std::size_t>(g.shape[i]);
    ++g.shape[i];
    if (col == conj.size()) conj.push_back(0);
    ++conj[col];
    g.rows.push_back(i);
  }
  return g;
}

inline GrowthPath plancherel_growth_sample(long n, std::uint64_t seed) {
  Rng rng(seed);
  return plancherel_growth_sample(n, rng);
}

// Boltzmann sampler at x = exp(-π/√(6n)) with rejection on the exact size,
// so the result is uniform over the partitions of n.
inline Partition uniform_partition_sample(long n, Rng& rng, std::size_t max_attempts = 1'000'000) {
  if (n < 0) throw invalid_argument("partition size must be nonnegative");
  if (n == 0) return {};
  const double logx = -std::numbers::pi / std::sqrt(6.0 * static_cast<double>(n));
  std::vector<long> mult(static_cast<std::size_t>(n) + 1);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    long total = 0;
    bool over = false;
    for (long k = 1; k <= n; ++k) {
      // P(m) = (1 - x^k) x^{km}: m = floor(log U / (k log x)).
      const double m = std::floor(std::log(rng.uniform_positive()) / (static_cast<double>(k) * logx));
      if (m > static_cast<double>(n)) {
        over = true;
        break;
      }
      mult[static_cast<std::size_t>(k)] = static_cast<long>(m);
      total += k * static_cast<long>(m);
      if (total > n) {
        over = true;
        break;
      }
    }
    if (over || total != n) continue;
    Partition p;
    for (long k = n; k >= 1; --k)
      for (long m = 0; m < mult[static_cast<std::size_t>(k)]; ++m) p.push_back(k);
    return p;
  }
  throw resource_limit("uniform partition sampler exceeded its attempt budget");
}

inline Partition uniform_partition_sample(long n, std::uint64_t seed) {
  Rng rng(seed);
  return uniform_partition_sample(n, rng);
}

// Ω(s) = (2/π)(s arcsin s + √(1 − s²)) on |s| ≤ 1, |s| outside.
inline double omega_curve(double s) {
  if (std::abs(s) >= 1) return std::abs(s);
  return 2.0 / std::numbers::pi * (s * std::asin(s) + std::sqrt(1 - s * s));
}

// Breakpoints of a piecewise-linear profile, u increasing; |u| outside.
struct ShapeProfile {
  std::vector<double> u;
  std::vector<double> v;

  double operator()(double s) const {
    if (u.empty() || s <= u.front() || s >= u.back()) return std::abs(s);
    const auto it = std::upper_bound(u.begin(), u.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - u.begin());
    const double t = (s - u[k - 1]) / (u[k] - u[k - 1]);
    return v[k - 1] + t * (v[k] - v[k - 1]);
  }
};

// Rotated (Russian) profile of λ scaled by 1/√n: u = (x − y)/2, v = (x + y)/2,
// which puts the Plancherel limit on Ω.
inline ShapeProfile rotated_profile(const Partition& p) {
  ShapeProfile prof;
  const double n = static_cast<double>(partition_size(p));
  if (n == 0) return prof;
  const double scale = 1.0 / (2.0 * std::sqrt(n));
  // Boundary lattice path from (0, rows) to (λ_1, 0): right steps along each
  // row from the bottom, then one step up.
  long x = 0, y = static_cast<long>(p.size());
  auto emit = [&] {
    prof.u.push_back(static_cast<double>(x - y) * scale);
    prof.v.push_back(static_cast<double>(x + y) * scale);
  };
  emit();
  for (std::size_t i = p.size(); i-- > 0;) {
    while (x < p[i]) {
      ++x;
      emit();
    }
    --y;
    emit();
  }
  return prof;
}

// sup_{s in grid} |f(s) − Ω(s)| over `points` equally spaced s in [lo, hi].
template <class F>
double sup_distance_to_omega(const F& f, double lo, double hi, std::size_t points) {
  double worst = 0;
  for (std::size_t k = 0; k < points; ++k) {
    const double s = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    worst = std::max(worst, std::abs(f(s) - omega_curve(s)));
  }
  return worst;
}

// Limit curve of uniform partitions: e^{-cx} + e^{-cy} = 1 with c = π/√6,
// solved for y.
inline double uniform_curve_y(double x) {
  const double c = std::numbers::pi / std::sqrt(6.0);
  if (x <= 0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-std::exp(-c * x)) / c;
}

// Plain-coordinate boundary of λ scaled by 1/√n as a staircase: y(x) is the
// scaled number of rows longer than x√n.
struct StaircaseProfile {
  Partition parts;
  double scale = 1;
  double operator()(double x) const {
    const double t = x / scale;
    long rows = 0;
    for (long r : parts)
      if (static_cast<double>(r) > t) ++rows;
    return static_cast<double>(rows) * scale;
  }
};

inline StaircaseProfile plain_profile(const Partition& p) {
  const double n = static_cast<double>(partition_size(p));
  return {p, n > 0 ? 1.0 / std::sqrt(n) : 1.0};
}

// Distance between a scaled partition boundary and the uniform limit curve,
// measured in isometric rotated coordinates (a = (x − y)/√2, b = (x + y)/√2):
// both curves are graphs over a, and the sup of their b-gap is taken over the
// part of the reference curve where x > cut and y > cut.
inline double uniform_shape_distance(const Partition& p, double cut = 0.1, std::size_t points = 4001) {
  if (p.empty()) throw invalid_argument("empty partition");
  const double n = static_cast<double>(partition_size(p));
  const double scale = 1.0 / std::sqrt(n);
  // Boundary path from (0, rows) to (λ_1, 0) in rotated coordinates.
  std::vector<double> a, b;
  long x = 0, y = static_cast<long>(p.size());
  auto emit = [&] {
    const double xs = static_cast<double>(x) * scale, ys = static_cast<double>(y) * scale;
    a.push_back((xs - ys) / std::sqrt(2.0));
    b.push_back((xs + ys) / std::sqrt(2.0));
  };
  emit();
  for (std::size_t i = p.size(); i-- > 0;) {
    while (x < p[i]) {
      ++x;
      emit();
    }
    --y;
    emit();
  }
  auto boundary_at = [&](double s) {
    if (s <= a.front()) return b.front() + (a.front() - s);
    if (s >= a.back()) return b.back() + (s - a.back());
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), s) - a.begin());
    const double t = (s - a[k - 1]) / (a[k] - a[k - 1]);
    return b[k - 1] + t * (b[k] - b[k - 1]);
  };
  // The reference curve is symmetric; points with x, y > cut have
  // |a| < a_max where x = cut.
  const double a_max = (uniform_curve_y(cut) - cut) / std::sqrt(2.0);
  double worst = 0;
  for (std::size_t k = 0; k < points; ++k) {
    const double s = -a_max + 2 * a_max * static_cast<double>(k) / static_cast<double>(points - 1);
    // Reference b at a = s: solve x − y(x) = s√2 by bisection on x.
    double lo = cut * 0.5, hi = uniform_curve_y(cut) * 2;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid - uniform_curve_y(mid) < s * std::sqrt(2.0))
        lo = mid;
      else
        hi = mid;
    }
    const double xr = 0.5 * (lo + hi);
    const double ref = (xr + uniform_curve_y(xr)) / std::sqrt(2.0);
    worst = std::max(worst, std::abs(boundary_at(s) - ref));
  }
  return worst;
}

}  // namespace bratteli
