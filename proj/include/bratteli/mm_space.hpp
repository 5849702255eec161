#pragma once

// Finite metric-measure spaces and their matrix distributions: sampling,
// distance-matrix cone membership, reconstruction from a sample, isomorphism
// testing and an exchangeability score.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bratteli/common.hpp"
#include "bratteli/random.hpp"

namespace bratteli {

template <Scalar S>
S merge_tolerance() {
  if constexpr (ScalarTraits<S>::exact) {
    return S(0);
  } else {
    return S(1e-9);
  }
}

// N×N distance matrix stored as codes into a table of distinct values. A
// sample from a k-point space has at most k² distinct entries.
template <Scalar S>
class DistanceMatrix {
 public:
  using Code = std::uint32_t;

  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), codes_(n * n, 0) { add_value(S(0)); }
  explicit DistanceMatrix(const Matrix<S>& m) : DistanceMatrix(m.rows()) {
    if (m.rows() != m.cols()) throw invalid_argument("distance matrix must be square");
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) codes_[i * n_ + j] = add_value(m(i, j));
  }

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return n_; }
  const S& operator()(std::size_t i, std::size_t j) const { return values_[codes_[i * n_ + j]]; }
  Code code(std::size_t i, std::size_t j) const { return codes_[i * n_ + j]; }
  const std::vector<S>& values() const noexcept { return values_; }

  void set_code(std::size_t i, std::size_t j, Code c) {
    if (c >= values_.size()) throw invalid_argument("value code out of range");
    codes_[i * n_ + j] = c;
  }
  // Equal values share one code.
  Code add_value(const S& v) {
    auto it = index_.find(v);
    if (it != index_.end()) return it->second;
    const auto c = static_cast<Code>(values_.size());
    values_.push_back(v);
    index_.emplace(v, c);
    return c;
  }

  Matrix<S> dense() const {
    Matrix<S> m(n_, n_, S(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Code> codes_;
  std::vector<S> values_;
  std::map<S, Code> index_;
};

namespace detail {

template <Scalar S, class M>
bool symmetric_nonnegative(const M& m, const S& tol);

// 0: different, 1: equal within tol, 2: exactly equal.
template <Scalar S, class M>
int entry_match(const M& m, std::size_t i, std::size_t j, std::size_t k, std::size_t l, const S& tol) {
  if constexpr (requires { m.code(i, j); }) {
    if (m.code(i, j) == m.code(k, l)) return 2;
    if constexpr (ScalarTraits<S>::exact) return 0;
  }
  const S& a = m(i, j);
  const S& b = m(k, l);
  if (a == b) return 2;
  if constexpr (ScalarTraits<S>::exact) {
    return 0;
  } else {
    return abs_value<S>(S(a - b)) <= tol ? 1 : 0;
  }
}

template <Scalar S, class M>
bool symmetric_nonnegative(const M& m, const S& tol) {
  if (m.rows() != m.cols()) return false;
  std::vector<char> negative;
  if constexpr (requires { m.values(); }) {
    for (const auto& v : m.values()) negative.push_back(v < S(-tol));
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!near_zero<S>(m(i, i), tol)) return false;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (requires { m.code(i, j); }) {
        if (negative[m.code(i, j)]) return false;
      } else {
        if (m(i, j) < S(-tol)) return false;
      }
      if (j > i && entry_match(m, i, j, j, i, tol) == 0) return false;
    }
  }
  return true;
}

struct ColumnClasses {
  std::vector<std::size_t> reps;
  std::vector<std::size_t> of;
  bool ambiguous = false;
};

// Group indices with identical columns (within tol), by first appearance.
template <Scalar S, class M>
ColumnClasses column_classes(const M& m, const S& tol) {
  ColumnClasses c;
  const std::size_t n = m.rows();
  c.of.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (std::size_t k = 0; k < c.reps.size() && !placed; ++k) {
      const std::size_t r = c.reps[k];
      // Cheap rejection: distinct points differ in the entry against r.
      if (entry_match(m, i, r, r, r, tol) == 0) continue;
      bool same = true, exact = true;
      for (std::size_t col = 0; col < n && same; ++col) {
        const int e = entry_match(m, i, col, r, col, tol);
        if (e == 0) same = false;
        else if (e == 1) exact = false;
      }
      if (same) {
        c.of[i] = k;
        placed = true;
        if (!exact) c.ambiguous = true;
      }
    }
    if (!placed) {
      c.of[i] = c.reps.size();
      c.reps.push_back(i);
    }
  }
  return c;
}

template <Scalar S, class M>
bool triangle_on(const M& m, const std::vector<std::size_t>& idx, const S& tol) {
  for (auto i : idx)
    for (auto j : idx)
      for (auto k : idx)
        if (m(i, k) > S(m(i, j) + m(j, k) + tol)) return false;
  return true;
}

}  // namespace detail

// Membership in the cone of distance (pseudo)matrices. Rows with identical
// columns are interchangeable, so the triangle inequality is checked on one
// representative per class.
template <Scalar S>
bool is_distance_matrix(const Matrix<S>& m, const S& tol = merge_tolerance<S>()) {
  if (!detail::symmetric_nonnegative(m, tol)) return false;
  return detail::triangle_on(m, detail::column_classes(m, tol).reps, tol);
}

template <Scalar S>
bool is_distance_matrix(const DistanceMatrix<S>& m, const S& tol = merge_tolerance<S>()) {
  if (!detail::symmetric_nonnegative(m, tol)) return false;
  return detail::triangle_on(m, detail::column_classes(m, tol).reps, tol);
}

template <Scalar S>
struct FiniteMetricMeasureSpace {
  Matrix<S> dist;
  std::vector<S> weights;

  std::size_t size() const noexcept { return weights.size(); }

  // Metric axioms up to zero distances between distinct points, which the
  // purity check reports separately.
  void validate() const {
    if (dist.rows() != weights.size() || dist.cols() != weights.size())
      throw invalid_argument("distance matrix and weights disagree in size");
    if (weights.empty()) throw invalid_argument("empty metric-measure space");
    if (!is_distance_matrix(dist)) throw invalid_argument("not a (pseudo)metric distance matrix");
    S total(0);
    for (const auto& w : weights) {
      if (!(w > S(0))) throw invalid_argument("weights must be positive");
      total += w;
    }
    if (!near_zero<S>(S(total - S(1)), S(1e-9))) throw invalid_argument("weights must sum to 1");
  }

  // Pure: all distance columns distinct.
  bool pure() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (same_column(i, j)) return false;
    return true;
  }

  bool same_column(std::size_t i, std::size_t j) const {
    for (std::size_t k = 0; k < size(); ++k)
      if (!near_zero<S>(S(dist(i, k) - dist(j, k)), merge_tolerance<S>())) return false;
    return true;
  }
};

// N i.i.d. points by weight and their pairwise distances.
template <Scalar S>
DistanceMatrix<S> matrix_distribution_sample(const FiniteMetricMeasureSpace<S>& space, std::size_t N, Rng& rng,
                                             std::vector<std::size_t>* points = nullptr) {
  space.validate();
  if (N == 0) throw invalid_argument("sample size must be >= 1");
  std::vector<double> w;
  for (const auto& x : space.weights) w.push_back(to_double(x));
  std::vector<std::size_t> idx(N);
  for (auto& i : idx) i = rng.categorical(w);
  const std::size_t k = space.size();
  DistanceMatrix<S> m(N);
  std::vector<typename DistanceMatrix<S>::Code> code(k * k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (a != b) code[a * k + b] = m.add_value(space.dist(a, b));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) m.set_code(a, b, a == b ? 0 : code[idx[a] * k + idx[b]]);
  if (points) *points = std::move(idx);
  return m;
}

template <Scalar S>
DistanceMatrix<S> matrix_distribution_sample(const FiniteMetricMeasureSpace<S>& space, std::size_t N,
                                             std::uint64_t seed, std::vector<std::size_t>* points = nullptr) {
  Rng rng(seed, 0);
  return matrix_distribution_sample(space, N, rng, points);
}

template <Scalar S>
struct Reconstruction {
  FiniteMetricMeasureSpace<S> space;
  // Columns equal within tolerance but not exactly (float inputs only).
  bool ambiguous = false;
  // Sample index -> reconstructed point.
  std::vector<std::size_t> assignment;
};

// Merge sample indices whose distance columns coincide; weights are the
// empirical frequencies. Points are ordered by first appearance.
template <Scalar S>
Reconstruction<S> reconstruct(const DistanceMatrix<S>& sample) {
  const std::size_t N = sample.rows();
  if (N == 0) throw invalid_argument("empty sample");
  const S tol = merge_tolerance<S>();
  if (!detail::symmetric_nonnegative(sample, tol)) throw invalid_argument("sample is not a distance matrix");
  const auto classes = detail::column_classes(sample, tol);
  if (!detail::triangle_on(sample, classes.reps, tol)) throw invalid_argument("sample violates the triangle inequality");
  Reconstruction<S> r;
  r.ambiguous = classes.ambiguous;
  r.assignment = classes.of;
  const std::size_t k = classes.reps.size();
  r.space.dist = Matrix<S>(k, k, S(0));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) r.space.dist(a, b) = sample(classes.reps[a], classes.reps[b]);
  std::vector<std::size_t> count(k, 0);
  for (auto a : r.assignment) ++count[a];
  for (auto c : count) r.space.weights.push_back(S(static_cast<long>(c)) / S(static_cast<long>(N)));
  return r;
}

template <Scalar S>
Reconstruction<S> reconstruct(const Matrix<S>& sample) {
  return reconstruct(DistanceMatrix<S>(sample));
}

// Metric quotient of a possibly non-pure space: twins (identical columns)
// merge with summed weight. Returns the space and whether it was pure.
template <Scalar S>
std::pair<FiniteMetricMeasureSpace<S>, bool> purify(const FiniteMetricMeasureSpace<S>& s) {
  s.validate();
  std::vector<std::size_t> reps, of(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t k = 0;
    while (k < reps.size() && !s.same_column(i, reps[k])) ++k;
    if (k == reps.size()) reps.push_back(i);
    of[i] = k;
  }
  FiniteMetricMeasureSpace<S> out{Matrix<S>(reps.size(), reps.size(), S(0)), std::vector<S>(reps.size(), S(0))};
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b) out.dist(a, b) = s.dist(reps[a], reps[b]);
  for (std::size_t i = 0; i < s.size(); ++i) out.weights[of[i]] += s.weights[i];
  return {out, reps.size() == s.size()};
}

inline constexpr std::size_t kMaxIsomorphismPoints = 8;

// Search for a bijection a -> b preserving distances (within dist_tol) and
// weights (within weight_tol). On success the bijection is written to `map`.
template <Scalar S>
bool mm_equal(const FiniteMetricMeasureSpace<S>& a, const FiniteMetricMeasureSpace<S>& b, const S& dist_tol,
              const S& weight_tol, std::vector<std::size_t>* map = nullptr) {
  if (a.size() != b.size()) return false;
  const std::size_t k = a.size();
  if (k > kMaxIsomorphismPoints)
    throw resource_limit("isomorphism search limited to " + std::to_string(kMaxIsomorphismPoints) + " points");
  std::vector<std::size_t> to(k);
  std::vector<char> used(k, 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) return true;
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      if (abs_value<S>(S(a.weights[i] - b.weights[j])) > weight_tol) continue;
      bool ok = true;
      for (std::size_t p = 0; p < i && ok; ++p)
        if (abs_value<S>(S(a.dist(i, p) - b.dist(j, to[p]))) > dist_tol) ok = false;
      if (!ok) continue;
      used[j] = 1;
      to[i] = j;
      if (rec(i + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  const bool found = rec(0);
  if (found && map) *map = to;
  return found;
}

template <Scalar S>
bool mm_equal(const FiniteMetricMeasureSpace<S>& a, const FiniteMetricMeasureSpace<S>& b, const S& tol) {
  return mm_equal(a, b, tol, tol);
}

// Asymptotic two-sided Kolmogorov-Smirnov p-value for samples of sizes n, m.
inline double ks_p_value(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw invalid_argument("KS test needs nonempty samples");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double ne = n * m / (n + m);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 200; ++k) {
    const double term = 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

template <Scalar S>
using MatrixStatistic = std::function<double(const Matrix<S>&)>;

// Mean of the first row: sensitive to a distinguished first sample index.
template <Scalar S>
double first_row_mean(const Matrix<S>& m) {
  double t = 0;
  for (std::size_t j = 1; j < m.cols(); ++j) t += to_double(m(0, j));
  return m.cols() > 1 ? t / static_cast<double>(m.cols() - 1) : 0.0;
}

// KS p-value between the statistic on the samples and on independently
// permuted copies (simultaneous row/column permutation, generator (seed, i)).
template <Scalar S>
double exchangeability_check(const std::vector<Matrix<S>>& samples, const MatrixStatistic<S>& statistic,
                             std::uint64_t seed) {
  if (samples.size() < 2) throw invalid_argument("exchangeability check needs at least two matrices");
  std::vector<double> before(samples.size()), after(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const Matrix<S>& m = samples[i];
    const std::size_t n = m.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed, i);
    for (std::size_t k = n; k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
    Matrix<S> p(n, n, S(0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) p(a, b) = m(perm[a], perm[b]);
    before[i] = statistic(m);
    after[i] = statistic(p);
  });
  return ks_p_value(before, after);
}

}  // namespace bratteli
