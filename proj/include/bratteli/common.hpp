#pragma once

// Shared numeric plumbing: exact big integers/rationals, the scalar traits the
// templated algorithms dispatch on, a small dense matrix, and the error type.

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace bratteli {

using BigInt = mpz_class;
using Rational = mpq_class;

// Every library error carries a machine-readable kind; the CLI forwards it.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

inline Error invalid_argument(const std::string& what) { return {"invalid_argument", what}; }
inline Error resource_limit(const std::string& what) { return {"resource_limit", what}; }

template <class S>
concept Scalar = std::same_as<S, Rational> || std::floating_point<S>;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational tolerance() { return Rational(0); }
};

template <std::floating_point F>
struct ScalarTraits<F> {
  static constexpr bool exact = false;
  static F tolerance() { return F(1e-12); }
};

// Nearest double (mpq_get_d truncates).
inline double to_double(const Rational& q) {
  const double t = q.get_d();
  if (!std::isfinite(t) || Rational(t) == q) return t;
  const double away = std::nextafter(t, sgn(q) > 0 ? HUGE_VAL : -HUGE_VAL);
  const Rational dt = abs(Rational(q - Rational(t))), da = abs(Rational(Rational(away) - q));
  return da < dt ? away : t;
}
inline double to_double(const BigInt& z) { return z.get_d(); }
template <std::floating_point F>
double to_double(F x) {
  return static_cast<double>(x);
}

template <Scalar S>
S from_rational(const Rational& q) {
  if constexpr (std::same_as<S, Rational>) {
    return q;
  } else {
    return static_cast<S>(to_double(q));
  }
}

template <Scalar S>
S from_bigint(const BigInt& z) {
  if constexpr (std::same_as<S, Rational>) {
    return Rational(z);
  } else {
    return static_cast<S>(z.get_d());
  }
}

// x == 0 exactly for rationals, |x| <= tol for floats.
template <Scalar S>
bool near_zero(const S& x, const S& tol = ScalarTraits<S>::tolerance()) {
  if constexpr (ScalarTraits<S>::exact) {
    return sgn(x) == 0;
  } else {
    return std::abs(x) <= tol;
  }
}

template <Scalar S>
S abs_value(const S& x) {
  if constexpr (std::same_as<S, Rational>) {
    return abs(x);
  } else {
    return std::abs(x);
  }
}

// Accepts "3/10", "-2", "0.7", "1e-3" and returns the exact rational value.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&] { return invalid_argument("not a rational number: '" + s + "'"); };
  if (s.empty()) throw fail();
  if (s.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw fail();
    if (q.get_den() == 0) throw fail();
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      try {
        std::size_t used = 0;
        exponent += std::stol(s.substr(pos + 1), &used);
        if (used != s.size() - pos - 1) throw fail();
      } catch (const std::logic_error&) {
        throw fail();
      }
      pos = s.size();
      break;
    } else {
      throw fail();
    }
  }
  if (!seen_digit) throw fail();
  BigInt num(digits, 10);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

inline std::string to_string(const Rational& q) { return q.get_str(10); }
inline std::string to_string(const BigInt& z) { return z.get_str(10); }

// Row-major dense matrix; just enough for cost matrices, couplings and metrics.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> discrete_metric(std::size_t n) {
  Matrix<T> m(n, n, T(1));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T(0);
  return m;
}

}  // namespace bratteli
