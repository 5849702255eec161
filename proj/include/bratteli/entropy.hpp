#pragma once

// Entropy of the Plancherel measure dim(λ)²/n! on partitions of n, from exact
// probabilities and 50-digit MPFR logarithms. Link with MPFR.

#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>
#include <vector>

#include "bratteli/young.hpp"

namespace bratteli {

using Float50 = boost::multiprecision::mpfr_float_50;

inline constexpr long kMaxEntropyLevel = 60;

inline Float50 log_of(const BigInt& z) {
  Float50 x;
  mpfr_set_z(x.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return boost::multiprecision::log(x);
}

// H(μ_n) in nats.
inline Float50 plancherel_entropy(long n) {
  if (n < 0) throw invalid_argument("entropy level must be nonnegative");
  if (n > kMaxEntropyLevel) throw resource_limit("entropy level above " + std::to_string(kMaxEntropyLevel));
  BigInt fact = 1;
  for (long k = 2; k <= n; ++k) fact *= k;
  const Float50 log_fact = log_of(fact);
  Float50 h = 0;
  BigInt check = 0;
  for (const auto& p : partitions_of(n)) {
    const BigInt d = young_dim(p);
    const BigInt d2 = d * d;
    check += d2;
    // −p log p with p = d²/n!.
    const Float50 prob = Float50(log_of(d2) - log_fact);
    h -= boost::multiprecision::exp(prob) * prob;
  }
  if (check != fact) throw invalid_argument("internal: Σ dim² != n!");
  return h;
}

struct EntropyRow {
  long n;
  Float50 entropy;
  double ratio;  // h_n / √n
};

inline std::vector<EntropyRow> plancherel_entropy_table(long from, long to) {
  std::vector<EntropyRow> rows;
  for (long n = from; n <= to; ++n) {
    const Float50 h = plancherel_entropy(n);
    rows.push_back({n, h, static_cast<double>(h / boost::multiprecision::sqrt(Float50(n)))});
  }
  return rows;
}

}  // namespace bratteli
