#pragma once

// Random signed Young subgroups driven by Thoma parameters, and Monte Carlo /
// exact evaluation of χ(g) = P(g ∈ Y_η).

#include <algorithm>
#include <cmath>
#include <vector>

#include "bratteli/common.hpp"
#include "bratteli/random.hpp"

namespace bratteli {

template <Scalar S>
struct ThomaParams {
  std::vector<S> alpha;
  std::vector<S> beta;
  S gamma = S(0);

  void validate() const {
    S total = gamma;
    if (gamma < S(0)) throw invalid_argument("gamma must be nonnegative");
    for (const auto* seq : {&alpha, &beta})
      for (std::size_t i = 0; i < seq->size(); ++i) {
        if ((*seq)[i] < S(0)) throw invalid_argument("Thoma parameters must be nonnegative");
        if (i > 0 && (*seq)[i] > (*seq)[i - 1]) throw invalid_argument("Thoma parameters must be nonincreasing");
        total += (*seq)[i];
      }
    if (!near_zero<S>(S(total - S(1)), S(1e-12))) throw invalid_argument("Thoma parameters must sum to 1");
  }

  // Letters: +i (positive block i, 1-based), −i (negative block i), 0 (γ).
  std::vector<int> letters() const {
    std::vector<int> l;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      if (alpha[i] > S(0)) l.push_back(static_cast<int>(i) + 1);
    for (std::size_t i = 0; i < beta.size(); ++i)
      if (beta[i] > S(0)) l.push_back(-static_cast<int>(i) - 1);
    if (gamma > S(0)) l.push_back(0);
    return l;
  }
  S weight(int letter) const {
    if (letter > 0) return alpha[static_cast<std::size_t>(letter - 1)];
    if (letter < 0) return beta[static_cast<std::size_t>(-letter - 1)];
    return gamma;
  }
};

// A signed partition of {0..n-1} given by one letter per point; points with
// letter 0 are singletons.
struct SignedPartition {
  std::vector<int> letter;

  // Blocks as point lists, positive blocks first (by index), then negative,
  // then singletons.
  std::vector<std::pair<int, std::vector<std::size_t>>> blocks() const {
    std::vector<std::pair<int, std::vector<std::size_t>>> out;
    std::vector<int> keys;
    for (int l : letter)
      if (l != 0 && std::find(keys.begin(), keys.end(), l) == keys.end()) keys.push_back(l);
    std::sort(keys.begin(), keys.end(), [](int a, int b) {
      if ((a > 0) != (b > 0)) return a > 0;
      return std::abs(a) < std::abs(b);
    });
    for (int k : keys) {
      std::vector<std::size_t> pts;
      for (std::size_t i = 0; i < letter.size(); ++i)
        if (letter[i] == k) pts.push_back(i);
      out.push_back({k, std::move(pts)});
    }
    for (std::size_t i = 0; i < letter.size(); ++i)
      if (letter[i] == 0) out.push_back({0, {i}});
    return out;
  }
};

template <Scalar S>
SignedPartition signed_young_sample(const ThomaParams<S>& params, std::size_t n, Rng& rng) {
  params.validate();
  const auto letters = params.letters();
  std::vector<double> w;
  for (int l : letters) w.push_back(to_double(params.weight(l)));
  SignedPartition sp;
  sp.letter.resize(n);
  for (auto& x : sp.letter) x = letters[rng.categorical(w)];
  return sp;
}

// Permutation (image of each point) with the given cycle lengths on the
// points 0, 1, 2, ... in order; lengths 1 are fixed points.
inline std::vector<std::size_t> permutation_of_type(const std::vector<std::size_t>& cycle_type) {
  std::vector<std::size_t> perm;
  for (std::size_t len : cycle_type) {
    if (len == 0) throw invalid_argument("cycle lengths must be positive");
    const std::size_t start = perm.size();
    for (std::size_t k = 0; k < len; ++k) perm.push_back(start + (k + 1) % len);
  }
  return perm;
}

// g ∈ Y_η: every nontrivial cycle inside one non-singleton block, and on each
// negative block the restriction of g is even.
inline bool in_signed_young_subgroup(const std::vector<std::size_t>& perm, const SignedPartition& sp) {
  if (perm.size() > sp.letter.size()) throw invalid_argument("permutation acts outside the partition");
  std::vector<char> seen(perm.size(), 0);
  std::vector<std::pair<int, std::size_t>> parity;  // negative block, count of even-length cycles
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i] || perm[i] == i) continue;
    const int block = sp.letter[i];
    if (block == 0) return false;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      if (sp.letter[j] != block) return false;
      seen[j] = 1;
      ++len;
    }
    if (block < 0 && len % 2 == 0) {
      auto it = std::find_if(parity.begin(), parity.end(), [&](const auto& p) { return p.first == block; });
      if (it == parity.end())
        parity.push_back({block, 1});
      else
        ++it->second;
    }
  }
  for (const auto& p : parity)
    if (p.second % 2 == 1) return false;
  return true;
}

struct CharacterEstimate {
  double estimate = 0;
  double stderr_ = 0;
  std::size_t trials = 0;
};

// Fraction of sampled subgroups containing g; trial i uses generator (seed, i).
template <Scalar S>
CharacterEstimate character_estimate(const ThomaParams<S>& params, const std::vector<std::size_t>& cycle_type,
                                     std::size_t trials, std::uint64_t seed) {
  params.validate();
  if (trials == 0) throw invalid_argument("need at least one trial");
  const auto perm = permutation_of_type(cycle_type);
  std::vector<unsigned char> hit(trials, 0);
  parallel_for(trials, [&](std::size_t i) {
    Rng rng(seed, i);
    hit[i] = in_signed_young_subgroup(perm, signed_young_sample(params, perm.size(), rng));
  });
  std::size_t count = 0;
  for (auto h : hit) count += h;
  CharacterEstimate e;
  e.trials = trials;
  e.estimate = static_cast<double>(count) / static_cast<double>(trials);
  e.stderr_ = std::sqrt(e.estimate * (1 - e.estimate) / static_cast<double>(trials));
  return e;
}

// Exact P(g ∈ Y_η) by enumerating all letter assignments of the support.
template <Scalar S>
S character_exact(const ThomaParams<S>& params, const std::vector<std::size_t>& cycle_type) {
  params.validate();
  const auto perm = permutation_of_type(cycle_type);
  const auto letters = params.letters();
  const std::size_t n = perm.size();
  if (n > 12 || std::pow(static_cast<double>(letters.size()), static_cast<double>(n)) > 5e7)
    throw resource_limit("exact character enumeration too large");
  SignedPartition sp;
  sp.letter.assign(n, 0);
  std::vector<std::size_t> digit(n, 0);
  S total(0);
  while (true) {
    S w(1);
    for (std::size_t i = 0; i < n; ++i) {
      sp.letter[i] = letters[digit[i]];
      w *= params.weight(sp.letter[i]);
    }
    if (in_signed_young_subgroup(perm, sp)) total += w;
    std::size_t k = 0;
    while (k < n && ++digit[k] == letters.size()) digit[k++] = 0;
    if (k == n) break;
  }
  return total;
}

}  // namespace bratteli
