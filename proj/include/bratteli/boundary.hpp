#pragma once

// Boundary computations; this header also pulls in the Young-diagram, tree
// and Thoma tools. Entropy lives in entropy.hpp (needs MPFR).

#include <vector>

#include "bratteli/builders.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/thoma.hpp"
#include "bratteli/tree_boundary.hpp"
#include "bratteli/young.hpp"

namespace bratteli {

struct PascalBoundaryRow {
  // Bernoulli parameter, or the mixture description for mixture rows.
  std::string measure;
  bool central = false;
  Rational deviation;
  std::vector<std::pair<std::size_t, Rational>> statistic;  // (m, value)
};

// Exact centrality up to `levels` and extremality scans over m_list at
// (n = 1, ε) for Bernoulli(p), p in p_grid, plus optional mixtures of them.
inline std::vector<PascalBoundaryRow> pascal_boundary_check(
    const std::vector<Rational>& p_grid, std::size_t levels, const std::vector<std::size_t>& m_list,
    const Rational& eps, const std::vector<std::vector<std::pair<Rational, Rational>>>& mixtures = {},
    Norm norm = Norm::euclidean) {
  std::size_t top = levels;
  for (auto m : m_list) top = std::max(top, m);
  const GraphPtr g = share(pascal(1, top));
  const auto eq = central_equipment<Rational>(g);
  std::vector<PascalBoundaryRow> rows;
  auto run = [&](std::string name, const MarkovMeasure<Rational>& mu) {
    PascalBoundaryRow row;
    row.measure = std::move(name);
    const auto rep = is_central(mu, levels);
    row.central = rep.central;
    row.deviation = rep.deviation;
    for (auto m : m_list) row.statistic.push_back({m, extremality_statistic(eq, mu, 1, m, eps, norm)});
    rows.push_back(std::move(row));
  };
  for (const auto& p : p_grid) run(to_string(p), bernoulli_measure<Rational>(g, p));
  for (const auto& mix : mixtures) {
    std::vector<MarkovMeasure<Rational>> parts;
    std::vector<Rational> weights;
    std::string name = "mixture";
    for (const auto& [w, p] : mix) {
      parts.push_back(bernoulli_measure<Rational>(g, p));
      weights.push_back(w);
      name += " " + to_string(w) + "*B(" + to_string(p) + ")";
    }
    run(name, mixture(parts, weights));
  }
  return rows;
}

}  // namespace bratteli
