#pragma once

// JSON documents for graphs, Markov measures and metric-measure spaces, and
// CSV for distance matrices. Rationals are written as "p/q" strings so that
// round trips are exact; floats use the shortest round-trip decimal form.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bratteli/graph.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/mm_space.hpp"

namespace bratteli {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <Scalar S>
std::string scalar_text(const S& x) {
  if constexpr (ScalarTraits<S>::exact) {
    return to_string(x);
  } else {
    return format_double(static_cast<double>(x));
  }
}

template <Scalar S>
Json scalar_to_json(const S& x) {
  if constexpr (ScalarTraits<S>::exact) {
    return to_string(x);
  } else {
    return static_cast<double>(x);
  }
}

// Strings and integers are exact; JSON floats are taken at their decimal value.
template <Scalar S>
S scalar_from_json(const Json& j) {
  if (j.is_string()) return from_rational<S>(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return from_rational<S>(Rational(BigInt(std::to_string(j.get<long long>()))));
  if (j.is_number_float()) {
    if constexpr (ScalarTraits<S>::exact) {
      return parse_rational(format_double(j.get<double>()));
    } else {
      return static_cast<S>(j.get<double>());
    }
  }
  throw invalid_argument("expected a number or a rational string, got " + j.dump());
}

inline Json bigint_to_json(const BigInt& z) {
  if (z.fits_slong_p()) return z.get_si();
  return to_string(z);
}

inline BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    BigInt z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw invalid_argument("bad integer '" + j.get<std::string>() + "'");
    return z;
  }
  throw invalid_argument("expected an integer, got " + j.dump());
}

inline Json graph_to_json(const GradedGraph& g) {
  Json levels = Json::array(), edges = Json::array();
  for (std::size_t n = 0; n <= g.depth(); ++n) levels.push_back(g.labels(n));
  for (std::size_t k = 0; k < g.depth(); ++k) {
    Json level = Json::array();
    for (const auto& e : g.edges_from(k)) level.push_back(Json::array({e.from, e.to, bigint_to_json(e.mult)}));
    edges.push_back(std::move(level));
  }
  Json j;
  j["kind"] = g.kind();
  j["levels"] = std::move(levels);
  j["edges"] = std::move(edges);
  return j;
}

inline void require_keys(const Json& j, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional, const std::string& what) {
  if (!j.is_object()) throw invalid_argument(what + " must be a JSON object");
  for (const char* k : required)
    if (!j.contains(k)) throw invalid_argument(what + " lacks key '" + k + "'");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw invalid_argument(what + " has unknown key '" + key + "'");
  }
}

inline GradedGraph graph_from_json(const Json& j) {
  require_keys(j, {"levels", "edges"}, {"kind"}, "graph document");
  try {
    std::vector<std::vector<Label>> labels = j.at("levels").get<std::vector<std::vector<Label>>>();
    std::vector<std::vector<EdgeSpec>> edges;
    for (const auto& level : j.at("edges")) {
      std::vector<EdgeSpec> specs;
      for (const auto& e : level) {
        if (!e.is_array() || e.size() != 3) throw invalid_argument("edge must be [from, to, multiplicity]");
        specs.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), bigint_from_json(e[2])});
      }
      edges.push_back(std::move(specs));
    }
    return GradedGraph(j.value("kind", std::string("custom")), std::move(labels), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw invalid_argument(std::string("malformed graph document: ") + e.what());
  }
}

// transitions[n][u] lists [target index, probability] per outgoing bundle.
template <Scalar S>
Json measure_to_json(const MarkovMeasure<S>& mu) {
  const auto& g = mu.graph();
  Json levels = Json::array();
  for (std::size_t n = 0; n < g.depth(); ++n) {
    Json rows = Json::array();
    for (std::size_t u = 0; u < g.level_size(n); ++u) {
      Json row = Json::array();
      const auto out = g.out_edges({n, u});
      for (std::size_t k = 0; k < out.size(); ++k)
        row.push_back(Json::array({out[k].to, scalar_to_json(mu.bundle_probability({n, u}, k))}));
      rows.push_back(std::move(row));
    }
    levels.push_back(std::move(rows));
  }
  Json j;
  j["graph"] = graph_to_json(g);
  j["transitions"] = std::move(levels);
  return j;
}

template <Scalar S>
MarkovMeasure<S> measure_from_json(const Json& j) {
  require_keys(j, {"graph", "transitions"}, {}, "measure document");
  const GraphPtr g = share(graph_from_json(j.at("graph")));
  const Json& t = j.at("transitions");
  if (!t.is_array() || t.size() != g->depth())
    throw Error("domain_mismatch", "measure needs one transition table per level below the top");
  std::vector<std::vector<std::vector<S>>> probs(g->depth());
  for (std::size_t n = 0; n < g->depth(); ++n) {
    if (!t[n].is_array() || t[n].size() != g->level_size(n))
      throw Error("domain_mismatch", "transition table size mismatch at level " + std::to_string(n));
    probs[n].resize(g->level_size(n));
    for (std::size_t u = 0; u < g->level_size(n); ++u) {
      const auto out = g->out_edges({n, u});
      probs[n][u].assign(out.size(), S(0));
      for (const auto& entry : t[n][u]) {
        if (!entry.is_array() || entry.size() != 2) throw invalid_argument("transition must be [target, probability]");
        const auto to = entry[0].get<std::size_t>();
        std::size_t k = 0;
        while (k < out.size() && out[k].to != to) ++k;
        if (k == out.size())
          throw Error("domain_mismatch", "transition to a non-adjacent vertex at level " + std::to_string(n));
        probs[n][u][k] = scalar_from_json<S>(entry[1]);
      }
    }
  }
  return MarkovMeasure<S>(g, std::move(probs));
}

template <Scalar S>
Json space_to_json(const FiniteMetricMeasureSpace<S>& s) {
  Json d = Json::array(), w = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < s.size(); ++k) row.push_back(scalar_to_json(s.dist(i, k)));
    d.push_back(std::move(row));
    w.push_back(scalar_to_json(s.weights[i]));
  }
  Json j;
  j["distances"] = std::move(d);
  j["weights"] = std::move(w);
  return j;
}

template <Scalar S>
FiniteMetricMeasureSpace<S> space_from_json(const Json& j) {
  require_keys(j, {"distances", "weights"}, {}, "space document");
  const Json& d = j.at("distances");
  const Json& w = j.at("weights");
  if (!d.is_array() || !w.is_array()) throw invalid_argument("distances and weights must be arrays");
  const std::size_t k = w.size();
  FiniteMetricMeasureSpace<S> s{Matrix<S>(k, k, S(0)), {}};
  if (d.size() != k) throw invalid_argument("distance matrix and weights disagree in size");
  for (std::size_t i = 0; i < k; ++i) {
    if (!d[i].is_array() || d[i].size() != k) throw invalid_argument("distance matrix must be square");
    for (std::size_t c = 0; c < k; ++c) s.dist(i, c) = scalar_from_json<S>(d[i][c]);
    s.weights.push_back(scalar_from_json<S>(w[i]));
  }
  s.validate();
  return s;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Header row c0..c{N-1}, then one row per sample index.
template <Scalar S, class M>
void write_matrix_csv(std::ostream& out, const M& m) {
  for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << 'c' << j;
  out << '\n';
  std::vector<std::string> text;
  if constexpr (requires { m.values(); }) {
    for (const auto& v : m.values()) text.push_back(scalar_text<S>(v));
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      if constexpr (requires { m.code(i, j); }) {
        out << text[m.code(i, j)];
      } else {
        out << scalar_text<S>(m(i, j));
      }
    }
    out << '\n';
  }
}

template <Scalar S>
DistanceMatrix<S> read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw invalid_argument("empty matrix CSV");
  const std::size_t n = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  DistanceMatrix<S> m(n);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row == n) throw invalid_argument("matrix CSV has more rows than columns");
    std::stringstream cells(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(cells, cell, ',')) {
      if (col == n) throw invalid_argument("matrix CSV row " + std::to_string(row) + " is too long");
      m.set_code(row, col++, m.add_value(from_rational<S>(parse_rational(cell))));
    }
    if (col != n) throw invalid_argument("matrix CSV row " + std::to_string(row) + " is too short");
    ++row;
  }
  if (row != n) throw invalid_argument("matrix CSV is not square");
  return m;
}

}  // namespace bratteli
