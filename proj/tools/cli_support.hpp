#pragma once

// Inline graph/measure specifications, list parsing and the SVG writer used
// by the command-line tool.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bratteli/builders.hpp"
#include "bratteli/io.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/tree_boundary.hpp"
#include "bratteli/young.hpp"

namespace bratteli::cli {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::logic_error&) {
    throw invalid_argument(what + ": expected a nonnegative integer, got '" + s + "'");
  }
  if (used != s.size()) throw invalid_argument(what + ": expected a nonnegative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

inline std::vector<std::size_t> parse_sizes(const std::string& s, const std::string& what) {
  std::vector<std::size_t> out;
  for (const auto& part : split(s, ',')) {
    // a..b:step ranges are accepted, e.g. "20..200:20".
    if (auto dots = part.find(".."); dots != std::string::npos) {
      std::size_t step = 1;
      std::string hi = part.substr(dots + 2);
      if (auto colon = hi.find(':'); colon != std::string::npos) {
        step = parse_size(hi.substr(colon + 1), what);
        hi = hi.substr(0, colon);
      }
      if (step == 0) throw invalid_argument(what + ": range step must be positive");
      const std::size_t lo = parse_size(part.substr(0, dots), what), top = parse_size(hi, what);
      for (std::size_t v = lo; v <= top; v += step) out.push_back(v);
    } else {
      out.push_back(parse_size(part, what));
    }
  }
  if (out.empty()) throw invalid_argument(what + ": empty list");
  return out;
}

inline std::vector<Rational> parse_rationals(const std::string& s) {
  std::vector<Rational> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(parse_rational(part));
  return out;
}

// pascal:N[:d], young:N, dyadic:N, fibonacci:N, chain:N, op:N, up:N,
// tree:q:N (pascalization of T_{q+1}), line:N (pascalization of Z), or a
// path to a graph JSON document (optionally prefixed by file:).
inline GradedGraph make_graph(const std::string& spec) {
  if (spec.starts_with("file:")) return graph_from_json(read_json_file(spec.substr(5)));
  if (spec.ends_with(".json")) return graph_from_json(read_json_file(spec));
  const auto parts = split(spec, ':');
  const std::string& name = parts[0];
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) throw invalid_argument("graph spec '" + spec + "' lacks a parameter");
    return parse_size(parts[i], "graph spec '" + spec + "'");
  };
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo + 1 || parts.size() > hi + 1)
      throw invalid_argument("graph spec '" + spec + "' has the wrong number of parameters");
  };
  if (name == "pascal") {
    arity(1, 2);
    return pascal(parts.size() == 3 ? arg(2) : 1, arg(1));
  }
  if (name == "tree") {
    arity(2, 2);
    return pascalization(tree_base(static_cast<long>(arg(1))), arg(2));
  }
  arity(1, 1);
  const std::size_t n = arg(1);
  if (name == "young") return young(n);
  if (name == "dyadic") return dyadic(n);
  if (name == "fibonacci") return fibonacci(n);
  if (name == "chain") return chain(n);
  if (name == "op") return ordered_pairs(n);
  if (name == "up") return unordered_pairs(n);
  if (name == "line") return pascalization(chain_base(), n);
  throw invalid_argument("unknown graph kind '" + name + "'");
}

template <Scalar S>
Matrix<S> two_state(const S& a, const S& b, const S& c, const S& d) {
  Matrix<S> m(2, 2, S(0));
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

// Masses dim(λ)²/n! on the Young graph.
template <Scalar S>
MarkovMeasure<S> plancherel_measure(const GraphPtr& g) {
  if (g->kind() != "young") throw invalid_argument("plancherel measure needs the Young graph");
  return measure_from_rule<S>(g, [&](VertexId u, const OutEdge& o) {
    const Partition& from = g->label(u);
    const Partition& to = g->label({u.level + 1, o.to});
    const auto probs = plancherel_transitions<S>(from);
    std::size_t row = 0;
    while (row < from.size() && to[row] == from[row]) ++row;
    return probs.at(row);
  });
}

// central, bernoulli:p, flip:p ([[p,1-p],[1-p,p]] on dyadic, uniform start),
// chain-bernoulli:p ([[p,1-p],[p,1-p]]), markov:a,b,c,d (row-major 2×2),
// mixture:w@p,w@p (Bernoulli mixture), plancherel, tree:r[:w0,w1,..],
// multinomial:p0,p1,.., or a measure JSON document (its graph must agree).
template <Scalar S>
MarkovMeasure<S> make_measure(const GraphPtr& g, const std::string& spec) {
  auto scalar = [](const std::string& s) { return from_rational<S>(parse_rational(s)); };
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto need = [&] {
    if (rest.empty()) throw invalid_argument("measure spec '" + spec + "' lacks a parameter");
  };
  if (name == "file" || spec.ends_with(".json")) {
    auto mu = measure_from_json<S>(read_json_file(name == "file" ? rest : spec));
    if (graph_to_json(mu.graph()) != graph_to_json(*g))
      throw Error("domain_mismatch", "measure document is defined on a different graph");
    return MarkovMeasure<S>(g, mu.table());
  }
  if (name == "central") {
    const auto eq = central_equipment<S>(g);
    std::vector<std::vector<S>> masses(g->depth() + 1);
    // Uniform on the top level, pushed down by the central cotransitions.
    const std::size_t top = g->depth();
    BigInt total(0);
    for (std::size_t v = 0; v < g->level_size(top); ++v) total += g->dim({top, v});
    masses[top].resize(g->level_size(top));
    for (std::size_t v = 0; v < g->level_size(top); ++v)
      masses[top][v] = from_rational<S>(Rational(g->dim({top, v}), total));
    for (std::size_t n = top; n-- > 0;) {
      masses[n].assign(g->level_size(n), S(0));
      for (std::size_t v = 0; v < g->level_size(n + 1); ++v) {
        const auto in = g->in_edges({n + 1, v});
        for (std::size_t s = 0; s < in.size(); ++s) masses[n][in[s].from] += masses[n + 1][v] * eq.bundle_weights({n + 1, v})[s];
      }
    }
    return measure_from_masses(eq, masses);
  }
  if (name == "bernoulli") {
    need();
    return bernoulli_measure<S>(g, scalar(rest));
  }
  if (name == "flip" || name == "chain-bernoulli") {
    need();
    const S p = scalar(rest), q = S(S(1) - p);
    const Matrix<S> m = name == "flip" ? two_state(p, q, q, p) : two_state(p, q, p, q);
    const S half = S(1) / S(2);
    return markov_chain_measure<S>(g, {half, half}, m);
  }
  if (name == "markov") {
    const auto v = split(rest, ',');
    if (v.size() != 4) throw invalid_argument("markov measure needs four entries a,b,c,d");
    const S half = S(1) / S(2);
    return markov_chain_measure<S>(g, {half, half}, two_state(scalar(v[0]), scalar(v[1]), scalar(v[2]), scalar(v[3])));
  }
  if (name == "multinomial") {
    need();
    std::vector<S> p;
    for (const auto& x : split(rest, ',')) p.push_back(scalar(x));
    return multinomial_measure<S>(g, p);
  }
  if (name == "mixture") {
    need();
    std::vector<MarkovMeasure<S>> parts;
    std::vector<S> weights;
    for (const auto& item : split(rest, ',')) {
      const auto at = item.find('@');
      if (at == std::string::npos) throw invalid_argument("mixture items are weight@p");
      weights.push_back(scalar(item.substr(0, at)));
      parts.push_back(bernoulli_measure<S>(g, scalar(item.substr(at + 1))));
    }
    return mixture(parts, weights);
  }
  if (name == "plancherel") return plancherel_measure<S>(g);
  if (name == "tree") {
    need();
    const auto v = split(rest, ':');
    TreeBoundaryParam<S> param;
    const std::string prefix = "pascalization:tree";
    if (!g->kind().starts_with(prefix)) throw invalid_argument("tree measure needs a tree:q:N graph");
    param.q = std::stol(g->kind().substr(prefix.size())) - 1;
    param.r = scalar(v[0]);
    if (v.size() > 1)
      for (const auto& x : split(v[1], ',')) param.omega.push_back(static_cast<long>(parse_size(x, "tree ray")));
    return tree_central_measure<S>(g, param);
  }
  throw invalid_argument("unknown measure kind '" + name + "'");
}

// Minimal SVG line plot; coordinates are printed with shortest round-trip
// formatting so the output is stable.
class SvgPlot {
 public:
  SvgPlot(std::string title, double x0, double x1, double y0, double y1)
      : title_(std::move(title)), x0_(x0), x1_(x1), y0_(y0), y1_(y1) {}

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double width = 1.5) {
    std::ostringstream s;
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << format_double(width)
      << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      s << (i ? " " : "") << format_double(px(pts[i].first)) << ',' << format_double(py(pts[i].second));
    s << "\"/>\n";
    body_ += s.str();
  }

  void legend(const std::string& text, const std::string& color) {
    const double y = 20.0 + 16.0 * static_cast<double>(legends_++);
    body_ += "<text x=\"" + format_double(kW - 180) + "\" y=\"" + format_double(y + 30) + "\" fill=\"" + color +
             "\" font-size=\"12\">" + text + "</text>\n";
  }

  std::string str() const {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title_ << "</text>\n";
    s << "<rect x=\"" << kM << "\" y=\"" << kM << "\" width=\"" << kW - 2 * kM << "\" height=\"" << kH - 2 * kM
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << kM << "\" y=\"" << kH - kM + 16 << "\" font-size=\"11\">" << format_double(x0_) << "</text>\n";
    s << "<text x=\"" << kW - kM << "\" y=\"" << kH - kM + 16 << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(x1_) << "</text>\n";
    s << "<text x=\"" << kM - 4 << "\" y=\"" << kH - kM << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(y0_) << "</text>\n";
    s << "<text x=\"" << kM - 4 << "\" y=\"" << kM + 10 << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(y1_) << "</text>\n";
    s << body_ << "</svg>\n";
    return s.str();
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("io_error", "cannot write '" + path + "'");
    out << str();
  }

 private:
  static constexpr int kW = 640, kH = 480, kM = 50;
  double px(double x) const { return kM + (x - x0_) / (x1_ - x0_) * (kW - 2 * kM); }
  double py(double y) const { return kH - kM - (y - y0_) / (y1_ - y0_) * (kH - 2 * kM); }

  std::string title_;
  double x0_, x1_, y0_, y1_;
  std::string body_;
  int legends_ = 0;
};

}  // namespace bratteli::cli
