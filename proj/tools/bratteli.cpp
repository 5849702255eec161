// bratteli: command-line front end for the graded-graph library.
//
//   bratteli graph build --graph pascal:6
//   bratteli standardness scan --graph dyadic:13 --measure flip:7/10 --levels 10 --mode strong
//   bratteli boundary shape --model plancherel --n 4000 --samples 50 --seed 1 --svg shape.svg
//
// Every subcommand accepts --dry-run, --out and --config (TOML; unknown keys
// are errors). Failures print {"error": kind, "message": ...} on stderr.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bratteli/adic.hpp"
#include "bratteli/boundary.hpp"
#include "bratteli/entropy.hpp"
#include "bratteli/io.hpp"
#include "bratteli/mm_space.hpp"
#include "bratteli/standardness.hpp"
#include "bratteli/telescope.hpp"
#include "cli_support.hpp"

using namespace bratteli;
using namespace bratteli::cli;

namespace {

struct Common {
  std::string out = "-";
  bool dry_run = false;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("io_error", "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Norm parse_norm(const std::string& s) {
  if (s == "l1") return Norm::l1;
  if (s == "euclidean" || s == "l2") return Norm::euclidean;
  if (s == "sup" || s == "linf") return Norm::sup;
  throw invalid_argument("unknown norm '" + s + "' (l1, euclidean, sup)");
}

std::string decimal(const Rational& q) { return format_double(to_double(q)); }

void dry_run_report(std::ostream& out, const std::string& command) {
  Json j;
  j["command"] = command;
  j["dry_run"] = true;
  j["valid"] = true;
  out << j.dump() << '\n';
}

// Syntactic validation of specs for --dry-run (files are read and checked).
void check_graph_spec(const std::string& spec) {
  if (spec.empty()) throw invalid_argument("--graph is required");
  if (spec.starts_with("file:") || spec.ends_with(".json")) {
    (void)make_graph(spec);
    return;
  }
  const auto parts = split(spec, ':');
  static const std::vector<std::string> known{"pascal", "young", "dyadic", "fibonacci", "chain",
                                              "op",     "up",    "line",   "tree"};
  if (std::find(known.begin(), known.end(), parts[0]) == known.end())
    throw invalid_argument("unknown graph kind '" + parts[0] + "'");
  const std::size_t want_lo = parts[0] == "tree" ? 3 : 2, want_hi = parts[0] == "pascal" || parts[0] == "tree" ? 3 : 2;
  if (parts.size() < want_lo || parts.size() > want_hi)
    throw invalid_argument("graph spec '" + spec + "' has the wrong number of parameters");
  for (std::size_t i = 1; i < parts.size(); ++i) (void)parse_size(parts[i], "graph spec '" + spec + "'");
}

void check_measure_spec(const std::string& spec) {
  if (spec.empty()) throw invalid_argument("--measure is required");
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  static const std::vector<std::string> known{"central", "bernoulli", "flip",       "chain-bernoulli", "markov",
                                              "mixture", "plancherel", "tree",      "multinomial",     "file"};
  if (spec.ends_with(".json")) return;
  if (std::find(known.begin(), known.end(), name) == known.end())
    throw invalid_argument("unknown measure kind '" + name + "'");
  if (name == "file" || name == "central" || name == "plancherel") return;
  if (rest.empty()) throw invalid_argument("measure spec '" + spec + "' lacks a parameter");
  for (const auto& item : split(rest, ',')) {
    if (name == "mixture") {
      const auto at = item.find('@');
      if (at == std::string::npos) throw invalid_argument("mixture items are weight@p");
      (void)parse_rational(item.substr(0, at));
      (void)parse_rational(item.substr(at + 1));
    } else if (name != "tree") {
      (void)parse_rational(item);
    }
  }
  if (name == "tree") (void)parse_rational(split(rest, ':')[0]);
}

struct Command {
  CLI::App* app;
  std::string name;
  std::function<void()> validate;
  std::function<void(std::ostream&)> run;
  Common* common;
};

class Tool {
 public:
  Tool() : app_("Graded graphs, central measures, adic dynamics and standardness of filtrations", "bratteli") {
    app_.allow_config_extras(CLI::config_extras_mode::error);
    app_.set_config("--config", "", "TOML configuration file (keys are option names)");
    app_.require_subcommand(1);
    build();
  }

  int main(int argc, char** argv) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app_.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app_.exit(e);
    } catch (const CLI::ParseError& e) {
      report("usage", e.what());
      return 2;
    }
    for (auto& c : commands_) {
      if (!c.app->parsed()) continue;
      try {
        c.validate();
        Output out(c.common->out);
        if (c.common->dry_run)
          dry_run_report(out.stream(), c.name);
        else
          c.run(out.stream());
        out.stream().flush();
        return 0;
      } catch (const Error& e) {
        report(e.kind(), e.what());
        return 1;
      } catch (const std::exception& e) {
        report("internal_error", e.what());
        return 3;
      }
    }
    report("usage", "no subcommand selected");
    return 2;
  }

 private:
  static void report(const std::string& kind, const std::string& message) {
    Json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
  }

  CLI::App* group(const std::string& name, const std::string& help) {
    auto* g = app_.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  }

  Common& add(CLI::App* parent, const std::string& name, const std::string& help, CLI::App** sub) {
    *sub = parent->add_subcommand(name, help);
    commons_.push_back(std::make_unique<Common>());
    Common& c = *commons_.back();
    (*sub)->add_option("--out,-o", c.out, "output file ('-' for stdout)");
    (*sub)->add_flag("--dry-run", c.dry_run, "validate the configuration without computing");
    return c;
  }

  void command(CLI::App* sub, Common& c, std::function<void()> validate, std::function<void(std::ostream&)> run) {
    commands_.push_back({sub, sub->get_parent()->get_name() + " " + sub->get_name(), std::move(validate),
                         std::move(run), &c});
  }

  void build() {
    build_graph();
    build_measure();
    build_adic();
    build_standardness();
    build_boundary();
    build_mm();
  }

  // graph build|inspect|telescope
  void build_graph() {
    auto* g = group("graph", "construct and inspect graded graphs");
    {
      CLI::App* s;
      auto& c = add(g, "build", "write a graph as JSON", &s);
      auto spec = std::make_shared<std::string>();
      s->add_option("--graph,-g", *spec, "graph spec, e.g. pascal:6, young:5, tree:2:4, file.json")->required();
      command(s, c, [spec] { check_graph_spec(*spec); },
              [spec](std::ostream& out) { out << graph_to_json(make_graph(*spec)).dump(1) << '\n'; });
    }
    {
      CLI::App* s;
      auto& c = add(g, "inspect", "per-level vertex, edge and dimension summary (CSV)", &s);
      auto spec = std::make_shared<std::string>();
      s->add_option("--graph,-g", *spec, "graph spec")->required();
      command(s, c, [spec] { check_graph_spec(*spec); },
              [spec](std::ostream& out) {
                const GradedGraph gr = make_graph(*spec);
                out << "level,vertices,edge_bundles,edges,total_dim\n";
                for (std::size_t n = 0; n <= gr.depth(); ++n) {
                  std::size_t bundles = 0;
                  BigInt edges(0), dims(0);
                  for (std::size_t v = 0; v < gr.level_size(n); ++v) {
                    for (const auto& e : gr.in_edges({n, v})) {
                      ++bundles;
                      edges += e.mult;
                    }
                    dims += gr.dim({n, v});
                  }
                  out << n << ',' << gr.level_size(n) << ',' << bundles << ',' << to_string(edges) << ','
                      << to_string(dims) << '\n';
                }
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "telescope", "keep the listed levels, merging paths between them", &s);
      auto spec = std::make_shared<std::string>();
      auto levels = std::make_shared<std::string>();
      s->add_option("--graph,-g", *spec, "graph spec")->required();
      s->add_option("--levels", *levels, "increasing level list starting at 0, e.g. 0,1,3,7")->required();
      command(s, c, [=] {
                check_graph_spec(*spec);
                (void)parse_sizes(*levels, "--levels");
              },
              [=](std::ostream& out) {
                out << graph_to_json(telescope(make_graph(*spec), parse_sizes(*levels, "--levels"))).dump(1) << '\n';
              });
    }
  }

  struct MeasureArgs {
    std::string graph, measure;
  };

  static void measure_options(CLI::App* s, MeasureArgs& a) {
    s->add_option("--graph,-g", a.graph, "graph spec")->required();
    s->add_option("--measure", a.measure,
                  "measure spec: central, bernoulli:p, flip:p, chain-bernoulli:p, markov:a,b,c,d, "
                  "mixture:w@p,..., plancherel, tree:r[:ray], multinomial:p0,..., file.json")
        ->required();
  }

  static void check(const MeasureArgs& a) {
    check_graph_spec(a.graph);
    check_measure_spec(a.measure);
  }

  // measure check|project|extremality
  void build_measure() {
    auto* g = group("measure", "Markov measures: centrality, projections, extremality");
    {
      CLI::App* s;
      auto& c = add(g, "check", "centrality report and extremality statistic over a range of m (CSV m,statistic)", &s);
      auto a = std::make_shared<MeasureArgs>();
      auto m_list = std::make_shared<std::string>("2..8");
      auto eps = std::make_shared<std::string>("1/10");
      auto norm = std::make_shared<std::string>("euclidean");
      auto format = std::make_shared<std::string>("csv");
      auto n = std::make_shared<std::size_t>(1);
      measure_options(s, *a);
      s->add_option("--n", *n, "projection level n");
      s->add_option("--m-list", *m_list, "levels m, e.g. 20..200:20 or 10,20,40");
      s->add_option("--eps", *eps, "neighbourhood radius");
      s->add_option("--norm", *norm, "l1, euclidean or sup");
      s->add_option("--format", *format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
      command(s, c, [=] {
                check(*a);
                (void)parse_sizes(*m_list, "--m-list");
                (void)parse_rational(*eps);
                (void)parse_norm(*norm);
              },
              [=](std::ostream& out) {
                const GraphPtr gr = share(make_graph(a->graph));
                const auto mu = make_measure<Rational>(gr, a->measure);
                const auto eq = central_equipment<Rational>(gr);
                const auto rep = is_central(mu, gr->depth());
                const auto ms = parse_sizes(*m_list, "--m-list");
                const Rational e = parse_rational(*eps);
                std::vector<Rational> stats;
                for (auto m : ms) stats.push_back(extremality_statistic(eq, mu, *n, m, e, parse_norm(*norm)));
                if (*format == "json") {
                  Json j;
                  j["central"] = rep.central;
                  j["deviation"] = to_string(rep.deviation);
                  Json rows = Json::array();
                  for (std::size_t i = 0; i < ms.size(); ++i)
                    rows.push_back({{"m", ms[i]}, {"statistic", decimal(stats[i])}, {"exact", to_string(stats[i])}});
                  j["rows"] = rows;
                  out << j.dump(1) << '\n';
                  return;
                }
                out << "m,statistic\n";
                for (std::size_t i = 0; i < ms.size(); ++i) out << ms[i] << ',' << decimal(stats[i]) << '\n';
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "project", "level distribution, or the projection of one vertex onto a lower level (CSV)", &s);
      auto a = std::make_shared<MeasureArgs>();
      auto level = std::make_shared<std::size_t>(1);
      auto from = std::make_shared<long>(-1);
      auto vertex = std::make_shared<std::size_t>(0);
      measure_options(s, *a);
      s->add_option("--level", *level, "target level n");
      s->add_option("--from", *from, "source level m of a vertex projection (omit for the level distribution)");
      s->add_option("--vertex", *vertex, "source vertex index at level m");
      command(s, c, [=] { check(*a); },
              [=](std::ostream& out) {
                const GraphPtr gr = share(make_graph(a->graph));
                const auto mu = make_measure<Rational>(gr, a->measure);
                std::vector<Rational> p;
                if (*from < 0) {
                  p = level_projection(mu, *level).probabilities;
                } else {
                  const auto eq = cotransitions_of(mu);
                  p = vertex_projection(eq, {static_cast<std::size_t>(*from), *vertex}, *level).probabilities;
                }
                out << "vertex,label,probability,exact\n";
                for (std::size_t v = 0; v < p.size(); ++v) {
                  std::string label;
                  for (long x : gr->label({*level, v})) label += (label.empty() ? "" : " ") + std::to_string(x);
                  out << v << ",\"" << label << "\"," << decimal(p[v]) << ',' << to_string(p[v]) << '\n';
                }
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "extremality", "one extremality statistic at (n, m, eps) (CSV)", &s);
      auto a = std::make_shared<MeasureArgs>();
      auto n = std::make_shared<std::size_t>(1);
      auto m = std::make_shared<std::size_t>(0);
      auto eps = std::make_shared<std::string>("1/10");
      auto norm = std::make_shared<std::string>("euclidean");
      measure_options(s, *a);
      s->add_option("--n", *n, "projection level");
      s->add_option("--m", *m, "source level (default: graph depth)");
      s->add_option("--eps", *eps, "neighbourhood radius");
      s->add_option("--norm", *norm, "l1, euclidean or sup");
      command(s, c, [=] {
                check(*a);
                (void)parse_rational(*eps);
                (void)parse_norm(*norm);
              },
              [=](std::ostream& out) {
                const GraphPtr gr = share(make_graph(a->graph));
                const auto mu = make_measure<Rational>(gr, a->measure);
                const std::size_t top = *m ? *m : gr->depth();
                const Rational r = extremality_statistic(central_equipment<Rational>(gr), mu, *n, top,
                                                         parse_rational(*eps), parse_norm(*norm));
                out << "n,m,eps,statistic,exact\n"
                    << *n << ',' << top << ',' << *eps << ',' << decimal(r) << ',' << to_string(r) << '\n';
              });
    }
  }

  static AdicOrder make_order(const GraphPtr& g, const std::string& name) {
    if (name == "lex") return AdicOrder::by_predecessor(g);
    if (name == "morse") return AdicOrder::morse(g);
    throw invalid_argument("unknown adic order '" + name + "' (lex, morse)");
  }

  static bool digit_graph(const GradedGraph& g) { return g.kind() == "pascal" || g.kind() == "dyadic"; }

  static std::string path_text(const GradedGraph& g, const PathPrefix& p) {
    std::string s;
    if (digit_graph(g)) {
      for (int d : digits_of(g, p)) s += std::to_string(d);
      return s;
    }
    for (std::size_t k = 1; k <= p.length(); ++k) s += (k > 1 ? "," : "") + std::to_string(p.vertex_at(k));
    return s;
  }

  // adic orbit|invariance|takagi
  void build_adic() {
    auto* g = group("adic", "adic transformation, invariance and the Takagi function");
    {
      CLI::App* s;
      auto& c = add(g, "orbit", "iterate the adic map from a start path; one path per line", &s);
      auto spec = std::make_shared<std::string>();
      auto start = std::make_shared<std::string>();
      auto tail = std::make_shared<std::string>("minimal");
      auto order = std::make_shared<std::string>("lex");
      auto steps = std::make_shared<long>(1);
      s->add_option("--graph,-g", *spec, "graph spec")->required();
      s->add_option("--start", *start,
                    "start prefix: digits (dyadic/pascal, e.g. 0110) or comma-separated vertex indices")
          ->required();
      s->add_option("--tail", *tail, "minimal, explicit or periodic:<digits>");
      s->add_option("--order", *order, "lex or morse");
      s->add_option("--steps", *steps, "number of steps (negative: backwards)");
      command(s, c, [=] {
                check_graph_spec(*spec);
                if (*tail != "minimal" && *tail != "explicit" && !tail->starts_with("periodic:"))
                  throw invalid_argument("unknown tail '" + *tail + "'");
              },
              [=](std::ostream& out) {
                const GraphPtr gr = share(make_graph(*spec));
                const AdicOrder ord = make_order(gr, *order);
                InfinitePath x;
                if (digit_graph(*gr)) {
                  std::vector<int> digits;
                  for (char ch : *start) {
                    if (ch < '0' || ch > '9') throw invalid_argument("start digits must be 0-9");
                    digits.push_back(ch - '0');
                  }
                  x.prefix = path_from_digits(*gr, digits);
                } else {
                  x.prefix = path_through(*gr, parse_sizes(*start, "--start"));
                }
                if (*tail == "minimal") {
                  x.tail = AllMinimalTail{};
                } else if (*tail == "explicit") {
                  x.tail = ExplicitTail{};
                } else {
                  if (!digit_graph(*gr)) throw invalid_argument("periodic tails need a dyadic or pascal graph");
                  std::vector<int> pattern;
                  for (char ch : tail->substr(9)) pattern.push_back(ch - '0');
                  x.tail = periodic_digits(*gr, x.prefix.length(), x.prefix.end().index, pattern);
                }
                for (const auto& y : orbit(ord, x, *steps)) out << path_text(*gr, y.prefix) << '\n';
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "invariance", "largest mass change of cylinders under the adic map (CSV)", &s);
      auto a = std::make_shared<MeasureArgs>();
      auto rank = std::make_shared<std::size_t>(6);
      auto order = std::make_shared<std::string>("lex");
      measure_options(s, *a);
      s->add_option("--rank", *rank, "largest cylinder rank");
      s->add_option("--order", *order, "lex or morse");
      command(s, c, [=] { check(*a); },
              [=](std::ostream& out) {
                const GraphPtr gr = share(make_graph(a->graph));
                const auto mu = make_measure<Rational>(gr, a->measure);
                const Rational d = invariance_check(make_order(gr, *order), mu, *rank);
                out << "rank,discrepancy,exact\n" << *rank << ',' << decimal(d) << ',' << to_string(d) << '\n';
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "takagi", "Takagi function on an even grid (CSV x,T(x); optional SVG)", &s);
      auto samples = std::make_shared<std::size_t>(256);
      auto terms = std::make_shared<std::size_t>(53);
      auto svg = std::make_shared<std::string>();
      s->add_option("--samples", *samples, "grid intervals on [0,1]");
      s->add_option("--terms", *terms, "series terms");
      s->add_option("--svg", *svg, "SVG output path");
      command(s, c, [=] {
                if (*samples == 0) throw invalid_argument("--samples must be >= 1");
              },
              [=](std::ostream& out) {
                out << "x,T(x)\n";
                std::vector<std::pair<double, double>> pts;
                for (std::size_t k = 0; k <= *samples; ++k) {
                  const Rational x(static_cast<long>(k), static_cast<long>(*samples));
                  const Rational t = takagi<Rational>(Rational(x), *terms);
                  pts.push_back({to_double(x), to_double(t)});
                  out << format_double(to_double(x)) << ',' << format_double(to_double(t)) << '\n';
                }
                if (!svg->empty()) {
                  SvgPlot plot("Takagi function", 0, 1, 0, 0.7);
                  plot.polyline(pts, "steelblue");
                  plot.save(*svg);
                }
              });
    }
  }

  // standardness scan
  void build_standardness() {
    auto* g = group("standardness", "weak and strong standardness scans of the tail filtration");
    CLI::App* s;
    auto& c = add(g, "scan", "rho_n (weak) or rho-bar_n (strong) for n = 0..N (CSV n,value,verdict)", &s);
    auto a = std::make_shared<MeasureArgs>();
    auto levels = std::make_shared<std::size_t>(5);
    auto mode = std::make_shared<std::string>("weak");
    auto base = std::make_shared<std::size_t>(1);
    auto tol = std::make_shared<double>(1e-3);
    auto leaf = std::make_shared<std::string>("path_sup");
    auto pair = std::make_shared<std::string>();
    auto lacunary = std::make_shared<std::size_t>(0);
    auto threshold = std::make_shared<double>(0.05);
    measure_options(s, *a);
    s->add_option("--levels,-N", *levels, "number of scanned levels N");
    s->add_option("--mode", *mode, "weak or strong")->check(CLI::IsMember({"weak", "strong"}));
    s->add_option("--base", *base, "graph level carrying rho_0");
    s->add_option("--tol", *tol, "verdict threshold");
    s->add_option("--leaf", *leaf, "strong-scan leaf cost: path_sup or base")->check(CLI::IsMember({"path_sup", "base"}));
    s->add_option("--pair", *pair, "also print the distance between vertices a,b of each level");
    s->add_option("--lacunary", *lacunary,
                  "strong mode: search doubling-gap telescopings with base gap up to this value");
    s->add_option("--threshold", *threshold, "lacunary search target");
    command(s, c, [=] {
              check(*a);
              if (!pair->empty() && parse_sizes(*pair, "--pair").size() != 2)
                throw invalid_argument("--pair takes two vertex indices");
              if (*lacunary && *mode != "strong") throw invalid_argument("--lacunary needs --mode strong");
            },
            [=](std::ostream& out) {
              if (*lacunary) {
                const std::string gspec = a->graph;
                const auto name = split(gspec, ':')[0];
                auto make = [&](std::size_t depth) {
                  std::string spec = name == "pascal" && split(gspec, ':').size() == 3
                                         ? "pascal:" + std::to_string(depth) + ":" + split(gspec, ':')[2]
                                         : name + ":" + std::to_string(depth);
                  return make_measure<Rational>(share(make_graph(spec)), a->measure);
                };
                const auto r = lacunary_search<Rational>(make, *base, *levels, *threshold, *lacunary);
                out << "base_gap,k,graph_level,value,exact,found\n";
                for (std::size_t k = 0; k < r.values.size(); ++k)
                  out << r.base_gap << ',' << k + 1 << ',' << r.indices[*base + k + 1] << ',' << decimal(r.values[k])
                      << ',' << to_string(r.values[k]) << ',' << (r.found && r.hit == k + 1 ? "hit" : "") << '\n';
                return;
              }
              const GraphPtr gr = share(make_graph(a->graph));
              const auto mu = make_measure<Rational>(gr, a->measure);
              const auto eq = cotransitions_of(mu);
              ScanOptions opt;
              opt.base = *base;
              opt.tol = *tol;
              LeafCost<Rational> lc;
              if (*leaf == "base") lc.mode = LeafCost<Rational>::Mode::base_coordinate;
              const auto r = *mode == "weak" ? weak_standardness_scan(eq, mu, *levels, opt)
                                             : standardness_scan(eq, mu, *levels, opt, lc);
              std::vector<std::size_t> ab;
              if (!pair->empty()) ab = parse_sizes(*pair, "--pair");
              out << "n,value,exact," << (ab.empty() ? "" : "pair,pair_exact,") << "verdict\n";
              for (std::size_t n = 0; n < r.values.size(); ++n) {
                out << n << ',' << decimal(r.values[n]) << ',' << to_string(r.values[n]) << ',';
                if (!ab.empty()) {
                  const auto& m = r.pairwise[n];
                  if (ab[0] >= m.rows() || ab[1] >= m.rows())
                    throw Error("unknown_vertex", "--pair index outside level " + std::to_string(*base + n));
                  out << decimal(m(ab[0], ab[1])) << ',' << to_string(m(ab[0], ab[1])) << ',';
                }
                out << r.verdict << '\n';
              }
            });
  }

  // boundary pascal|shape|entropy|tree|character
  void build_boundary() {
    auto* g = group("boundary", "boundary examples: Pascal, Young limit shapes, entropy, tree, Thoma characters");
    {
      CLI::App* s;
      auto& c = add(g, "pascal", "centrality and extremality of Bernoulli measures and mixtures (CSV)", &s);
      auto grid = std::make_shared<std::string>("1/4,1/2,3/4");
      auto mixtures = std::make_shared<std::string>();
      auto levels = std::make_shared<std::size_t>(6);
      auto m_list = std::make_shared<std::string>("50,100,200,400");
      auto eps = std::make_shared<std::string>("1/10");
      auto norm = std::make_shared<std::string>("euclidean");
      s->add_option("--p-grid", *grid, "Bernoulli parameters");
      s->add_option("--mixture", *mixtures, "mixtures w@p,w@p; several separated by ';'");
      s->add_option("--levels", *levels, "levels checked for centrality");
      s->add_option("--m-list", *m_list, "levels m of the statistic");
      s->add_option("--eps", *eps, "neighbourhood radius");
      s->add_option("--norm", *norm, "l1, euclidean or sup");
      auto mixes = [mixtures] {
        std::vector<std::vector<std::pair<Rational, Rational>>> out;
        if (mixtures->empty()) return out;
        for (const auto& mix : split(*mixtures, ';')) {
          std::vector<std::pair<Rational, Rational>> parts;
          for (const auto& item : split(mix, ',')) {
            const auto at = item.find('@');
            if (at == std::string::npos) throw invalid_argument("mixture items are weight@p");
            parts.push_back({parse_rational(item.substr(0, at)), parse_rational(item.substr(at + 1))});
          }
          out.push_back(std::move(parts));
        }
        return out;
      };
      command(s, c, [=] {
                (void)parse_rationals(*grid);
                (void)mixes();
                (void)parse_sizes(*m_list, "--m-list");
                (void)parse_rational(*eps);
                (void)parse_norm(*norm);
              },
              [=](std::ostream& out) {
                const auto rows = pascal_boundary_check(parse_rationals(*grid), *levels, parse_sizes(*m_list, "--m-list"),
                                                        parse_rational(*eps), mixes(), parse_norm(*norm));
                out << "measure,central,deviation,m,statistic,exact\n";
                for (const auto& r : rows)
                  for (const auto& [m, v] : r.statistic)
                    out << '"' << r.measure << "\"," << (r.central ? "true" : "false") << ',' << decimal(r.deviation)
                        << ',' << m << ',' << decimal(v) << ',' << to_string(v) << '\n';
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "shape", "limit shapes of Plancherel or uniform random partitions (CSV + SVG)", &s);
      auto model = std::make_shared<std::string>("plancherel");
      auto n = std::make_shared<long>(1000);
      auto samples = std::make_shared<std::size_t>(1);
      auto seed = std::make_shared<std::uint64_t>(1);
      auto points = std::make_shared<std::size_t>(601);
      auto svg = std::make_shared<std::string>();
      auto format = std::make_shared<std::string>("csv");
      s->add_option("--model", *model, "plancherel or uniform")->check(CLI::IsMember({"plancherel", "uniform"}));
      s->add_option("--n", *n, "partition size");
      s->add_option("--samples", *samples, "number of samples (profiles are averaged)");
      s->add_option("--seed", *seed, "seed; sample i uses generator (seed, i)")->required();
      s->add_option("--points", *points, "grid points of the emitted profile");
      s->add_option("--svg", *svg, "SVG output path");
      s->add_option("--format", *format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
      command(s, c, [=] {
                if (*n < 1) throw invalid_argument("--n must be >= 1");
                if (*samples < 1) throw invalid_argument("--samples must be >= 1");
                if (*points < 2) throw invalid_argument("--points must be >= 2");
              },
              [=](std::ostream& out) { shape(out, *model, *n, *samples, *seed, *points, *svg, *format); });
    }
    {
      CLI::App* s;
      auto& c = add(g, "entropy", "entropy of the Plancherel measure on partitions of n (CSV)", &s);
      auto from = std::make_shared<long>(2);
      auto to = std::make_shared<long>(36);
      s->add_option("--from", *from, "first n");
      s->add_option("--to", *to, "last n");
      command(s, c, [=] {
                if (*from < 0 || *to < *from) throw invalid_argument("need 0 <= from <= to");
                if (*to > kMaxEntropyLevel)
                  throw resource_limit("entropy level above " + std::to_string(kMaxEntropyLevel));
              },
              [=](std::ostream& out) {
                out << "n,entropy,ratio\n";
                for (const auto& r : plancherel_entropy_table(*from, *to))
                  out << r.n << ',' << r.entropy.str(30) << ',' << format_double(r.ratio) << '\n';
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "tree", "tree-boundary phase-transition table (CSV r,m,statistic)", &s);
      auto q = std::make_shared<long>(2);
      auto r_list = std::make_shared<std::string>("3/10,1/2,4/5");
      auto n = std::make_shared<std::size_t>(1);
      auto m_list = std::make_shared<std::string>("20..200:20");
      auto eps = std::make_shared<std::string>("1/10");
      auto norm = std::make_shared<std::string>("euclidean");
      auto scalar = std::make_shared<std::string>("double");
      auto central = std::make_shared<std::size_t>(6);
      s->add_option("--q", *q, "tree branching (the tree is T_{q+1})");
      s->add_option("--r", *r_list, "values of r in (0,1)");
      s->add_option("--n", *n, "projection level");
      s->add_option("--m-list", *m_list, "levels m");
      s->add_option("--eps", *eps, "neighbourhood radius");
      s->add_option("--norm", *norm, "l1, euclidean or sup");
      s->add_option("--scalar", *scalar, "double or rational")->check(CLI::IsMember({"double", "rational"}));
      s->add_option("--central-levels", *central, "levels of the exact centrality check (0 to skip)");
      command(s, c, [=] {
                if (*q < 1) throw invalid_argument("--q must be >= 1");
                for (const auto& r : parse_rationals(*r_list))
                  if (r <= 0 || r >= 1) throw invalid_argument("r must lie strictly between 0 and 1");
                (void)parse_sizes(*m_list, "--m-list");
                (void)parse_rational(*eps);
                (void)parse_norm(*norm);
              },
              [=](std::ostream& out) {
                const auto rs = parse_rationals(*r_list);
                std::vector<std::string> central_flags;
                if (*central) {
                  const GraphPtr gr = share(pascalization(tree_base(*q), *central));
                  for (const auto& r : rs) {
                    TreeBoundaryParam<Rational> p{*q, {}, r};
                    central_flags.push_back(is_central(tree_central_measure(gr, p), *central).central ? "true"
                                                                                                        : "false");
                  }
                }
                const auto ms = parse_sizes(*m_list, "--m-list");
                out << "r,m,statistic" << (*central ? ",central" : "") << '\n';
                auto emit = [&](const auto& rows) {
                  for (std::size_t i = 0; i < rows.size(); ++i) {
                    out << format_double(to_double(rows[i].r)) << ',' << rows[i].m << ','
                        << format_double(to_double(rows[i].statistic));
                    if (*central) out << ',' << central_flags[i / ms.size()];
                    out << '\n';
                  }
                };
                if (*scalar == "double") {
                  std::vector<double> rd;
                  for (const auto& r : rs) rd.push_back(to_double(r));
                  emit(tree_phase_transition_scan<double>(*q, rd, *n, ms, to_double(parse_rational(*eps)),
                                                          parse_norm(*norm)));
                } else {
                  emit(tree_phase_transition_scan<Rational>(*q, rs, *n, ms, parse_rational(*eps), parse_norm(*norm)));
                }
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "character", "Monte Carlo Thoma character on one conjugacy class (CSV)", &s);
      auto alpha = std::make_shared<std::string>();
      auto beta = std::make_shared<std::string>();
      auto gamma = std::make_shared<std::string>("0");
      auto cycles = std::make_shared<std::string>("2");
      auto trials = std::make_shared<std::size_t>(100000);
      auto seed = std::make_shared<std::uint64_t>(1);
      auto exact = std::make_shared<bool>(false);
      s->add_option("--alpha", *alpha, "nonincreasing alpha parameters");
      s->add_option("--beta", *beta, "nonincreasing beta parameters");
      s->add_option("--gamma", *gamma, "gamma = 1 - sum(alpha) - sum(beta)");
      s->add_option("--cycle-type", *cycles, "cycle lengths of g, e.g. 2 or 3,2");
      s->add_option("--trials", *trials, "Monte Carlo trials");
      s->add_option("--seed", *seed, "seed; trial i uses generator (seed, i)")->required();
      s->add_flag("--exact", *exact, "also enumerate the exact value (small supports)");
      auto params = [=] {
        ThomaParams<Rational> p{parse_rationals(*alpha), parse_rationals(*beta), parse_rational(*gamma)};
        p.validate();
        return p;
      };
      command(s, c, [=] {
                (void)params();
                (void)parse_sizes(*cycles, "--cycle-type");
                if (*trials == 0) throw invalid_argument("--trials must be >= 1");
              },
              [=](std::ostream& out) {
                const auto p = params();
                const auto ct = parse_sizes(*cycles, "--cycle-type");
                const auto e = character_estimate(p, ct, *trials, *seed);
                out << "estimate,stderr,trials" << (*exact ? ",exact" : "") << '\n';
                out << format_double(e.estimate) << ',' << format_double(e.stderr_) << ',' << e.trials;
                if (*exact) out << ',' << to_string(character_exact(p, ct));
                out << '\n';
              });
    }
  }

  static void shape(std::ostream& out, const std::string& model, long n, std::size_t samples, std::uint64_t seed,
                    std::size_t points, const std::string& svg, const std::string& format) {
    std::vector<Partition> parts(samples);
    parallel_for(samples, [&](std::size_t i) {
      Rng rng(seed, i);
      parts[i] = model == "plancherel" ? plancherel_growth_sample(n, rng).shape : uniform_partition_sample(n, rng);
    });
    Json j;
    j["model"] = model;
    j["n"] = n;
    j["samples"] = samples;
    j["seed"] = seed;
    std::vector<std::pair<double, double>> sample_pts, ref_pts;
    std::ostringstream csv;
    double lo, hi;
    if (model == "plancherel") {
      std::vector<ShapeProfile> profiles;
      for (const auto& p : parts) profiles.push_back(rotated_profile(p));
      auto mean = [&](double s) {
        double t = 0;
        for (const auto& p : profiles) t += p(s);
        return t / static_cast<double>(profiles.size());
      };
      lo = -1.5;
      hi = 1.5;
      j["sup_distance"] = sup_distance_to_omega(mean, lo, hi, 3001);
      csv << "s,mean_profile,omega\n";
      for (std::size_t k = 0; k < points; ++k) {
        const double s = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
        sample_pts.push_back({s, mean(s)});
        ref_pts.push_back({s, omega_curve(s)});
      }
    } else {
      std::vector<StaircaseProfile> profiles;
      Json d = Json::array();
      for (const auto& p : parts) {
        profiles.push_back(plain_profile(p));
        d.push_back(uniform_shape_distance(p));
      }
      j["sup_distance"] = d;
      lo = 0;
      hi = 4;
      csv << "x,mean_profile,reference\n";
      for (std::size_t k = 0; k < points; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
        double t = 0;
        for (const auto& p : profiles) t += p(x);
        sample_pts.push_back({x, t / static_cast<double>(profiles.size())});
        ref_pts.push_back({x, std::min(uniform_curve_y(x), 4.0)});
      }
    }
    for (std::size_t k = 0; k < points; ++k)
      csv << format_double(sample_pts[k].first) << ',' << format_double(sample_pts[k].second) << ','
          << format_double(ref_pts[k].second) << '\n';
    if (format == "json") {
      Json prof = Json::array();
      for (std::size_t k = 0; k < points; ++k)
        prof.push_back(Json::array({sample_pts[k].first, sample_pts[k].second, ref_pts[k].second}));
      j["profile"] = prof;
      out << j.dump(1) << '\n';
    } else {
      out << csv.str();
    }
    if (!svg.empty()) {
      SvgPlot plot(model == "plancherel" ? "Plancherel diagrams, rotated and scaled" : "Uniform partitions, scaled",
                   lo, hi, 0, model == "plancherel" ? 1.6 : 4.0);
      plot.polyline(ref_pts, "crimson", 1.0);
      plot.polyline(sample_pts, "steelblue");
      plot.legend(model == "plancherel" ? "reference: Omega" : "reference curve", "crimson");
      plot.legend("sample mean (n=" + std::to_string(n) + ")", "steelblue");
      plot.save(svg);
    }
  }

  // mm sample|reconstruct|compare
  void build_mm() {
    auto* g = group("mm", "matrix distributions of finite metric-measure spaces");
    {
      CLI::App* s;
      auto& c = add(g, "sample", "distance matrix of N random points of a space (CSV)", &s);
      auto space = std::make_shared<std::string>();
      auto n = std::make_shared<std::size_t>(100);
      auto seed = std::make_shared<std::uint64_t>(1);
      s->add_option("--space", *space, "space JSON {distances, weights}")->required();
      s->add_option("--n,-N", *n, "number of sample points");
      s->add_option("--seed", *seed, "seed")->required();
      command(s, c, [=] {
                (void)space_from_json<Rational>(read_json_file(*space));
                if (*n == 0) throw invalid_argument("--n must be >= 1");
              },
              [=](std::ostream& out) {
                const auto sp = space_from_json<Rational>(read_json_file(*space));
                write_matrix_csv<Rational>(out, matrix_distribution_sample(sp, *n, *seed));
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "reconstruct", "recover the space from a sampled distance matrix (JSON)", &s);
      auto matrix = std::make_shared<std::string>();
      s->add_option("--matrix", *matrix, "CSV distance matrix with header row")->required();
      command(s, c, [=] {
                if (!std::ifstream(*matrix)) throw Error("io_error", "cannot open '" + *matrix + "'");
              },
              [=](std::ostream& out) {
                std::ifstream in(*matrix);
                const auto r = reconstruct(read_matrix_csv<Rational>(in));
                Json j;
                j["points"] = r.space.size();
                j["ambiguous"] = r.ambiguous;
                j["space"] = space_to_json(r.space);
                out << j.dump(1) << '\n';
              });
    }
    {
      CLI::App* s;
      auto& c = add(g, "compare", "measure-preserving isometry search between two spaces (JSON)", &s);
      auto a = std::make_shared<std::string>();
      auto b = std::make_shared<std::string>();
      auto dist_tol = std::make_shared<std::string>("0");
      auto weight_tol = std::make_shared<std::string>("0");
      auto merge = std::make_shared<bool>(false);
      s->add_option("--a", *a, "first space JSON")->required();
      s->add_option("--b", *b, "second space JSON")->required();
      s->add_option("--dist-tol", *dist_tol, "distance tolerance");
      s->add_option("--weight-tol", *weight_tol, "weight tolerance");
      s->add_flag("--purify", *merge, "merge points with identical distance columns first");
      command(s, c, [=] {
                (void)space_from_json<Rational>(read_json_file(*a));
                (void)space_from_json<Rational>(read_json_file(*b));
                (void)parse_rational(*dist_tol);
                (void)parse_rational(*weight_tol);
              },
              [=](std::ostream& out) {
                auto sa = space_from_json<Rational>(read_json_file(*a));
                auto sb = space_from_json<Rational>(read_json_file(*b));
                Json j;
                j["a_pure"] = sa.pure();
                j["b_pure"] = sb.pure();
                if (*merge) {
                  sa = purify(sa).first;
                  sb = purify(sb).first;
                }
                std::vector<std::size_t> map;
                const bool eq = mm_equal(sa, sb, parse_rational(*dist_tol), parse_rational(*weight_tol), &map);
                j["equal"] = eq;
                j["map"] = eq ? Json(map) : Json(nullptr);
                out << j.dump(1) << '\n';
              });
    }
  }

  CLI::App app_;
  std::vector<std::unique_ptr<Common>> commons_;
  std::vector<Command> commands_;
};

}  // namespace

int main(int argc, char** argv) {
  Tool tool;
  return tool.main(argc, argv);
}
