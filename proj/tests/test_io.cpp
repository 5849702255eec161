#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "bratteli/builders.hpp"
#include "bratteli/io.hpp"
#include "bratteli/random.hpp"
#include "cli_support.hpp"

using namespace bratteli;

TEST(Io, GraphRoundTrip) {
  for (const GradedGraph& g : {young(5), pascal(2, 4), ordered_pairs(3), pascalization(tree_base(2), 3)}) {
    const Json j = graph_to_json(g);
    const GradedGraph back = graph_from_json(Json::parse(j.dump()));
    EXPECT_EQ(graph_to_json(back).dump(), j.dump());
    EXPECT_EQ(back.kind(), g.kind());
  }
  Json j = graph_to_json(pascal(1, 2));
  j["extra"] = 1;
  EXPECT_THROW(graph_from_json(j), Error);
  j.erase("extra");
  j.erase("kind");
  EXPECT_EQ(graph_from_json(j).kind(), "custom");
  j["edges"][0][0] = Json::array({0, 7, 1});
  EXPECT_THROW(graph_from_json(j), Error);
  EXPECT_THROW(graph_from_json(Json::array()), Error);
}

TEST(Io, MeasureRoundTripIsExact) {
  const GraphPtr g = share(pascal(1, 4));
  const auto mu = bernoulli_measure<Rational>(g, Rational(1, 3));
  const Json j = measure_to_json(mu);
  EXPECT_EQ(j["transitions"][0][0][0][1], "1/3");
  const auto back = measure_from_json<Rational>(Json::parse(j.dump()));
  for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(back.level_masses(n), mu.level_masses(n));
  const auto dbl = measure_from_json<double>(j);
  EXPECT_DOUBLE_EQ(dbl.level_masses(1)[pascal_index(1, 1)], 1.0 / 3);
  Json bad = j;
  bad["transitions"].erase(0);
  EXPECT_THROW(measure_from_json<Rational>(bad), Error);
}

TEST(Io, ScalarsAndSpaces) {
  EXPECT_EQ(scalar_from_json<Rational>(Json(0.1)), Rational(1, 10));
  EXPECT_EQ(scalar_from_json<Rational>(Json("3/6")), Rational(1, 2));
  EXPECT_EQ(scalar_from_json<Rational>(Json(4)), 4);
  EXPECT_THROW(scalar_from_json<Rational>(Json(true)), Error);
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(bigint_from_json(bigint_to_json(BigInt("123456789012345678901234567890"))),
            BigInt("123456789012345678901234567890"));

  const Json doc = Json::parse(R"({"distances": [[0, "1/2"], [0.5, 0]], "weights": ["1/3", "2/3"]})");
  const auto s = space_from_json<Rational>(doc);
  EXPECT_EQ(s.dist(0, 1), Rational(1, 2));
  EXPECT_EQ(space_to_json(s).dump(), R"({"distances":[["0","1/2"],["1/2","0"]],"weights":["1/3","2/3"]})");
  EXPECT_THROW(space_from_json<Rational>(Json::parse(R"({"distances": [[0, 1], [2, 0]], "weights": [0.5, 0.5]})")),
               Error);
}

TEST(Io, MatrixCsvRoundTrip) {
  Matrix<Rational> m(3, 3, Rational(0));
  m(0, 1) = m(1, 0) = Rational(1, 3);
  m(0, 2) = m(2, 0) = 1;
  m(1, 2) = m(2, 1) = Rational(2, 3);
  std::stringstream out;
  write_matrix_csv<Rational>(out, DistanceMatrix<Rational>(m));
  EXPECT_EQ(out.str(), "c0,c1,c2\n0,1/3,1\n1/3,0,2/3\n1,2/3,0\n");
  std::stringstream in(out.str());
  EXPECT_EQ(read_matrix_csv<Rational>(in).dense(), m);
  std::stringstream ragged("c0,c1\n0,1\n1\n");
  EXPECT_THROW(read_matrix_csv<Rational>(ragged), Error);
  std::stringstream dbl;
  write_matrix_csv<double>(dbl, Matrix<double>(1, 1, 0.25));
  EXPECT_EQ(dbl.str(), "c0\n0.25\n");
}

TEST(CliSpecs, ListsAndGraphs) {
  EXPECT_EQ(cli::parse_sizes("20..60:20,7", "m"), (std::vector<std::size_t>{20, 40, 60, 7}));
  EXPECT_THROW(cli::parse_size("-3", "n"), Error);
  EXPECT_THROW(cli::parse_sizes("1..4:0", "m"), Error);
  EXPECT_EQ(cli::parse_rationals("1/2,0.25"), (std::vector<Rational>{Rational(1, 2), Rational(1, 4)}));
  EXPECT_EQ(cli::make_graph("pascal:3").level_size(3), 4u);
  EXPECT_EQ(cli::make_graph("pascal:2:2").level_size(2), 6u);
  EXPECT_EQ(cli::make_graph("young:5").level_size(5), 7u);
  EXPECT_EQ(cli::make_graph("tree:2:2").kind(), "pascalization:tree3");
  EXPECT_THROW(cli::make_graph("nonsense:3"), Error);
  EXPECT_THROW(cli::make_graph("pascal"), Error);
  EXPECT_THROW(cli::make_graph("file:/nonexistent/graph.json"), Error);
}

TEST(CliSpecs, Measures) {
  const GraphPtr p = share(cli::make_graph("pascal:4"));
  EXPECT_EQ(cli::make_measure<Rational>(p, "bernoulli:1/4").level_masses(1)[pascal_index(1, 1)], Rational(1, 4));
  EXPECT_TRUE(is_central(cli::make_measure<Rational>(p, "central"), 4).central);
  EXPECT_TRUE(is_central(cli::make_measure<Rational>(p, "mixture:1/2@1/5,1/2@4/5"), 4).central);
  const GraphPtr d = share(cli::make_graph("dyadic:4"));
  EXPECT_FALSE(is_central(cli::make_measure<Rational>(d, "flip:7/10"), 4).central);
  const GraphPtr y = share(cli::make_graph("young:5"));
  const auto pl = cli::make_measure<Rational>(y, "plancherel");
  EXPECT_EQ(pl.level_masses(2)[0], Rational(1, 2));
  EXPECT_THROW(cli::make_measure<Rational>(p, "plancherel"), Error);
  EXPECT_THROW(cli::make_measure<Rational>(p, "bernoulli:3/2"), Error);
  const GraphPtr t = share(cli::make_graph("tree:2:3"));
  EXPECT_TRUE(is_central(cli::make_measure<Rational>(t, "tree:1/2"), 3).central);
}

TEST(Random, StreamsAreDeterministicAndIndependentOfWorkers) {
  Rng a(5, 3), b(5, 3), c(5, 4);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.below(7), 7u);
  }
  EXPECT_EQ(r.categorical({0.0, 1.0, 0.0}), 1u);

  auto run = [] {
    std::vector<std::uint64_t> out(257);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = Rng(9, i).next(); });
    return out;
  };
  setenv("BRATTELI_WORKERS", "1", 1);
  const auto serial = run();
  setenv("BRATTELI_WORKERS", "4", 1);
  EXPECT_EQ(run(), serial);
  unsetenv("BRATTELI_WORKERS");
}
