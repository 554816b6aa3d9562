#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cdi/error.hpp"
#include "cdi/generators.hpp"
#include "cdi/graph_io.hpp"
#include "cdi/rng.hpp"
#include "oracles.hpp"

using namespace cdi;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cdi_io_" + name)).string();
}

}  // namespace

TEST_SUITE("graph_io") {

TEST_CASE("3-cycle round trip through a file") {
  const Graph g = oracle::cycle3();
  const auto path = temp_path("cycle.edges");
  save_graph(g, path);
  const Graph h = load_graph(path);
  CHECK(h.size() == 3);
  CHECK(h.edges() == g.edges());
  std::filesystem::remove(path);
}

TEST_CASE("weights survive bit-exactly") {
  Rng rng(3);
  std::vector<Edge> edges;
  for (int i = 0; i < 20; ++i) edges.push_back({i, (i + 1) % 20, 1e-7 + rng.uniform() * 1e3});
  edges.push_back({0, 5, 0.1});
  edges.push_back({0, 6, 1.0 / 3.0});
  const Graph g(20, edges);
  std::stringstream s;
  write_edge_list(g, s);
  const Graph h = read_edge_list(s);
  CHECK(h.edges() == g.edges());
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, 5e-324})
    CHECK(std::strtod(format_real(x).c_str(), nullptr) == x);
}

TEST_CASE("one-based indices, comments and directives") {
  const Graph g = parse("# a comment\n# vertices: 5\n1 2 0.5\n\n2 1 0.25  # trailing\n");
  CHECK(g.size() == 5);
  CHECK(g.weight(0, 1) == 0.5);
  CHECK(g.weight(1, 0) == 0.25);
  const Graph u = parse("# undirected\n1 2 1\n2 1 1\n");
  CHECK(u.undirected());
  CHECK(parse("3 1 1\n").size() == 3);
}

TEST_CASE("undirected and vertex-count directives survive a round trip") {
  const Graph g(6, {{0, 1, 2.0}, {1, 0, 2.0}}, true);
  std::stringstream s;
  write_edge_list(g, s);
  const Graph h = read_edge_list(s);
  CHECK(h.size() == 6);
  CHECK(h.undirected());
}

TEST_CASE("malformed input reports the line") {
  try {
    parse("1 2 1\n2 x 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("1 2\n"), ParseError);
  CHECK_THROWS_AS(parse("0 2 1\n"), ParseError);
  CHECK_THROWS_AS(parse("1 2 abc\n"), ParseError);
}

TEST_CASE("invariant violations in files are rejected") {
  CHECK_THROWS_AS(parse("1 1 1.0\n"), ParseError);
  CHECK_THROWS_AS(parse("1 2 1.0\n1 2 2.0\n"), ValidationError);
  CHECK_THROWS_AS(parse("1 2 -1.0\n"), Error);
  CHECK_THROWS_AS(parse("# vertices: 2\n1 3 1.0\n"), ValidationError);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_graph("/nonexistent/graph.edges"), Error);
}

TEST_CASE("positions round trip and dimension checks") {
  const Graph g = generate_knnr(12, 3, 3, unit_box, 5);
  std::stringstream s;
  write_positions(g, s);
  const Graph bare(12, g.edges());
  const Graph h = read_positions(bare, s, 3);
  CHECK(h.dims() == 3);
  CHECK(h.positions() == g.positions());

  std::istringstream two("1 0.5 0.5\n2 0.1 0.1\n");
  CHECK_THROWS_AS(read_positions(oracle::mutual_pair(), two, 3), Error);
  std::istringstream mixed("1 0.5 0.5\n2 0.1 0.1 0.3\n");
  CHECK_THROWS_AS(read_positions(oracle::mutual_pair(), mixed), Error);
  std::istringstream missing("1 0.5 0.5\n");
  CHECK_THROWS_AS(read_positions(oracle::mutual_pair(), missing), Error);
  std::istringstream ok("2 0.1 0.2\n1 0.5 0.5\n");
  const Graph p = read_positions(oracle::mutual_pair(), ok, 2);
  CHECK(p.positions()[1][1] == 0.2);
}

}
