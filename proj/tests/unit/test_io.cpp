#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "maxent/io.hpp"
#include "maxent/report.hpp"
#include "oracles.hpp"

using namespace maxent;

namespace {

ReadResult metis(const std::string& text) {
  std::istringstream in(text);
  return parse_metis(in);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    metis(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t k = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++k;
  return k;
}

} // namespace

TEST_CASE("metis: minimal path") {
  const Graph g = metis("3 2\n2\n1 3\n2\n").graph;
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("metis: edge weights") {
  const Graph g = metis("2 1 1\n2 5\n1 5\n").graph;
  CHECK(g.edge_count() == 1);
  CHECK(g.arc_weight(0) == 5.0);
  CHECK(g.arc_length(0) == 1.0);
}

TEST_CASE("metis: comments, node weights, sizes, isolated nodes") {
  const Graph g = metis("% comment\n3 1 111\n% another\n1 4 2 7\n2 9 1 7\n3 1\n").graph;
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 1);
  CHECK(g.arc_weight(0) == 7.0);
  CHECK(g.node_weight(0) == 1.0);
  CHECK(g.degree(2) == 0);
  const Graph h = metis("4 2 10 2\n1 1 2\n1 1 1 3\n1 1 2\n1 1\n").graph;
  CHECK(h.edge_count() == 2);
}

TEST_CASE("metis: errors carry line numbers") {
  CHECK(parse_error_line("3\n2\n1 3\n2\n") == 1);
  CHECK(parse_error_line("3 2\n2\n1 4\n2\n") == 3);
  CHECK(parse_error_line("3 2\n2\n1\n2\n") == 4);  // 3 lists 2, 2 does not list 3
  CHECK(parse_error_line("3 3\n2\n1 3\n2\n") > 0); // edge count mismatch
  CHECK(parse_error_line("2 1 1\n2 5\n1 6\n") == 2);
  CHECK(parse_error_line("3 2\n2\n1 x\n2\n") == 3);
  CHECK_THROWS_AS(metis("3 2\n2\n"), ParseError);
}

TEST_CASE("metis: write and read back") {
  const Graph g = oracle::random_connected(60, 80, 4);
  std::ostringstream out;
  write_metis(out, g);
  const Graph h = metis(out.str()).graph;
  CHECK(std::ranges::equal(h.targets(), g.targets()));
  CHECK(std::ranges::equal(h.offsets(), g.offsets()));
}

TEST_CASE("edge list") {
  std::istringstream a("0 1\n1 2\n");
  const Graph g = parse_edge_list(a).graph;
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);

  std::istringstream b("# header\n0 1 2.5 3\n\n2 1 1 0.5\n");
  const Graph h = parse_edge_list(b, 5).graph;
  CHECK(h.node_count() == 5);
  CHECK(h.arc_weight(0) == 2.5);
  CHECK(h.arc_length(0) == 3.0);

  std::istringstream c("0 1\n1\n");
  try {
    parse_edge_list(c);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  const Graph r = oracle::random_connected(30, 30, 2, true);
  std::ostringstream out;
  write_edge_list(out, r);
  std::istringstream back(out.str());
  const Graph s = parse_edge_list(back).graph;
  const auto re = r.edges(), se = s.edges();
  REQUIRE(re.size() == se.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    CHECK(re[i].u == se[i].u);
    CHECK(re[i].v == se[i].v);
    CHECK(re[i].length == se[i].length);
  }
}

TEST_CASE("coordinates round-trip bitwise") {
  Layout x = oracle::random_layout(100, 9, -1e6, 1e6);
  x.push_back({0.1, -0.0});
  x.push_back({1e-300, 5e-324});
  x.push_back({std::nextafter(1.0, 2.0), -123456789.123456789});
  std::stringstream s;
  write_coords(s, x);
  CHECK(oracle::bitwise_equal(parse_coords(s), x));

  const auto path = std::filesystem::temp_directory_path() / "maxent_coords_test.txt";
  const Layout three = oracle::random_layout(3, 1);
  write_coords(path, three);
  CHECK(oracle::bitwise_equal(read_coords(path, oracle::path(3)), three));
  CHECK_THROWS_AS(read_coords(path, oracle::path(4)), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("coordinates: malformed lines") {
  std::istringstream a("1 2\n3\n");
  CHECK_THROWS_AS(parse_coords(a), ParseError);
  std::istringstream b("1 2\n3 abc\n");
  CHECK_THROWS_AS(parse_coords(b), ParseError);
}

TEST_CASE("read_graph: missing file and format names") {
  CHECK_THROWS_AS(read_graph("/nonexistent/file.graph", GraphFormat::metis), DataError);
  CHECK(parse_format("edgelist") == GraphFormat::edgelist);
  CHECK_THROWS_AS(parse_format("mtx"), std::invalid_argument);
}

TEST_CASE("svg: K2 has one line") {
  const std::string svg = render_svg(oracle::path(2), {{0, 0}, {1, 1}});
  CHECK(count(svg, "<line") == 1);
  CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("svg: viewBox is the bounding box plus 2% margin") {
  const EdgeSpec e[] = {{0, 1}, {1, 2}, {0, 2}};
  const Graph g = Graph::build(3, e);
  const std::string svg = render_svg(g, {{0, 0}, {1, 0}, {0, 1}});
  CHECK(svg.find("viewBox=\"-0.02 -0.02 1.04 1.04\"") != std::string::npos);
  CHECK(count(svg, "<line") == 3);
  SvgOptions o;
  o.draw_nodes = true;
  CHECK(count(render_svg(g, {{0, 0}, {1, 0}, {0, 1}}, o), "<circle") == 3);
}

TEST_CASE("svg: deterministic") {
  const Graph g = oracle::random_connected(80, 100, 1);
  const Layout x = oracle::random_layout(80, 2);
  CHECK(render_svg(g, x) == render_svg(g, x));
}

TEST_CASE("report CSV round-trip") {
  RunReport a;
  a.graph = "1138_bus";
  a.n = 1138;
  a.m = 1358;
  a.h = 7;
  a.threads = 4;
  a.seed = 12345678901234ULL;
  a.t_coarsen_s = 0.1;
  a.t_optimize_s = 1.0 / 3.0;
  a.t_total_s = 0.43333333333333335;
  a.full_stress = 60364.25;
  a.maxent = -11312.125;
  a.scale = 0.987654321;
  RunReport b = a;
  b.mode = "dynamic-update";
  b.full_stress.reset();
  b.maxent.reset();
  b.scale.reset();
  std::stringstream s;
  write_report_header(s);
  write_report_row(s, a);
  write_report_row(s, b);
  CHECK(s.str().rfind("graph,n,m,h,threads,mode,seed,t_coarsen_s,t_optimize_s,t_total_s,F,M,scale\n", 0) == 0);
  const auto rows = parse_reports(s);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == a);
  CHECK(rows[1] == b);

  std::istringstream bad("graph,n\n");
  CHECK_THROWS_AS(parse_reports(bad), ParseError);
  std::istringstream short_row(std::string(kReportHeader) + "\nx,1,2\n");
  CHECK_THROWS_AS(parse_reports(short_row), ParseError);
}

TEST_CASE("evaluate_layout: scale applied before F and M") {
  const Graph g = oracle::path(4);
  const Layout x{{0, 0}, {2, 0}, {4, 0}, {6, 0}};
  const QualityMetrics q = evaluate_layout(g, x, 0.008, 1);
  CHECK(q.scale == 0.5);
  CHECK(q.full_stress == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.maxent == doctest::Approx(-0.008 * (std::log(2.0) + std::log(3.0) + std::log(2.0))).epsilon(1e-12));
}
