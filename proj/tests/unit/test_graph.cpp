#include <doctest.h>

#include <algorithm>

#include "maxent/graph.hpp"
#include "oracles.hpp"

using namespace maxent;

TEST_CASE("build: smallest connected graph") {
  const EdgeSpec e[] = {{0, 1, 1, 1}};
  const Graph g = Graph::build(2, e);
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  REQUIRE(g.neighbors(0).size() == 1);
  CHECK(g.neighbors(0)[0] == 1);
}

TEST_CASE("build: duplicates merged, first occurrence kept") {
  const EdgeSpec e[] = {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 2, 1, 1}};
  BuildStats stats;
  const Graph g = Graph::build(3, e, &stats);
  CHECK(g.edge_count() == 2);
  CHECK(stats.merged_duplicates == 1);

  const EdgeSpec f[] = {{0, 1, 2, 3}, {1, 0, 7, 9}};
  const Graph h = Graph::build(2, f);
  CHECK(h.arc_weight(0) == 2.0);
  CHECK(h.arc_length(0) == 3.0);
  CHECK(h.arc_weight(1) == 2.0);
}

TEST_CASE("build: self-loops dropped") {
  const EdgeSpec e[] = {{0, 0, 1, 1}, {0, 1, 1, 1}};
  BuildStats stats;
  const Graph g = Graph::build(2, e, &stats);
  CHECK(g.edge_count() == 1);
  CHECK(stats.dropped_self_loops == 1);
}

TEST_CASE("build: invalid input rejected") {
  const EdgeSpec zero_len[] = {{0, 1, 1, 0}};
  CHECK_THROWS_AS(Graph::build(3, zero_len), DataError);
  const EdgeSpec neg_len[] = {{0, 1, 1, -1}};
  CHECK_THROWS_AS(Graph::build(3, neg_len), DataError);
  const EdgeSpec out_of_range[] = {{0, 3, 1, 1}};
  CHECK_THROWS_AS(Graph::build(3, out_of_range), DataError);
  const EdgeSpec neg_weight[] = {{0, 1, -1, 1}};
  CHECK_THROWS_AS(Graph::build(3, neg_weight), DataError);
}

TEST_CASE("invariants: symmetric sorted adjacency, degree sum 2m, edge dump round-trip") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = oracle::random_connected(40, 60, seed, true);
    EdgeIndex deg = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      deg += g.degree(u);
      const auto nb = g.neighbors(u);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      for (EdgeIndex a = g.arc_begin(u); a < g.arc_end(u); ++a) {
        const NodeId v = g.arc_target(a);
        CHECK(v != u);
        REQUIRE(g.has_edge(v, u));
        const auto back = g.neighbors(v);
        const auto pos = std::lower_bound(back.begin(), back.end(), u) - back.begin();
        const EdgeIndex b = g.arc_begin(v) + pos;
        CHECK(g.arc_weight(b) == g.arc_weight(a));
        CHECK(g.arc_length(b) == g.arc_length(a));
      }
    }
    CHECK(deg == 2 * g.edge_count());

    const auto dump = g.edges();
    const Graph h = Graph::build(g.node_count(), dump);
    CHECK(std::ranges::equal(h.offsets(), g.offsets()));
    CHECK(std::ranges::equal(h.targets(), g.targets()));
    for (EdgeIndex a = 0; a < 2 * g.edge_count(); ++a) {
      CHECK(h.arc_weight(a) == g.arc_weight(a));
      CHECK(h.arc_length(a) == g.arc_length(a));
    }
  }
}

TEST_CASE("largest component: connected triangle is kept whole") {
  const EdgeSpec e[] = {{0, 1}, {1, 2}, {0, 2}};
  const Graph g = Graph::build(3, e);
  const auto c = largest_connected_component(g);
  CHECK(c.graph.node_count() == 3);
  CHECK(c.graph.edge_count() == 3);
  CHECK(c.old_to_new == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("largest component: tie goes to smallest original index") {
  // components {0,3}, {1,2}, {4}
  const EdgeSpec e[] = {{1, 2}, {0, 3}};
  const Graph g = Graph::build(5, e);
  const auto c = largest_connected_component(g);
  CHECK(c.graph.node_count() == 2);
  CHECK(c.graph.edge_count() == 1);
  CHECK(c.old_to_new == std::vector<NodeId>{0, -1, -1, 1, -1});
}

TEST_CASE("largest component: planted 30/20 split matches BFS labeling") {
  std::vector<EdgeSpec> e;
  const Graph a = oracle::random_connected(30, 15, 11);
  const Graph b = oracle::random_connected(20, 10, 12);
  // interleave the two components over the 50 node ids
  std::vector<NodeId> id_a, id_b;
  for (NodeId v = 0; v < 50; ++v) ((v % 5 < 3) ? id_a : id_b).push_back(v);
  for (const auto& s : a.edges()) e.push_back({id_a[s.u], id_a[s.v], 1, 1});
  for (const auto& s : b.edges()) e.push_back({id_b[s.u], id_b[s.v], 1, 1});
  const Graph g = Graph::build(50, e);

  const auto labels = oracle::bfs_labels(g);
  CHECK(*std::max_element(labels.begin(), labels.end()) == 1);
  const auto c = largest_connected_component(g);
  CHECK(c.graph.node_count() == 30);
  CHECK(is_connected(c.graph));
  for (NodeId v = 0; v < 50; ++v) CHECK((c.old_to_new[v] >= 0) == (labels[v] == labels[id_a[0]]));
  CHECK(oracle::bfs_labels(c.graph) == std::vector<NodeId>(30, 0));
}

TEST_CASE("connected_components agrees with BFS labeling") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<EdgeSpec> e;
    const Graph r = oracle::random_connected(60, 0, seed);
    auto dump = r.edges();
    for (std::size_t i = 0; i < dump.size(); i += 3) e.push_back(dump[i]);
    const Graph g = Graph::build(60, e);
    std::vector<NodeId> label;
    const NodeId k = connected_components(g, label);
    const auto ref = oracle::bfs_labels(g);
    CHECK(label == ref);
    CHECK(k == *std::max_element(ref.begin(), ref.end()) + 1);
  }
}

TEST_CASE("require_finite") {
  Layout x{{0, 0}, {1, 2}};
  CHECK_NOTHROW(require_finite(x));
  x[1].y = std::nan("");
  CHECK_THROWS_AS(require_finite(x), DataError);
}
