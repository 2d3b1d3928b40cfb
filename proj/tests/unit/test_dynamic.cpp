#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <set>

#include "maxent/dynamic.hpp"
#include "maxent/io.hpp"
#include "maxent/metrics.hpp"
#include "oracles.hpp"

using namespace maxent;

namespace {

Graph del500() { return read_metis(MAXENT_TEST_DATA_DIR "/del500.graph").graph; }

std::set<std::pair<NodeId, NodeId>> edge_set(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> s;
  for (const auto& e : g.edges()) s.insert({e.u, e.v});
  return s;
}

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

} // namespace

TEST_CASE("perturb: x = 0 leaves the graph unchanged") {
  const Graph g = oracle::random_connected(50, 60, 1);
  PerturbationParams p;
  p.x_percent = 0;
  const Perturbation q = perturb(g, p);
  CHECK(edge_set(q.graph) == edge_set(g));
  CHECK(q.removed == 0);
  CHECK(q.inserted == 0);
}

TEST_CASE("perturb: tree input has nothing to remove") {
  const Graph g = oracle::random_connected(100, 0, 2);
  REQUIRE(g.edge_count() == 99);
  PerturbationParams p;
  p.x_percent = 5;
  p.max_distance = 3;
  const Perturbation q = perturb(g, p);
  CHECK(q.requested == 5);
  CHECK(q.removed == 0);
  CHECK(q.inserted == 5);
  CHECK(q.graph.edge_count() == 104);
  CHECK(is_connected(q.graph));
  CHECK_FALSE(q.warnings.empty());
}

TEST_CASE("perturb: triangulation, D = 2, seed 3") {
  const Graph g = del500();
  PerturbationParams p;
  p.x_percent = 5;
  p.max_distance = 2;
  p.seed = 3;
  const Perturbation q = perturb(g, p);
  const auto k = static_cast<std::size_t>(std::llround(0.05 * static_cast<double>(g.edge_count())));
  CHECK(q.requested == k);
  CHECK(q.removed == k);
  CHECK(q.inserted <= k);
  CHECK(q.graph.edge_count() == g.edge_count() - static_cast<EdgeIndex>(k) + static_cast<EdgeIndex>(q.inserted));
  CHECK(is_connected(q.graph));
  for (const auto& e : q.inserted_edges) {
    CHECK(oracle::hop_distance(g, e.u, e.v) == 2);
    CHECK(q.graph.has_edge(e.u, e.v));
  }
  for (const auto& e : q.removed_edges) CHECK(g.has_edge(e.u, e.v));
}

TEST_CASE("perturb: connectivity and distance bound over seeds") {
  const Graph g = del500();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int D : {2, 3, 5}) {
      PerturbationParams p;
      p.x_percent = 10;
      p.max_distance = D;
      p.seed = seed;
      const Perturbation q = perturb(g, p);
      CHECK(is_connected(q.graph));
      CHECK(q.graph.node_count() == g.node_count());
      for (const auto& e : q.inserted_edges) {
        const int d = oracle::hop_distance(g, e.u, e.v);
        CHECK(d > 1);
        CHECK(d <= D);
      }
    }
  }
}

TEST_CASE("perturb: deterministic per seed") {
  const Graph g = del500();
  PerturbationParams p;
  p.seed = 11;
  const Perturbation a = perturb(g, p), b = perturb(g, p);
  CHECK(std::ranges::equal(a.graph.targets(), b.graph.targets()));
  CHECK(std::ranges::equal(a.graph.offsets(), b.graph.offsets()));
}

TEST_CASE("perturb: invalid input") {
  PerturbationParams p;
  const EdgeSpec e[] = {{0, 1}, {2, 3}};
  CHECK_THROWS_AS(perturb(Graph::build(4, e), p), DataError);
  p.max_distance = 1;
  CHECK_THROWS_AS(perturb(oracle::path(5), p), std::invalid_argument);
  p = {};
  p.x_percent = 100;
  CHECK_THROWS_AS(perturb(oracle::path(5), p), std::invalid_argument);
}

TEST_CASE("update: unchanged graph and converged prior is a no-op") {
  const Graph g = oracle::random_connected(40, 60, 3);
  // converge the prior far below the default tolerance
  OptimizerParams p;
  p.alpha0 = p.alpha_min;
  p.epsilon = 1e-12;
  p.max_final_iters = 1000000;
  LevelContext ctx(g, adjusted_distances(g, true));
  LevelStats s;
  const Layout prior = optimize_level(ctx, layout_multilevel(g, {}, {}, 1).layout, p, &s);
  REQUIRE(s.converged);
  const UpdateResult u = update_layout(g, prior, {}, {}, 1);
  CHECK(u.stats.iterations == 1);
  CHECK(u.stats.rounds == 1);
  CHECK(u.stats.round_alphas == std::vector<double>{0.008});
  const double before = maxent_stress(g, prior, 0.008);
  CHECK(std::abs(maxent_stress(g, u.layout, 0.008) - before) <= 1e-9 * std::abs(before));
}

TEST_CASE("update: faster than a fresh layout on a perturbed path-10") {
  const Graph g = oracle::path(10);
  const Layout prior = layout_multilevel(g, {}, {}, 1).layout;
  PerturbationParams pp;
  pp.x_percent = 10;
  const Graph q = perturb(g, pp).graph;
  const double t_update = best_of(7, [&] { update_layout(q, prior, {}, {}, 1); });
  const double t_scratch = best_of(7, [&] { layout_multilevel(q, {}, {}, 1); });
  CHECK(t_update < t_scratch);
}

TEST_CASE("update: approximation depth and midpoint seeding") {
  const Graph g = del500();
  const Layout prior = layout_multilevel(g, {}, {}, 2).layout;
  PerturbationParams pp;
  const Graph q = perturb(g, pp).graph;
  const double scratch = maxent_stress(q, layout_multilevel(q, {}, {}, 2).layout, 0.008);
  for (int h : {0, 1, 3}) {
    OptimizerParams p;
    p.approx_depth = h;
    const UpdateResult u = update_layout(q, prior, p, {}, 2);
    require_finite(u.layout);
    CHECK(u.hierarchy_depth == (h == 0 ? 1 : h + 1));
    CHECK(u.stats.round_alphas.front() == 0.008);
    CHECK(maxent_stress(q, u.layout, 0.008) <= scratch + 0.05 * std::abs(scratch));
    p.threads = 3;
    CHECK(oracle::bitwise_equal(update_layout(q, prior, p, {}, 2).layout, u.layout));
  }
}

TEST_CASE("update: node-set mismatch rejected") {
  CHECK_THROWS_AS(update_layout(oracle::path(4), Layout(3), {}, {}, 1), DataError);
}
