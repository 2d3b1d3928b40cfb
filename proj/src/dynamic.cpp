#include "maxent/dynamic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include "maxent/random.hpp"

namespace maxent {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  const auto lo = static_cast<std::uint64_t>(std::min(u, v));
  const auto hi = static_cast<std::uint64_t>(std::max(u, v));
  return (lo << 32) | hi;
}

/// Nodes at hop distance 2..max_distance from s in g, ascending.
void ball_ring(const Graph& g, NodeId s, int max_distance, std::vector<std::int32_t>& dist,
               std::vector<NodeId>& queue, std::vector<NodeId>& out) {
  out.clear();
  queue.clear();
  queue.push_back(s);
  dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    if (dist[u] >= max_distance) continue;
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
        if (dist[w] >= 2) out.push_back(w);
      }
    }
  }
  for (NodeId v : queue) dist[v] = -1;
  std::sort(out.begin(), out.end());
}

} // namespace

Perturbation perturb(const Graph& g, const PerturbationParams& p) {
  if (!(p.x_percent >= 0.0 && p.x_percent < 100.0)) throw std::invalid_argument("x_percent must lie in [0, 100)");
  if (p.max_distance < 2) throw std::invalid_argument("insertion distance bound D must be at least 2");
  const NodeId n = g.node_count();
  if (n < 1 || !is_connected(g)) throw DataError("perturbation needs a connected graph");

  Perturbation out;
  Rng rng = make_rng(p.seed, "perturb");

  // BFS spanning tree from a random root
  const auto root = static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(n)));
  std::unordered_set<std::uint64_t> tree;
  {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> queue{root};
    seen[root] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      for (NodeId w : g.neighbors(u)) {
        if (!seen[w]) {
          seen[w] = 1;
          tree.insert(edge_key(u, w));
          queue.push_back(w);
        }
      }
    }
  }

  const std::vector<EdgeSpec> all = g.edges();
  std::vector<std::size_t> non_tree;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!tree.contains(edge_key(all[i].u, all[i].v))) non_tree.push_back(i);
  }

  const auto k = static_cast<std::size_t>(std::llround(p.x_percent / 100.0 * static_cast<double>(all.size())));
  out.requested = k;
  const std::size_t to_remove = std::min(k, non_tree.size());
  if (to_remove < k) {
    out.warnings.push_back("only " + std::to_string(non_tree.size()) + " non-tree edges available, " +
                           std::to_string(k) + " removals requested");
  }
  // partial Fisher-Yates
  for (std::size_t i = 0; i < to_remove; ++i) {
    const std::size_t j = i + uniform_below(rng, non_tree.size() - i);
    std::swap(non_tree[i], non_tree[j]);
  }
  std::vector<char> removed(all.size(), 0);
  for (std::size_t i = 0; i < to_remove; ++i) removed[non_tree[i]] = 1;

  std::vector<EdgeSpec> q_edges;
  std::unordered_set<std::uint64_t> present;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (removed[i]) {
      out.removed_edges.push_back(all[i]);
    } else {
      q_edges.push_back(all[i]);
      present.insert(edge_key(all[i].u, all[i].v));
    }
  }
  out.removed = to_remove;

  std::vector<std::int32_t> dist(static_cast<std::size_t>(n), -1);
  std::vector<NodeId> queue, ring, candidates;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < k; ++i) {
    bool placed = false;
    for (NodeId attempt = 0; attempt < n && !placed; ++attempt) {
      const auto u = static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(n)));
      ball_ring(g, u, p.max_distance, dist, queue, ring);
      candidates.clear();
      for (NodeId v : ring) {
        if (!present.contains(edge_key(u, v))) candidates.push_back(v);
      }
      if (candidates.empty()) continue;
      const NodeId v = candidates[uniform_below(rng, candidates.size())];
      present.insert(edge_key(u, v));
      const EdgeSpec e{std::min(u, v), std::max(u, v), 1.0, 1.0};
      q_edges.push_back(e);
      out.inserted_edges.push_back(e);
      placed = true;
    }
    if (!placed) ++skipped;
  }
  out.inserted = out.inserted_edges.size();
  if (skipped > 0) {
    out.warnings.push_back(std::to_string(skipped) + " insertions skipped: no node at distance 2.." +
                           std::to_string(p.max_distance) + " without an existing edge");
  }

  std::vector<double> weights(g.node_weights().begin(), g.node_weights().end());
  out.graph = Graph::build(std::move(weights), q_edges);
  return out;
}

UpdateResult update_layout(const Graph& q, const Layout& prior, const OptimizerParams& p,
                           const HierarchyParams& hp, std::uint64_t seed) {
  p.validate();
  if (static_cast<NodeId>(prior.size()) != q.node_count()) {
    throw DataError("prior layout has " + std::to_string(prior.size()) + " coordinates but the graph has " +
                    std::to_string(q.node_count()) + " nodes");
  }
  require_finite(prior);
  if (!is_connected(q)) throw DataError("graph is disconnected");

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  OptimizerParams fixed = p;
  fixed.alpha0 = p.alpha_min;
  fixed.seed = seed;

  UpdateResult res;
  if (q.node_count() < 2) {
    res.layout = prior;
    res.hierarchy_depth = 1;
    return res;
  }
  if (p.approx_depth == 0) {
    LevelContext ctx(q, adjusted_distances(q, true));
    const auto t1 = Clock::now();
    res.layout = optimize_level(ctx, prior, fixed, &res.stats);
    res.optimize_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
    res.hierarchy_depth = 1;
  } else {
    HierarchyParams truncated = hp;
    truncated.max_levels = p.approx_depth;
    const Hierarchy h = build_hierarchy(q, truncated, seed);
    res.coarsen_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    res.hierarchy_depth = h.depth();
    LevelContext ctx = make_level_context(h, 0, p.approx_depth);
    ctx.refresh_approx_layout(prior, p.threads);
    const auto t1 = Clock::now();
    res.layout = optimize_level(ctx, prior, fixed, &res.stats);
    res.optimize_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
  }
  res.total_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

} // namespace maxent
