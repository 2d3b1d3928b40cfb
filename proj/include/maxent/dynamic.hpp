#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxent/coarsening.hpp"
#include "maxent/graph.hpp"
#include "maxent/layout_engine.hpp"

namespace maxent {

struct PerturbationParams {
  double x_percent = 1.0;   // in [0, 100)
  int max_distance = 2;     // D >= 2
  std::uint64_t seed = 1;
};

struct Perturbation {
  Graph graph;
  std::size_t requested = 0;  // k = round(x% of m)
  std::size_t removed = 0;
  std::size_t inserted = 0;
  std::vector<EdgeSpec> removed_edges;
  std::vector<EdgeSpec> inserted_edges;
  std::vector<std::string> warnings;
};

/// Removes k random non-tree edges (tree of a BFS from a random root, so the
/// result stays connected) and inserts k edges between random nodes at
/// original-graph distance in (1, D].
Perturbation perturb(const Graph& g, const PerturbationParams& p);

struct UpdateResult {
  Layout layout;
  LevelStats stats;
  int hierarchy_depth = 0;
  double coarsen_seconds = 0.0;
  double optimize_seconds = 0.0;
  double total_seconds = 0.0;
};

/// Re-optimizes a prior layout for a changed graph on the same node set.
/// Only the finest level is iterated, with alpha fixed at alpha_min. For
/// h >= 1 the hierarchy stops after h levels and the approximation level is
/// seeded with the weighted cluster midpoints of the prior coordinates.
UpdateResult update_layout(const Graph& q, const Layout& prior, const OptimizerParams& p,
                           const HierarchyParams& hp, std::uint64_t seed);

} // namespace maxent
