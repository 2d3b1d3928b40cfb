#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "maxent/graph.hpp"

namespace maxent {

struct Clustering {
  std::vector<NodeId> label;          // per node; labels are node ids of the initial singletons
  std::vector<double> cluster_weight; // indexed by label
};

/// Cluster size bound max(max_c, min(b^level, n_finest / f)).
double size_bound(int level_index, NodeId n_finest, double f, double b, double max_node_weight);

/// Observer invoked after every accepted label move: (node, from, to, clustering).
using MoveObserver = std::function<void(NodeId, NodeId, NodeId, const Clustering&)>;

/// Size-constrained label propagation.
///
/// Starts from singletons and runs at most `rounds` passes, each over all
/// nodes in a seeded random order. A node moves to the neighboring label with
/// the largest connecting edge weight among labels that can absorb it without
/// exceeding `bound`; ties are broken uniformly at random, and a move happens
/// only on strict improvement over staying. Stops early after a pass without
/// moves.
Clustering sclap_cluster(const Graph& g, double bound, int rounds, std::uint64_t seed,
                         const MoveObserver& observer = {});

struct Contraction {
  Graph coarse;
  std::vector<NodeId> map; // fine node -> coarse node
};

/// One coarse node per nonempty cluster, numbered by first appearance in
/// fine-node order. Coarse edges sum the crossing edge weights and carry unit
/// target length.
Contraction contract(const Graph& g, const Clustering& cl);

struct HierarchyParams {
  double f0 = 20.0;
  double b = 2.0;
  int lp_rounds = 3;
  /// Stop after this many coarsening levels (negative: until the coarsest
  /// graph has at most two nodes).
  int max_levels = -1;
  int max_ineffective_decays = 10;
};

struct Hierarchy {
  std::vector<Graph> levels;                // levels[0] is the input graph
  std::vector<std::vector<NodeId>> maps;    // maps[i]: levels[i] node -> levels[i+1] node
  std::vector<std::vector<NodeId>> counts;  // counts[i][v']: level-i nodes mapped to v' of level i+1
  std::vector<double> bounds;               // cluster bound used to build level i+1
  bool safety_stop = false;

  int depth() const { return static_cast<int>(levels.size()); }
  const Graph& coarsest() const { return levels.back(); }

  /// Map from level `from` to level `to` (from <= to), composed.
  std::vector<NodeId> composed_map(int from, int to) const;
};

Hierarchy build_hierarchy(const Graph& g, const HierarchyParams& params, std::uint64_t seed);

} // namespace maxent
