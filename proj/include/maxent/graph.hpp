#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxent {

using NodeId = std::int32_t;
using EdgeIndex = std::int64_t;

/// Raised for malformed input data (files, coordinate vectors, graphs that
/// violate a precondition of the requested operation).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

using Layout = std::vector<Vec2>;

/// Throws DataError naming the first non-finite coordinate.
void require_finite(std::span<const Vec2> layout);

/// One undirected input edge. Weight is the coarsening weight, length the
/// target drawing distance.
struct EdgeSpec {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;
  double length = 1.0;
};

/// Counters for input cleanup performed by Graph::build.
struct BuildStats {
  std::size_t dropped_self_loops = 0;
  std::size_t merged_duplicates = 0;
};

/// Weighted undirected simple graph in compressed adjacency form.
///
/// Each undirected edge is stored twice (once per endpoint). Neighbor lists
/// are sorted ascending, and both arcs of an edge carry identical weight and
/// target length. Immutable after construction.
class Graph {
public:
  Graph() = default;

  /// Builds a graph on n nodes with unit node weights. Self-loops are dropped
  /// and repeated undirected edges keep their first occurrence.
  static Graph build(NodeId n, std::span<const EdgeSpec> edges, BuildStats* stats = nullptr);

  /// Same as build, with explicit node weights (one per node, each >= 0).
  static Graph build(std::vector<double> node_weights, std::span<const EdgeSpec> edges,
                     BuildStats* stats = nullptr);

  NodeId node_count() const { return static_cast<NodeId>(node_weight_.size()); }
  EdgeIndex edge_count() const { return static_cast<EdgeIndex>(targets_.size() / 2); }

  EdgeIndex arc_begin(NodeId v) const { return offsets_[v]; }
  EdgeIndex arc_end(NodeId v) const { return offsets_[v + 1]; }
  NodeId degree(NodeId v) const { return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  NodeId arc_target(EdgeIndex a) const { return targets_[a]; }
  double arc_weight(EdgeIndex a) const { return arc_weight_[a]; }
  double arc_length(EdgeIndex a) const { return arc_length_[a]; }

  double node_weight(NodeId v) const { return node_weight_[v]; }
  std::span<const double> node_weights() const { return node_weight_; }
  double max_node_weight() const;
  double total_node_weight() const;
  double total_edge_weight() const;

  /// Binary search in the sorted neighbor list of u.
  bool has_edge(NodeId u, NodeId v) const;

  /// Each undirected edge once, as (u < v), in ascending (u, v) order.
  std::vector<EdgeSpec> edges() const;

  std::span<const EdgeIndex> offsets() const { return offsets_; }
  std::span<const NodeId> targets() const { return targets_; }

private:
  std::vector<EdgeIndex> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<double> arc_weight_;
  std::vector<double> arc_length_;
  std::vector<double> node_weight_;
};

bool is_connected(const Graph& g);

/// Component labels in BFS discovery order starting from the smallest
/// unlabeled node. Returns the number of components.
NodeId connected_components(const Graph& g, std::vector<NodeId>& label);

struct ComponentExtraction {
  Graph graph;
  /// old node index -> new index, or -1 when the node was dropped
  std::vector<NodeId> old_to_new;
};

/// Keeps a maximum-cardinality connected component. Ties go to the component
/// containing the smallest original node index.
ComponentExtraction largest_connected_component(const Graph& g);

} // namespace maxent
