#include "maxent/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace maxent {

void require_finite(std::span<const Vec2> layout) {
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (!std::isfinite(layout[i].x) || !std::isfinite(layout[i].y)) {
      std::ostringstream msg;
      msg << "non-finite coordinate at node " << i << " (" << layout[i].x << ", " << layout[i].y << ")";
      throw DataError(msg.str());
    }
  }
}

Graph Graph::build(NodeId n, std::span<const EdgeSpec> edges, BuildStats* stats) {
  if (n < 0) throw DataError("negative node count");
  return build(std::vector<double>(static_cast<std::size_t>(n), 1.0), edges, stats);
}

Graph Graph::build(std::vector<double> node_weights, std::span<const EdgeSpec> edges, BuildStats* stats) {
  const auto n = static_cast<NodeId>(node_weights.size());
  for (NodeId v = 0; v < n; ++v) {
    if (!(node_weights[v] >= 0.0) || !std::isfinite(node_weights[v])) {
      throw DataError("node " + std::to_string(v) + " has invalid weight");
    }
  }

  BuildStats local;
  std::vector<EdgeSpec> kept;
  kept.reserve(edges.size());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);

  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeSpec& e = edges[i];
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      std::ostringstream msg;
      msg << "edge " << i << " (" << e.u << ", " << e.v << ") references a node outside [0, " << n << ")";
      throw DataError(msg.str());
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      std::ostringstream msg;
      msg << "edge " << i << " (" << e.u << ", " << e.v << ") has non-positive target length " << e.length;
      throw DataError(msg.str());
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      std::ostringstream msg;
      msg << "edge " << i << " (" << e.u << ", " << e.v << ") has negative weight " << e.weight;
      throw DataError(msg.str());
    }
    if (e.u == e.v) {
      ++local.dropped_self_loops;
      continue;
    }
    const auto lo = static_cast<std::uint64_t>(std::min(e.u, e.v));
    const auto hi = static_cast<std::uint64_t>(std::max(e.u, e.v));
    if (!seen.insert((lo << 32) | hi).second) {
      ++local.merged_duplicates;
      continue;
    }
    kept.push_back(e);
  }

  Graph g;
  g.node_weight_ = std::move(node_weights);
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const EdgeSpec& e : kept) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

  const std::size_t arcs = kept.size() * 2;
  g.targets_.resize(arcs);
  g.arc_weight_.resize(arcs);
  g.arc_length_.resize(arcs);
  std::vector<EdgeIndex> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  auto put = [&](NodeId from, NodeId to, const EdgeSpec& e) {
    const EdgeIndex a = fill[from]++;
    g.targets_[a] = to;
    g.arc_weight_[a] = e.weight;
    g.arc_length_[a] = e.length;
  };
  for (const EdgeSpec& e : kept) {
    put(e.u, e.v, e);
    put(e.v, e.u, e);
  }

  // sort each neighbor list, carrying the arc attributes along
  std::vector<EdgeIndex> perm;
  std::vector<NodeId> t_tmp;
  std::vector<double> w_tmp, l_tmp;
  for (NodeId v = 0; v < n; ++v) {
    const EdgeIndex b = g.offsets_[v], e = g.offsets_[v + 1];
    const auto len = static_cast<std::size_t>(e - b);
    if (std::is_sorted(g.targets_.begin() + b, g.targets_.begin() + e)) continue;
    perm.resize(len);
    std::iota(perm.begin(), perm.end(), b);
    std::sort(perm.begin(), perm.end(), [&](EdgeIndex x, EdgeIndex y) { return g.targets_[x] < g.targets_[y]; });
    t_tmp.resize(len);
    w_tmp.resize(len);
    l_tmp.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      t_tmp[i] = g.targets_[perm[i]];
      w_tmp[i] = g.arc_weight_[perm[i]];
      l_tmp[i] = g.arc_length_[perm[i]];
    }
    std::copy(t_tmp.begin(), t_tmp.end(), g.targets_.begin() + b);
    std::copy(w_tmp.begin(), w_tmp.end(), g.arc_weight_.begin() + b);
    std::copy(l_tmp.begin(), l_tmp.end(), g.arc_length_.begin() + b);
  }

  if (stats) *stats = local;
  return g;
}

double Graph::max_node_weight() const {
  return node_weight_.empty() ? 0.0 : *std::max_element(node_weight_.begin(), node_weight_.end());
}

double Graph::total_node_weight() const {
  return std::accumulate(node_weight_.begin(), node_weight_.end(), 0.0);
}

double Graph::total_edge_weight() const {
  double sum = 0.0;
  for (NodeId u = 0; u < node_count(); ++u) {
    for (EdgeIndex a = arc_begin(u); a < arc_end(u); ++a) {
      if (u < targets_[a]) sum += arc_weight_[a];
    }
  }
  return sum;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<EdgeSpec> Graph::edges() const {
  std::vector<EdgeSpec> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (NodeId u = 0; u < node_count(); ++u) {
    for (EdgeIndex a = arc_begin(u); a < arc_end(u); ++a) {
      if (u < targets_[a]) out.push_back({u, targets_[a], arc_weight_[a], arc_length_[a]});
    }
  }
  return out;
}

NodeId connected_components(const Graph& g, std::vector<NodeId>& label) {
  const NodeId n = g.node_count();
  label.assign(static_cast<std::size_t>(n), -1);
  std::vector<NodeId> queue;
  queue.reserve(static_cast<std::size_t>(n));
  NodeId count = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    queue.clear();
    queue.push_back(s);
    label[s] = count;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId w : g.neighbors(queue[head])) {
        if (label[w] < 0) {
          label[w] = count;
          queue.push_back(w);
        }
      }
    }
    ++count;
  }
  return count;
}

bool is_connected(const Graph& g) {
  std::vector<NodeId> label;
  return connected_components(g, label) <= 1;
}

ComponentExtraction largest_connected_component(const Graph& g) {
  std::vector<NodeId> label;
  const NodeId count = connected_components(g, label);
  if (count == 0) return {};
  std::vector<NodeId> size(static_cast<std::size_t>(count), 0);
  for (NodeId l : label) ++size[l];
  // labels are assigned in order of each component's minimum node, so the
  // first maximum is the tie-break winner
  const auto best = static_cast<NodeId>(std::max_element(size.begin(), size.end()) - size.begin());

  ComponentExtraction out;
  out.old_to_new.assign(label.size(), -1);
  std::vector<double> weights;
  NodeId next = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (label[v] == best) {
      out.old_to_new[v] = next++;
      weights.push_back(g.node_weight(v));
    }
  }
  std::vector<EdgeSpec> kept;
  for (const EdgeSpec& e : g.edges()) {
    if (label[e.u] == best) {
      kept.push_back({out.old_to_new[e.u], out.old_to_new[e.v], e.weight, e.length});
    }
  }
  out.graph = Graph::build(std::move(weights), kept);
  return out;
}

} // namespace maxent
