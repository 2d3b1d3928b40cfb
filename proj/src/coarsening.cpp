#include "maxent/coarsening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maxent/random.hpp"

namespace maxent {

double size_bound(int level_index, NodeId n_finest, double f, double b, double max_node_weight) {
  const double w = std::min(std::pow(b, level_index), static_cast<double>(n_finest) / f);
  return std::max(max_node_weight, w);
}

Clustering sclap_cluster(const Graph& g, double bound, int rounds, std::uint64_t seed,
                         const MoveObserver& observer) {
  const NodeId n = g.node_count();
  Clustering cl;
  cl.label.resize(static_cast<std::size_t>(n));
  std::iota(cl.label.begin(), cl.label.end(), 0);
  cl.cluster_weight.assign(g.node_weights().begin(), g.node_weights().end());

  std::vector<double> conn(static_cast<std::size_t>(n), 0.0);
  std::vector<char> marked(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> touched;
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_rng(seed, "sclap");

  for (int round = 0; round < rounds; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t moves = 0;
    for (NodeId v : order) {
      const NodeId own = cl.label[v];
      const double cv = g.node_weight(v);
      touched.clear();
      for (EdgeIndex a = g.arc_begin(v); a < g.arc_end(v); ++a) {
        const NodeId l = cl.label[g.arc_target(a)];
        if (!marked[l]) {
          marked[l] = 1;
          touched.push_back(l);
        }
        conn[l] += g.arc_weight(a);
      }
      const double stay = conn[own];
      double best = stay;
      NodeId target = own;
      std::uint64_t ties = 0;
      for (NodeId l : touched) {
        if (l == own || cl.cluster_weight[l] + cv > bound) continue;
        if (conn[l] > best) {
          best = conn[l];
          target = l;
          ties = 1;
        } else if (conn[l] == best && ties > 0) {
          // reservoir sampling keeps every tied label equally likely
          ++ties;
          if (uniform_below(rng, ties) == 0) target = l;
        }
      }
      for (NodeId l : touched) {
        conn[l] = 0.0;
        marked[l] = 0;
      }
      if (target != own) {
        cl.cluster_weight[own] -= cv;
        cl.cluster_weight[target] += cv;
        cl.label[v] = target;
        ++moves;
        if (observer) observer(v, own, target, cl);
      }
    }
    if (moves == 0) break;
  }
  return cl;
}

Contraction contract(const Graph& g, const Clustering& cl) {
  const NodeId n = g.node_count();
  Contraction out;
  out.map.assign(static_cast<std::size_t>(n), -1);
  std::vector<NodeId> coarse_of_label(static_cast<std::size_t>(n), -1);
  NodeId coarse_n = 0;
  for (NodeId v = 0; v < n; ++v) {
    NodeId& c = coarse_of_label[cl.label[v]];
    if (c < 0) c = coarse_n++;
    out.map[v] = c;
  }

  std::vector<double> weights(static_cast<std::size_t>(coarse_n), 0.0);
  std::vector<NodeId> bucket_start(static_cast<std::size_t>(coarse_n) + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    weights[out.map[v]] += g.node_weight(v);
    ++bucket_start[out.map[v] + 1];
  }
  std::partial_sum(bucket_start.begin(), bucket_start.end(), bucket_start.begin());
  std::vector<NodeId> members(static_cast<std::size_t>(n));
  {
    std::vector<NodeId> fill(bucket_start.begin(), bucket_start.end() - 1);
    for (NodeId v = 0; v < n; ++v) members[fill[out.map[v]]++] = v;
  }

  std::vector<EdgeSpec> edges;
  std::vector<double> acc(static_cast<std::size_t>(coarse_n), 0.0);
  std::vector<char> seen(static_cast<std::size_t>(coarse_n), 0);
  std::vector<NodeId> touched;
  for (NodeId cu = 0; cu < coarse_n; ++cu) {
    touched.clear();
    for (NodeId i = bucket_start[cu]; i < bucket_start[cu + 1]; ++i) {
      const NodeId u = members[i];
      for (EdgeIndex a = g.arc_begin(u); a < g.arc_end(u); ++a) {
        const NodeId cv = out.map[g.arc_target(a)];
        if (cv <= cu) continue;
        if (!seen[cv]) {
          seen[cv] = 1;
          touched.push_back(cv);
        }
        acc[cv] += g.arc_weight(a);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (NodeId cv : touched) {
      edges.push_back({cu, cv, acc[cv], 1.0});
      acc[cv] = 0.0;
      seen[cv] = 0;
    }
  }
  out.coarse = Graph::build(std::move(weights), edges);
  return out;
}

std::vector<NodeId> Hierarchy::composed_map(int from, int to) const {
  std::vector<NodeId> m(static_cast<std::size_t>(levels[from].node_count()));
  std::iota(m.begin(), m.end(), 0);
  for (int level = from; level < to; ++level) {
    for (NodeId& x : m) x = maps[level][x];
  }
  return m;
}

Hierarchy build_hierarchy(const Graph& g, const HierarchyParams& params, std::uint64_t seed) {
  Hierarchy h;
  h.levels.push_back(g);
  const NodeId n_finest = g.node_count();
  double f = params.f0;
  int ineffective = 0;

  for (int attempt = 1;; ++attempt) {
    const Graph& current = h.levels.back();
    if (current.node_count() <= 2) break;
    if (params.max_levels >= 0 && static_cast<int>(h.maps.size()) >= params.max_levels) break;

    const double bound = size_bound(attempt, n_finest, f, params.b, current.max_node_weight());
    const Clustering cl = sclap_cluster(current, bound, params.lp_rounds,
                                        derive_seed(seed, "hierarchy", static_cast<std::uint64_t>(attempt)));
    Contraction c = contract(current, cl);
    const NodeId before = current.node_count();
    const NodeId after = c.coarse.node_count();

    if (after < before) {
      ineffective = 0;
      std::vector<NodeId> counts(static_cast<std::size_t>(after), 0);
      for (NodeId x : c.map) ++counts[x];
      h.maps.push_back(std::move(c.map));
      h.counts.push_back(std::move(counts));
      h.bounds.push_back(bound);
      h.levels.push_back(std::move(c.coarse));
    } else if (++ineffective >= params.max_ineffective_decays) {
      h.safety_stop = true;
      break;
    }
    if (static_cast<double>(after) > 0.9 * static_cast<double>(before)) f *= 0.7;
  }
  return h;
}

} // namespace maxent
