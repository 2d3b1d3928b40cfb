#include "maxent/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include <omp.h>

#include "maxent/layout_engine.hpp"
#include "maxent/random.hpp"

namespace maxent {

namespace {

constexpr NodeId kRowBlock = 64;

NodeId block_count(NodeId n) { return (n + kRowBlock - 1) / kRowBlock; }

void guard_size(NodeId n, NodeId limit) {
  if (n > limit) {
    std::ostringstream msg;
    msg << "all-pairs distances for " << n << " nodes exceed the limit of " << limit
        << " nodes; raise the metrics limit explicitly to override";
    throw DataError(msg.str());
  }
}

/// Hop distances from s into dist (size n, -1 when unreachable).
void bfs(const Graph& g, NodeId s, std::vector<std::int32_t>& dist, std::vector<NodeId>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  queue.push_back(s);
  dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
}

inline double pair_length(const Layout& x, NodeId u, NodeId v) {
  const double dx = x[u].x - x[v].x;
  const double dy = x[u].y - x[v].y;
  return std::sqrt(dx * dx + dy * dy);
}

void require_size(const Graph& g, const Layout& x) {
  if (static_cast<NodeId>(x.size()) != g.node_count()) {
    throw DataError("layout has " + std::to_string(x.size()) + " coordinates for a graph with " +
                    std::to_string(g.node_count()) + " nodes");
  }
  require_finite(x);
}

/// Sums f(u) over row blocks; partial sums combined in block order so the
/// result does not depend on the worker count.
template <class RowSum>
double blocked_sum(NodeId n, int threads, RowSum&& row) {
  const NodeId blocks = block_count(n);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (NodeId b = 0; b < blocks; ++b) {
    double s = 0.0;
    const NodeId end = std::min(n, (b + 1) * kRowBlock);
    for (NodeId u = b * kRowBlock; u < end; ++u) s += row(u);
    partial[b] = s;
  }
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

} // namespace

DistanceMatrix::DistanceMatrix(NodeId n)
    : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2, 0) {}

std::uint32_t DistanceMatrix::operator()(NodeId u, NodeId v) const {
  if (u == v) return 0;
  if (u > v) std::swap(u, v);
  return data_[index(u, v)];
}

DistanceMatrix apsp_unit(const Graph& g, NodeId limit, int threads) {
  const NodeId n = g.node_count();
  guard_size(n, limit);
  if (!is_connected(g)) throw DataError("all-pairs distances need a connected graph");
  DistanceMatrix dm(n);
#pragma omp parallel num_threads(resolve_threads(threads))
  {
    std::vector<std::int32_t> dist(static_cast<std::size_t>(n));
    std::vector<NodeId> queue;
#pragma omp for schedule(dynamic, 16)
    for (NodeId u = 0; u < n; ++u) {
      bfs(g, u, dist, queue);
      for (NodeId v = u + 1; v < n; ++v) dm.set(u, v, static_cast<std::uint32_t>(dist[v]));
    }
  }
  return dm;
}

double full_stress(const Graph& g, const DistanceMatrix& dm, const Layout& x, int threads) {
  require_size(g, x);
  if (dm.size() != g.node_count()) throw DataError("distance matrix does not match graph");
  const NodeId n = g.node_count();
  return blocked_sum(n, threads, [&](NodeId u) {
    double s = 0.0;
    for (NodeId v = u + 1; v < n; ++v) {
      const double d = dm(u, v);
      const double diff = pair_length(x, u, v) - d;
      s += diff * diff / (d * d);
    }
    return s;
  });
}

double optimal_scale(const Graph& g, const DistanceMatrix& dm, const Layout& x, int threads) {
  require_size(g, x);
  const NodeId n = g.node_count();
  // minimize sum w (s l - d)^2: s = sum(w d l) / sum(w l^2) with w = 1/d^2
  const double num = blocked_sum(n, threads, [&](NodeId u) {
    double s = 0.0;
    for (NodeId v = u + 1; v < n; ++v) s += pair_length(x, u, v) / static_cast<double>(dm(u, v));
    return s;
  });
  const double den = blocked_sum(n, threads, [&](NodeId u) {
    double s = 0.0;
    for (NodeId v = u + 1; v < n; ++v) {
      const double d = dm(u, v);
      const double l = pair_length(x, u, v);
      s += l * l / (d * d);
    }
    return s;
  });
  if (den == 0.0) throw DataError("optimal scale undefined: all node positions coincide");
  return num / den;
}

StreamedStress full_stress_streamed(const Graph& g, const Layout& x, NodeId limit, int threads) {
  require_size(g, x);
  const NodeId n = g.node_count();
  guard_size(n, limit);
  if (!is_connected(g)) throw DataError("full stress needs a connected graph");

  const NodeId blocks = block_count(n);
  std::vector<double> pa(static_cast<std::size_t>(blocks)), pb(pa.size()), pc(pa.size()), pf(pa.size());
#pragma omp parallel num_threads(resolve_threads(threads))
  {
    std::vector<std::int32_t> dist(static_cast<std::size_t>(n));
    std::vector<NodeId> queue;
#pragma omp for schedule(dynamic, 1)
    for (NodeId b = 0; b < blocks; ++b) {
      double a = 0.0, bb = 0.0, c = 0.0, f = 0.0;
      const NodeId end = std::min(n, (b + 1) * kRowBlock);
      for (NodeId u = b * kRowBlock; u < end; ++u) {
        bfs(g, u, dist, queue);
        for (NodeId v = u + 1; v < n; ++v) {
          const double d = dist[v];
          const double l = pair_length(x, u, v);
          a += l * l / (d * d);
          bb += l / d;
          c += 1.0;
          const double diff = l - d;
          f += diff * diff / (d * d);
        }
      }
      pa[b] = a;
      pb[b] = bb;
      pc[b] = c;
      pf[b] = f;
    }
  }
  const double a = std::accumulate(pa.begin(), pa.end(), 0.0);
  const double b = std::accumulate(pb.begin(), pb.end(), 0.0);
  const double c = std::accumulate(pc.begin(), pc.end(), 0.0);
  if (a == 0.0) throw DataError("optimal scale undefined: all node positions coincide");
  StreamedStress out;
  out.scale = b / a;
  out.stress_unscaled = std::accumulate(pf.begin(), pf.end(), 0.0);
  out.stress_scaled = std::max(0.0, out.scale * out.scale * a - 2.0 * out.scale * b + c);
  return out;
}

double sparse_stress(const Graph& g, const Layout& x) {
  require_size(g, x);
  double s = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (EdgeIndex a = g.arc_begin(u); a < g.arc_end(u); ++a) {
      const NodeId v = g.arc_target(a);
      if (v < u) continue;
      const double d = g.arc_length(a);
      const double diff = pair_length(x, u, v) - d;
      s += diff * diff / (d * d);
    }
  }
  return s;
}

double maxent_stress(const Graph& g, const Layout& x, double alpha, int threads) {
  require_size(g, x);
  const NodeId n = g.node_count();
  const double stress = sparse_stress(g, x);
  if (alpha == 0.0) return stress;

  // find coincident non-adjacent pairs up front so the error is deterministic
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return std::tie(x[a].x, x[a].y, a) < std::tie(x[b].x, x[b].y, b);
  });
  for (std::size_t i = 0; i + 1 < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    for (std::size_t p = i; p < j; ++p) {
      for (std::size_t q = p + 1; q < j; ++q) {
        const NodeId u = std::min(order[p], order[q]);
        const NodeId v = std::max(order[p], order[q]);
        if (!g.has_edge(u, v)) {
          throw DataError("nodes " + std::to_string(u) + " and " + std::to_string(v) +
                          " coincide; jitter the layout before evaluating maxent-stress");
        }
      }
    }
    i = j;
  }

  const double logs = blocked_sum(n, threads, [&](NodeId u) {
    double s = 0.0;
    const auto nb = g.neighbors(u);
    auto it = std::upper_bound(nb.begin(), nb.end(), u);
    for (NodeId v = u + 1; v < n; ++v) {
      if (it != nb.end() && *it == v) {
        ++it;
        continue;
      }
      const double dx = x[u].x - x[v].x;
      const double dy = x[u].y - x[v].y;
      s += 0.5 * std::log(dx * dx + dy * dy);
    }
    return s;
  });
  return stress - alpha * logs;
}

Layout jitter_coincident(Layout x, std::uint64_t seed) {
  const Layout original = x;
  const auto n = x.size();
  std::vector<std::size_t> order(n);
  auto coincident = [&](const Layout& l) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(l[a].x, l[a].y, a) < std::tie(l[b].x, l[b].y, b);
    });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i + 1;
      while (j < n && l[order[j]] == l[order[i]]) ++j;
      if (j - i > 1) out.insert(out.end(), order.begin() + static_cast<std::ptrdiff_t>(i),
                                order.begin() + static_cast<std::ptrdiff_t>(j));
      i = j;
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  auto offset = [](Rng& rng) {
    const double magnitude = 1e-7 + (1e-4 - 1e-7) * uniform01(rng);
    return (rng() & 1U) ? magnitude : -magnitude;
  };

  for (int attempt = 0; attempt <= 10; ++attempt) {
    const auto hit = coincident(x);
    if (hit.empty()) return x;
    if (attempt == 10) break;
    Rng rng = make_rng(seed, "jitter", static_cast<std::uint64_t>(attempt));
    for (std::size_t v : hit) {
      x[v].x = original[v].x + offset(rng);
      x[v].y = original[v].y + offset(rng);
    }
  }
  throw DataError("could not resolve coincident positions by jittering");
}

Layout scaled(Layout x, double s) {
  for (Vec2& p : x) {
    p.x *= s;
    p.y *= s;
  }
  return x;
}

} // namespace maxent
