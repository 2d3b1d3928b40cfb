#include "maxent/layout_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "maxent/random.hpp"

namespace maxent {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr std::uint64_t kRepresentativeTag = 1ULL << 62;

/// Deterministic unit direction for a coincident pair, antisymmetric in the
/// pair order.
Vec2 guard_direction(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  const bool flip = a > b;
  if (flip) std::swap(a, b);
  const std::uint64_t h = mix64(derive_seed(seed, "coincident") ^ mix64(a) ^ (b * 0x9e3779b97f4a7c15ULL));
  const double theta = 2.0 * std::numbers::pi * (static_cast<double>(h >> 11) * 0x1.0p-53);
  Vec2 d{std::cos(theta), std::sin(theta)};
  if (flip) d = {-d.x, -d.y};
  return d;
}

struct SoA {
  std::vector<double> x, y;

  explicit SoA(const Layout& l) : x(l.size()), y(l.size()) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      x[i] = l[i].x;
      y[i] = l[i].y;
    }
  }
};

/// Read-only view of everything the per-node update needs.
struct Sweep {
  const Graph& g;
  std::span<const double> dist;
  std::span<const double> weight;
  std::span<const NodeId> map;
  std::span<const double> nu;
  const LevelContext& ctx;
  const SoA& pos;
  const SoA& rep;
  double alpha;
  double guard;
  double guard2;
  std::uint64_t seed;
};

/// Weighted sum of (p - rep_i) / |p - rep_i|^2 over reps [b, e). Pairs closer
/// than the guard distance are handled by a scalar pass afterwards.
inline void repulse_range(const Sweep& s, NodeId u, double px, double py, NodeId b, NodeId e, double& sx,
                          double& sy) {
  const double* X = s.rep.x.data();
  const double* Y = s.rep.y.data();
  const double* W = s.nu.data();
  const double g2 = s.guard2;
  double ax = 0.0, ay = 0.0, guarded = 0.0;
#pragma omp simd reduction(+ : ax, ay, guarded)
  for (NodeId i = b; i < e; ++i) {
    const double dx = px - X[i];
    const double dy = py - Y[i];
    const double q = dx * dx + dy * dy;
    const double w = W[i];
    const bool ok = q >= g2;
    const double f = ok ? w / q : 0.0;
    ax += dx * f;
    ay += dy * f;
    guarded += ok ? 0.0 : 1.0;
  }
  if (guarded > 0.0) {
    for (NodeId i = b; i < e; ++i) {
      const double dx = px - X[i];
      const double dy = py - Y[i];
      if (dx * dx + dy * dy >= g2) continue;
      const Vec2 d = guard_direction(s.seed, static_cast<std::uint64_t>(u),
                                     kRepresentativeTag | static_cast<std::uint64_t>(i));
      ax += W[i] * d.x / s.guard;
      ay += W[i] * d.y / s.guard;
    }
  }
  sx += ax;
  sy += ay;
}

/// r(u, v) between two level nodes.
inline void add_r(const Sweep& s, NodeId u, NodeId v, double sign, double& sx, double& sy) {
  const double dx = s.pos.x[u] - s.pos.x[v];
  const double dy = s.pos.y[u] - s.pos.y[v];
  const double q = dx * dx + dy * dy;
  if (q >= s.guard2) {
    sx += sign * (dx / q);
    sy += sign * (dy / q);
  } else {
    const Vec2 d = guard_direction(s.seed, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v));
    sx += sign * (d.x / s.guard);
    sy += sign * (d.y / s.guard);
  }
}

/// New coordinate of u. The entropy part is
///   sum over same-cluster v (non-adjacent) of r(u, v)
/// + sum over other representatives v' of nu(v') r(u, x'_{v'})
/// - sum over neighbors v in other clusters of r(u, v),
/// where a neighbor forming a singleton cluster is skipped in the second sum
/// instead of being added and subtracted again.
Vec2 update_node(const Sweep& s, NodeId u, std::vector<NodeId>& skip) {
  const Graph& g = s.g;
  const double px = s.pos.x[u];
  const double py = s.pos.y[u];
  const NodeId own = s.map[u];

  double tx = 0.0, ty = 0.0;
  for (EdgeIndex a = g.arc_begin(u); a < g.arc_end(u); ++a) {
    const NodeId v = g.arc_target(a);
    const double dx = px - s.pos.x[v];
    const double dy = py - s.pos.y[v];
    const double len = std::sqrt(dx * dx + dy * dy);
    double ux, uy;
    if (len >= s.guard) {
      ux = dx / len;
      uy = dy / len;
    } else {
      const Vec2 d = guard_direction(s.seed, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v));
      ux = d.x;
      uy = d.y;
    }
    tx += s.weight[a] * (s.pos.x[v] + s.dist[a] * ux);
    ty += s.weight[a] * (s.pos.y[v] + s.dist[a] * uy);
  }

  skip.clear();
  skip.push_back(own);
  double subx = 0.0, suby = 0.0;
  for (NodeId v : g.neighbors(u)) {
    const NodeId r = s.map[v];
    if (r == own) continue;
    if (s.nu[r] == 1.0) {
      skip.push_back(r);
    } else {
      add_r(s, u, v, 1.0, subx, suby);
    }
  }
  if (!std::is_sorted(skip.begin(), skip.end())) std::sort(skip.begin(), skip.end());

  double cx = 0.0, cy = 0.0;
  NodeId begin = 0;
  for (NodeId r : skip) {
    if (r > begin) repulse_range(s, u, px, py, begin, r, cx, cy);
    begin = r + 1;
  }
  if (begin < static_cast<NodeId>(s.nu.size())) {
    repulse_range(s, u, px, py, begin, static_cast<NodeId>(s.nu.size()), cx, cy);
  }

  double sx = 0.0, sy = 0.0;
  const auto members = s.ctx.cluster(own);
  if (members.size() > 1) {
    const auto nb = g.neighbors(u);
    auto it = nb.begin();
    for (NodeId v : members) {
      if (v == u) continue;
      while (it != nb.end() && *it < v) ++it;
      if (it != nb.end() && *it == v) continue;
      add_r(s, u, v, 1.0, sx, sy);
    }
  }

  const double ex = (sx + cx) - subx;
  const double ey = (sy + cy) - suby;
  const double rho = s.ctx.rho(u);
  return {(tx + s.alpha * ex) / rho, (ty + s.alpha * ey) / rho};
}

Layout sweep(const LevelContext& ctx, const Layout& x, const SoA& pos, const SoA& rep, double alpha,
             const OptimizerParams& p) {
  const Graph& g = ctx.graph();
  const NodeId n = g.node_count();
  Sweep s{g,     ctx.distances(), ctx.weights(),        ctx.approx_map(),
          ctx.approx_counts(),  ctx, pos, rep, alpha, p.guard_distance,
          p.guard_distance * p.guard_distance, p.seed};
  Layout out(x.size());
  const int threads = resolve_threads(p.threads);
#pragma omp parallel num_threads(threads)
  {
    std::vector<NodeId> skip;
#pragma omp for schedule(dynamic, 64)
    for (NodeId u = 0; u < n; ++u) out[u] = update_node(s, u, skip);
  }
  return out;
}

void check_layout(const LevelContext& ctx, const Layout& x) {
  if (static_cast<NodeId>(x.size()) != ctx.graph().node_count()) {
    throw DataError("layout has " + std::to_string(x.size()) + " coordinates for a graph with " +
                    std::to_string(ctx.graph().node_count()) + " nodes");
  }
  require_finite(x);
  for (NodeId u = 0; u < ctx.graph().node_count(); ++u) {
    if (!(ctx.rho(u) > 0.0)) throw DataError("node " + std::to_string(u) + " has no incident edge weight");
  }
}

} // namespace

int resolve_threads(int requested) {
  return requested > 0 ? requested : omp_get_max_threads();
}

void OptimizerParams::validate() const {
  if (!(alpha_min > 0.0 && alpha_min <= alpha0)) throw std::invalid_argument("need 0 < alpha_min <= alpha0");
  if (!(alpha_factor > 0.0 && alpha_factor < 1.0)) throw std::invalid_argument("need 0 < alpha_factor < 1");
  if (iters_per_round < 1) throw std::invalid_argument("need iters_per_round >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("need epsilon > 0");
  if (approx_depth < 0) throw std::invalid_argument("need approx_depth >= 0");
  if (!(guard_distance > 0.0)) throw std::invalid_argument("need guard_distance > 0");
  if (max_final_iters < 1) throw std::invalid_argument("need max_final_iters >= 1");
}

std::vector<double> adjusted_distances(const Graph& g, bool finest) {
  std::vector<double> d(g.targets().size());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (EdgeIndex a = g.arc_begin(u); a < g.arc_end(u); ++a) {
      d[a] = finest ? g.arc_length(a)
                    : std::sqrt(g.node_weight(u)) + std::sqrt(g.node_weight(g.arc_target(a)));
    }
  }
  return d;
}

LevelContext::LevelContext(const Graph& g, std::vector<double> distances)
    : graph_(&g), distances_(std::move(distances)) {
  const NodeId n = g.node_count();
  map_.resize(static_cast<std::size_t>(n));
  std::iota(map_.begin(), map_.end(), 0);
  nu_.assign(static_cast<std::size_t>(n), 1.0);
  identity_ = true;
  init_structure();
}

LevelContext::LevelContext(const Graph& g, std::vector<double> distances, std::vector<NodeId> approx_map,
                           NodeId approx_count)
    : graph_(&g), distances_(std::move(distances)), map_(std::move(approx_map)) {
  if (static_cast<NodeId>(map_.size()) != g.node_count()) throw std::invalid_argument("approx map size mismatch");
  nu_.assign(static_cast<std::size_t>(approx_count), 0.0);
  for (NodeId r : map_) {
    if (r < 0 || r >= approx_count) throw std::invalid_argument("approx map entry out of range");
    nu_[r] += 1.0;
  }
  for (double c : nu_) {
    if (c == 0.0) throw std::invalid_argument("approx map is not surjective");
  }
  identity_ = false;
  init_structure();
}

void LevelContext::init_structure() {
  const Graph& g = *graph_;
  if (distances_.size() != g.targets().size()) throw std::invalid_argument("one distance per arc required");
  weights_.resize(distances_.size());
  rho_.assign(static_cast<std::size_t>(g.node_count()), 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (EdgeIndex a = g.arc_begin(u); a < g.arc_end(u); ++a) {
      if (!(distances_[a] > 0.0)) throw std::invalid_argument("level distances must be positive");
      weights_[a] = 1.0 / (distances_[a] * distances_[a]);
      rho_[u] += weights_[a];
    }
  }
  const auto k = static_cast<NodeId>(nu_.size());
  member_start_.assign(static_cast<std::size_t>(k) + 1, 0);
  for (NodeId r : map_) ++member_start_[r + 1];
  std::partial_sum(member_start_.begin(), member_start_.end(), member_start_.begin());
  members_.resize(map_.size());
  std::vector<NodeId> fill(member_start_.begin(), member_start_.end() - 1);
  for (NodeId v = 0; v < static_cast<NodeId>(map_.size()); ++v) members_[fill[map_[v]]++] = v;
}

void LevelContext::refresh_approx_layout(const Layout& x, int threads) {
  const NodeId k = approx_count();
  approx_layout_.resize(static_cast<std::size_t>(k));
  const Graph& g = *graph_;
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (NodeId r = 0; r < k; ++r) {
    const auto mem = cluster(r);
    if (mem.size() == 1) {
      approx_layout_[r] = x[mem[0]];
      continue;
    }
    double wx = 0.0, wy = 0.0, wsum = 0.0;
    for (NodeId v : mem) {
      const double c = g.node_weight(v);
      wx += c * x[v].x;
      wy += c * x[v].y;
      wsum += c;
    }
    if (wsum > 0.0) {
      approx_layout_[r] = {wx / wsum, wy / wsum};
    } else {
      double mx = 0.0, my = 0.0;
      for (NodeId v : mem) {
        mx += x[v].x;
        my += x[v].y;
      }
      approx_layout_[r] = {mx / static_cast<double>(mem.size()), my / static_cast<double>(mem.size())};
    }
  }
}

Layout iterate_exact(const LevelContext& ctx, const Layout& x, double alpha, const OptimizerParams& p) {
  check_layout(ctx, x);
  if (ctx.has_approximation()) {
    // evaluate against an identity view of the same graph and distances
    LevelContext exact(ctx.graph(), std::vector<double>(ctx.distances().begin(), ctx.distances().end()));
    return iterate_exact(exact, x, alpha, p);
  }
  const SoA pos(x);
  return sweep(ctx, x, pos, pos, alpha, p);
}

Layout iterate_approx(LevelContext& ctx, const Layout& x, double alpha, const OptimizerParams& p) {
  check_layout(ctx, x);
  if (static_cast<NodeId>(ctx.approx_layout().size()) != ctx.approx_count()) {
    ctx.refresh_approx_layout(x, p.threads);
  }
  require_finite(ctx.approx_layout());
  const SoA pos(x);
  const SoA rep(ctx.approx_layout());
  Layout out = sweep(ctx, x, pos, rep, alpha, p);
  ctx.refresh_approx_layout(out, p.threads);
  return out;
}

double relative_change(const Layout& x_old, const Layout& x_new) {
  if (x_old.size() != x_new.size()) throw std::invalid_argument("relative_change: layouts differ in length");
  constexpr std::size_t kBlock = 4096;
  const std::size_t n = x_old.size();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> num(blocks, 0.0), den(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    double a = 0.0, c = 0.0;
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const double dx = x_new[i].x - x_old[i].x;
      const double dy = x_new[i].y - x_old[i].y;
      a += dx * dx + dy * dy;
      c += x_old[i].x * x_old[i].x + x_old[i].y * x_old[i].y;
    }
    num[b] = a;
    den[b] = c;
  }
  double a = 0.0, c = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    a += num[b];
    c += den[b];
  }
  if (c == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(a) / std::sqrt(c);
}

Layout optimize_level(LevelContext& ctx, Layout x, const OptimizerParams& p, LevelStats* stats,
                      bool keep_final_round_start) {
  p.validate();
  LevelStats local;
  double alpha = std::max(p.alpha0, p.alpha_min);
  for (;;) {
    const bool final_round = alpha <= p.alpha_min;
    if (final_round) {
      alpha = p.alpha_min;
      if (keep_final_round_start) local.final_round_start = x;
    }
    const int limit = final_round ? p.max_final_iters : p.iters_per_round;
    local.round_alphas.push_back(alpha);
    ++local.rounds;
    for (int it = 0; it < limit; ++it) {
      Layout next = ctx.has_approximation() ? iterate_approx(ctx, x, alpha, p) : iterate_exact(ctx, x, alpha, p);
      const double change = relative_change(x, next);
      x = std::move(next);
      ++local.iterations;
      local.final_relative_change = change;
      if (change < p.epsilon) {
        if (final_round) local.converged = true;
        break;
      }
    }
    if (final_round) break;
    alpha = std::max(alpha * p.alpha_factor, p.alpha_min);
  }
  if (stats) *stats = std::move(local);
  return x;
}

Layout initial_layout(const Graph& coarsest) {
  switch (coarsest.node_count()) {
  case 1:
    return {{0.0, 0.0}};
  case 2:
    return {{0.0, 0.0}, {std::sqrt(coarsest.node_weight(0)) + std::sqrt(coarsest.node_weight(1)), 0.0}};
  default:
    throw std::invalid_argument("initial_layout needs a graph with one or two nodes, got " +
                                std::to_string(coarsest.node_count()));
  }
}

Layout prolong(const Layout& coarse_layout, std::span<const NodeId> map, const Graph& coarse, const Graph& fine,
               std::uint64_t seed) {
  if (static_cast<NodeId>(map.size()) != fine.node_count()) throw std::invalid_argument("prolong: map size mismatch");
  if (static_cast<NodeId>(coarse_layout.size()) != coarse.node_count()) {
    throw std::invalid_argument("prolong: coarse layout size mismatch");
  }
  Rng rng = make_rng(seed, "prolong");
  Layout out(map.size());
  for (std::size_t v = 0; v < map.size(); ++v) {
    const NodeId c = map[v];
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    const double radius = std::sqrt(coarse.node_weight(c)) * uniform01(rng);
    out[v] = {coarse_layout[c].x + radius * std::cos(theta), coarse_layout[c].y + radius * std::sin(theta)};
  }
  return out;
}

LevelContext make_level_context(const Hierarchy& h, int level, int depth) {
  const Graph& g = h.levels[level];
  std::vector<double> d = adjusted_distances(g, level == 0);
  if (depth <= 0) return LevelContext(g, std::move(d));
  const int target = std::min(level + depth, h.depth() - 1);
  return LevelContext(g, std::move(d), h.composed_map(level, target), h.levels[target].node_count());
}

namespace {

/// Coarsest-level fallback when the hierarchy stopped above two nodes: a
/// circle whose circumference leaves each node its sqrt(c) disc.
Layout circle_layout(const Graph& g) {
  const NodeId n = g.node_count();
  double perimeter = 0.0;
  for (NodeId v = 0; v < n; ++v) perimeter += 2.0 * std::sqrt(g.node_weight(v));
  const double radius = std::max(perimeter / (2.0 * std::numbers::pi), 1.0);
  Layout x(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) {
    const double theta = 2.0 * std::numbers::pi * v / n;
    x[v] = {radius * std::cos(theta), radius * std::sin(theta)};
  }
  return x;
}

} // namespace

MultilevelResult layout_multilevel(const Graph& g, const OptimizerParams& p_in, const HierarchyParams& hp,
                                   std::uint64_t seed) {
  p_in.validate();
  if (g.node_count() < 1) throw DataError("cannot lay out an empty graph");
  if (!is_connected(g)) {
    throw DataError("graph is disconnected; extract the largest connected component first");
  }
  OptimizerParams p = p_in;
  p.seed = seed;

  MultilevelResult res;
  const auto t0 = Clock::now();
  const Hierarchy h = build_hierarchy(g, hp, seed);
  res.coarsen_seconds = seconds_since(t0);
  res.hierarchy_depth = h.depth();
  for (const Graph& level : h.levels) res.level_sizes.push_back(level.node_count());
  res.level_stats.resize(static_cast<std::size_t>(h.depth()));

  const auto t1 = Clock::now();
  const int coarsest = h.depth() - 1;
  Layout x;
  if (h.coarsest().node_count() <= 2) {
    x = initial_layout(h.coarsest());
  } else {
    x = circle_layout(h.coarsest());
    LevelContext ctx = make_level_context(h, coarsest, 0);
    x = optimize_level(ctx, std::move(x), p, &res.level_stats[coarsest]);
  }
  for (int level = coarsest - 1; level >= 0; --level) {
    const auto tl = Clock::now();
    x = prolong(x, h.maps[level], h.levels[level + 1], h.levels[level],
                derive_seed(seed, "prolong-level", static_cast<std::uint64_t>(level)));
    LevelContext ctx = make_level_context(h, level, p.approx_depth);
    if (ctx.has_approximation()) ctx.refresh_approx_layout(x, p.threads);
    x = optimize_level(ctx, std::move(x), p, &res.level_stats[level]);
    if (level == 0) res.finest_optimize_seconds = seconds_since(tl);
  }
  res.optimize_seconds = seconds_since(t1);
  res.total_seconds = seconds_since(t0);
  res.layout = std::move(x);
  return res;
}

} // namespace maxent
