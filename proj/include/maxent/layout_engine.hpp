#pragma once

#include <cstdint>
#include <vector>

#include "maxent/coarsening.hpp"
#include "maxent/graph.hpp"

namespace maxent {

struct OptimizerParams {
  double alpha0 = 1.0;
  double alpha_min = 0.008;
  double alpha_factor = 0.3;
  int iters_per_round = 2;
  double epsilon = 1e-4;
  int approx_depth = 0;       // h; 0 evaluates the entropy term exactly
  double guard_distance = 1e-9;
  int max_final_iters = 200;
  int threads = 0;            // 0: all available workers
  std::uint64_t seed = 1;     // feeds the coincident-pair direction hash

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Target lengths per arc of a level graph: the stored lengths on the finest
/// level, sqrt(c(u)) + sqrt(c(v)) on coarse levels.
std::vector<double> adjusted_distances(const Graph& g, bool finest);

/// Everything one level of the optimizer reads besides the layout.
///
/// The approximation part groups the level's nodes into clusters (the nodes
/// sharing a representative on a coarser level). `approx_layout` holds the
/// representatives' coordinates and is refreshed after every approximate
/// iteration.
class LevelContext {
public:
  /// Context for exact iteration: every node is its own representative.
  LevelContext(const Graph& g, std::vector<double> distances);

  /// Context approximating the entropy term through `approx_map`
  /// (level node -> representative in [0, approx_count)).
  LevelContext(const Graph& g, std::vector<double> distances, std::vector<NodeId> approx_map,
               NodeId approx_count);

  const Graph& graph() const { return *graph_; }
  std::span<const double> distances() const { return distances_; }
  std::span<const double> weights() const { return weights_; }
  double rho(NodeId u) const { return rho_[u]; }

  bool has_approximation() const { return !identity_; }
  NodeId approx_count() const { return static_cast<NodeId>(nu_.size()); }
  std::span<const NodeId> approx_map() const { return map_; }
  std::span<const double> approx_counts() const { return nu_; }
  std::span<const NodeId> cluster(NodeId rep) const {
    return {members_.data() + member_start_[rep], members_.data() + member_start_[rep + 1]};
  }

  const Layout& approx_layout() const { return approx_layout_; }
  void set_approx_layout(Layout x) { approx_layout_ = std::move(x); }

  /// Sets every representative to the node-weighted midpoint of its members.
  void refresh_approx_layout(const Layout& x, int threads = 0);

private:
  void init_structure();

  const Graph* graph_;
  std::vector<double> distances_;
  std::vector<double> weights_;
  std::vector<double> rho_;
  bool identity_ = true;
  std::vector<NodeId> map_;
  std::vector<double> nu_;
  std::vector<NodeId> member_start_;
  std::vector<NodeId> members_;
  Layout approx_layout_;
};

/// One Jacobi sweep of the local force scheme with the exact O(n^2) entropy
/// term. Every output coordinate depends only on the input layout.
Layout iterate_exact(const LevelContext& ctx, const Layout& x, double alpha, const OptimizerParams& p = {});

/// Same sweep with the entropy term for far nodes evaluated against the
/// representatives in ctx.approx_layout() (weighted by how many level nodes
/// each stands for). Refreshes ctx's approximation layout afterwards.
Layout iterate_approx(LevelContext& ctx, const Layout& x, double alpha, const OptimizerParams& p = {});

/// ||x_new - x_old|| / ||x_old|| over all 2n scalars; +inf when x_old is zero.
double relative_change(const Layout& x_old, const Layout& x_new);

struct LevelStats {
  int iterations = 0;
  int rounds = 0;
  std::vector<double> round_alphas;
  double final_relative_change = 0.0;
  bool converged = false;
  /// Layout entering the final round; kept only when requested.
  Layout final_round_start;
};

/// Runs the alpha schedule on one level. Starts from alpha0, reducing by
/// alpha_factor (clamped at alpha_min) after each round of at most
/// iters_per_round iterations; at alpha_min iterates until the relative change
/// drops below epsilon or max_final_iters is reached.
Layout optimize_level(LevelContext& ctx, Layout x, const OptimizerParams& p, LevelStats* stats = nullptr,
                      bool keep_final_round_start = false);

/// Places one node at the origin, or two nodes at (0,0) and
/// (sqrt(c(u)) + sqrt(c(v)), 0).
Layout initial_layout(const Graph& coarsest);

/// Places each fine node uniformly in angle and radius within
/// sqrt(c(M(v))) of its coarse representative, in ascending node order.
Layout prolong(const Layout& coarse_layout, std::span<const NodeId> map, const Graph& coarse,
               const Graph& fine, std::uint64_t seed);

struct MultilevelResult {
  Layout layout;
  int hierarchy_depth = 0;
  std::vector<NodeId> level_sizes;
  std::vector<LevelStats> level_stats; // indexed by hierarchy level
  double coarsen_seconds = 0.0;
  double optimize_seconds = 0.0;
  double finest_optimize_seconds = 0.0;
  double total_seconds = 0.0;
};

MultilevelResult layout_multilevel(const Graph& g, const OptimizerParams& p, const HierarchyParams& hp,
                                   std::uint64_t seed);

/// Builds the context for `level` of `h`, approximating through the level
/// min(level + depth, coarsest) when depth >= 1.
LevelContext make_level_context(const Hierarchy& h, int level, int depth);

/// Effective worker count for a requested value (0 = all).
int resolve_threads(int requested);

} // namespace maxent
