#pragma once

#include <cstdint>
#include <vector>

#include "maxent/graph.hpp"

namespace maxent {

inline constexpr NodeId kDefaultApspLimit = 200000;

/// All-pairs hop distances, stored as the strict upper triangle.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(NodeId n);

  NodeId size() const { return n_; }
  std::uint32_t operator()(NodeId u, NodeId v) const;
  void set(NodeId u, NodeId v, std::uint32_t d) { data_[index(u, v)] = d; }

private:
  std::size_t index(NodeId u, NodeId v) const {
    // row u (u < v) starts after rows 0..u-1 of lengths n-1, n-2, ...
    const auto uu = static_cast<std::size_t>(u);
    const auto nn = static_cast<std::size_t>(n_);
    return uu * (2 * nn - uu - 1) / 2 + static_cast<std::size_t>(v - u - 1);
  }

  NodeId n_ = 0;
  std::vector<std::uint32_t> data_;
};

/// BFS from every node. Throws DataError when n exceeds `limit` or the graph
/// is disconnected.
DistanceMatrix apsp_unit(const Graph& g, NodeId limit = kDefaultApspLimit, int threads = 0);

/// Sum over unordered pairs of (1/d^2)(|x_u - x_v| - d)^2 with hop distances d.
double full_stress(const Graph& g, const DistanceMatrix& dm, const Layout& x, int threads = 0);

/// argmin_s of the full stress of s * x, in closed form.
double optimal_scale(const Graph& g, const DistanceMatrix& dm, const Layout& x, int threads = 0);

/// Full stress and optimal scale without storing the distance matrix: one BFS
/// per source, O(n (n + m)) time and O(n) memory per worker.
struct StreamedStress {
  double scale = 1.0;
  double stress_unscaled = 0.0;
  double stress_scaled = 0.0;
};
StreamedStress full_stress_streamed(const Graph& g, const Layout& x, NodeId limit = kDefaultApspLimit,
                                    int threads = 0);

/// Sparse stress over edges minus alpha times the log distance summed over
/// non-adjacent unordered pairs. Throws DataError naming a coincident
/// non-adjacent pair.
double maxent_stress(const Graph& g, const Layout& x, double alpha, int threads = 0);

/// Sparse stress term alone (edges only, w = 1/d^2).
double sparse_stress(const Graph& g, const Layout& x);

/// Moves every node that shares its exact position with another node by a
/// random +-[1e-7, 1e-4] offset per component. Unique positions are untouched.
Layout jitter_coincident(Layout x, std::uint64_t seed);

/// Uniform scaling of a layout.
Layout scaled(Layout x, double s);

} // namespace maxent
