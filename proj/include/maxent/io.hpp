#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maxent/graph.hpp"

namespace maxent {

/// Parse error carrying the offending line number (1-based; 0 when not tied
/// to a line).
class ParseError : public DataError {
public:
  ParseError(const std::string& what, std::size_t line)
      : DataError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct ReadResult {
  Graph graph;
  BuildStats stats;
};

/// METIS adjacency format: header "n m [fmt [ncon]]", then one line of
/// 1-based neighbors per node (edge weights interleaved when fmt's last digit
/// is 1). '%' lines are comments. Node weights and sizes are parsed and
/// discarded; target lengths are 1.
ReadResult parse_metis(std::istream& in);
ReadResult read_metis(const std::filesystem::path& path);
void write_metis(std::ostream& out, const Graph& g, bool with_edge_weights = false);

/// "u v [weight [length]]" per line, 0-based; '#' comments. The node count is
/// one more than the largest index seen unless given.
ReadResult parse_edge_list(std::istream& in, std::optional<NodeId> node_count = std::nullopt);
ReadResult read_edge_list(const std::filesystem::path& path, std::optional<NodeId> node_count = std::nullopt);
void write_edge_list(std::ostream& out, const Graph& g);

/// One "x y" line per node in shortest round-trip decimal form.
void write_coords(std::ostream& out, const Layout& x);
void write_coords(const std::filesystem::path& path, const Layout& x);
Layout parse_coords(std::istream& in);
Layout read_coords(const std::filesystem::path& path);
/// read_coords plus a length check against the graph.
Layout read_coords(const std::filesystem::path& path, const Graph& g);

enum class GraphFormat { metis, edgelist };
GraphFormat parse_format(const std::string& name);
ReadResult read_graph(const std::filesystem::path& path, GraphFormat format);

struct SvgOptions {
  double width_px = 1000.0;
  bool draw_nodes = false;
  double node_radius = 0.0; // 0: derived from the layout extent
};

/// Straight-line drawing with a viewBox fitted to the layout plus a 2% margin.
/// Stroke width and opacity shrink as the edge count grows.
std::string render_svg(const Graph& g, const Layout& x, const SvgOptions& opts = {});

} // namespace maxent
