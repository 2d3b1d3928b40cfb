#include "maxent/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <tuple>

namespace maxent {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("expected " + std::string(what) + ", got '" + std::string(tok) + "'", line);
  }
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Compact fixed-width formatting for SVG output.
std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace

ReadResult parse_metis(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      const auto first = out.find_first_not_of(" \t");
      if (first != std::string::npos && out[first] == '%') continue;
      return true;
    }
    return false;
  };

  // header: skip blank lines before it
  std::vector<std::string_view> head;
  while (head.empty()) {
    if (!next_content_line(line)) throw ParseError("missing header line", line_no);
    head = split_ws(line);
  }
  const std::size_t header_line = line_no;
  if (head.size() < 2 || head.size() > 4) throw ParseError("header must be 'n m [fmt [ncon]]'", header_line);
  const auto n = parse_number<std::int64_t>(head[0], header_line, "node count");
  const auto m = parse_number<std::int64_t>(head[1], header_line, "edge count");
  if (n < 0 || m < 0 || n > INT32_MAX) throw ParseError("invalid node or edge count", header_line);
  std::string fmt = head.size() >= 3 ? std::string(head[2]) : "0";
  if (fmt.size() > 3 || fmt.find_first_not_of("01") != std::string::npos) {
    throw ParseError("unsupported fmt '" + fmt + "'", header_line);
  }
  fmt.insert(0, 3 - fmt.size(), '0');
  const bool has_size = fmt[0] == '1';
  const bool has_node_weight = fmt[1] == '1';
  const bool has_edge_weight = fmt[2] == '1';
  int ncon = 0;
  if (has_node_weight) {
    ncon = head.size() == 4 ? parse_number<int>(head[3], header_line, "ncon") : 1;
    if (ncon < 1) throw ParseError("ncon must be positive", header_line);
  } else if (head.size() == 4) {
    throw ParseError("ncon given without node weights", header_line);
  }

  struct Arc {
    NodeId u, v;
    double w;
    std::size_t line;
  };
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(2 * m));
  for (NodeId u = 0; u < n; ++u) {
    if (!next_content_line(line)) {
      throw ParseError("expected " + std::to_string(n) + " node lines, file ends after " + std::to_string(u),
                       line_no);
    }
    const auto tok = split_ws(line);
    std::size_t i = 0;
    if (has_size) ++i;
    i += static_cast<std::size_t>(ncon);
    if (i > tok.size()) throw ParseError("missing node size or weight entries", line_no);
    const std::size_t stride = has_edge_weight ? 2 : 1;
    if ((tok.size() - i) % stride != 0) throw ParseError("neighbor without edge weight", line_no);
    for (; i < tok.size(); i += stride) {
      const auto v = parse_number<std::int64_t>(tok[i], line_no, "neighbor index");
      if (v < 1 || v > n) {
        throw ParseError("neighbor index " + std::to_string(v) + " outside 1.." + std::to_string(n), line_no);
      }
      const double w = has_edge_weight ? parse_number<double>(tok[i + 1], line_no, "edge weight") : 1.0;
      arcs.push_back({u, static_cast<NodeId>(v - 1), w, line_no});
    }
  }
  while (next_content_line(line)) {
    if (!split_ws(line).empty()) throw ParseError("content after the last node line", line_no);
  }

  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return std::tie(a.u, a.v, a.line) < std::tie(b.u, b.v, b.line);
  });
  std::vector<EdgeSpec> edges;
  for (const Arc& a : arcs) {
    if (a.u == a.v) {
      edges.push_back({a.u, a.v, a.w, 1.0}); // dropped and counted by Graph::build
      continue;
    }
    const auto it = std::lower_bound(arcs.begin(), arcs.end(), a, [](const Arc& x, const Arc& key) {
      return std::tie(x.u, x.v) < std::tie(key.v, key.u);
    });
    if (it == arcs.end() || it->u != a.v || it->v != a.u) {
      throw ParseError("asymmetric adjacency: node " + std::to_string(a.u + 1) + " lists " +
                           std::to_string(a.v + 1) + " but not vice versa",
                       a.line);
    }
    if (it->w != a.w) {
      throw ParseError("edge {" + std::to_string(a.u + 1) + ", " + std::to_string(a.v + 1) +
                           "} has different weights in its two directions",
                       a.line);
    }
    if (a.u < a.v) edges.push_back({a.u, a.v, a.w, 1.0});
  }

  ReadResult r;
  r.graph = Graph::build(static_cast<NodeId>(n), edges, &r.stats);
  if (r.graph.edge_count() != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, adjacency lists contain " +
                         std::to_string(r.graph.edge_count()),
                     header_line);
  }
  return r;
}

ReadResult read_metis(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_metis(in);
}

void write_metis(std::ostream& out, const Graph& g, bool with_edge_weights) {
  out << g.node_count() << ' ' << g.edge_count();
  if (with_edge_weights) out << " 1";
  out << '\n';
  for (NodeId u = 0; u < g.node_count(); ++u) {
    bool first = true;
    for (EdgeIndex a = g.arc_begin(u); a < g.arc_end(u); ++a) {
      if (!first) out << ' ';
      first = false;
      out << g.arc_target(a) + 1;
      if (with_edge_weights) out << ' ' << format_double(g.arc_weight(a));
    }
    out << '\n';
  }
}

ReadResult parse_edge_list(std::istream& in, std::optional<NodeId> node_count) {
  std::vector<EdgeSpec> edges;
  std::string line;
  std::size_t line_no = 0;
  std::int64_t max_index = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok.size() > 4) {
      throw ParseError("expected 'u v [weight [length]]', got " + std::to_string(tok.size()) + " tokens", line_no);
    }
    const auto u = parse_number<std::int64_t>(tok[0], line_no, "node index");
    const auto v = parse_number<std::int64_t>(tok[1], line_no, "node index");
    if (u < 0 || v < 0 || u > INT32_MAX - 1 || v > INT32_MAX - 1) throw ParseError("node index out of range", line_no);
    EdgeSpec e{static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0, 1.0};
    if (tok.size() >= 3) e.weight = parse_number<double>(tok[2], line_no, "edge weight");
    if (tok.size() == 4) e.length = parse_number<double>(tok[3], line_no, "target length");
    if (!(e.length > 0.0)) throw ParseError("non-positive target length", line_no);
    max_index = std::max({max_index, u, v});
    edges.push_back(e);
  }
  const NodeId n = node_count.value_or(static_cast<NodeId>(max_index + 1));
  if (max_index >= n) throw ParseError("node index " + std::to_string(max_index) + " exceeds node count", 0);
  ReadResult r;
  r.graph = Graph::build(n, edges, &r.stats);
  return r;
}

ReadResult read_edge_list(const std::filesystem::path& path, std::optional<NodeId> node_count) {
  auto in = open_in(path);
  return parse_edge_list(in, node_count);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const EdgeSpec& e : g.edges()) {
    out << e.u << ' ' << e.v << ' ' << format_double(e.weight) << ' ' << format_double(e.length) << '\n';
  }
}

void write_coords(std::ostream& out, const Layout& x) {
  for (const Vec2& p : x) out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
}

void write_coords(const std::filesystem::path& path, const Layout& x) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_coords(out, x);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Layout parse_coords(std::istream& in) {
  Layout x;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) {
      throw ParseError("expected 'x y', got " + std::to_string(tok.size()) + " tokens", line_no);
    }
    x.push_back({parse_number<double>(tok[0], line_no, "coordinate"), parse_number<double>(tok[1], line_no, "coordinate")});
  }
  return x;
}

Layout read_coords(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_coords(in);
}

Layout read_coords(const std::filesystem::path& path, const Graph& g) {
  Layout x = read_coords(path);
  if (static_cast<NodeId>(x.size()) != g.node_count()) {
    throw DataError("coordinate file '" + path.string() + "' has " + std::to_string(x.size()) +
                    " entries but the graph has " + std::to_string(g.node_count()) + " nodes");
  }
  require_finite(x);
  return x;
}

GraphFormat parse_format(const std::string& name) {
  if (name == "metis") return GraphFormat::metis;
  if (name == "edgelist") return GraphFormat::edgelist;
  throw std::invalid_argument("unknown graph format '" + name + "' (expected metis or edgelist)");
}

ReadResult read_graph(const std::filesystem::path& path, GraphFormat format) {
  return format == GraphFormat::metis ? read_metis(path) : read_edge_list(path);
}

std::string render_svg(const Graph& g, const Layout& x, const SvgOptions& opts) {
  if (static_cast<NodeId>(x.size()) != g.node_count()) throw DataError("layout size does not match graph");
  require_finite(x);
  double minx = 0.0, miny = 0.0, maxx = 0.0, maxy = 0.0;
  if (!x.empty()) {
    minx = maxx = x[0].x;
    miny = maxy = x[0].y;
    for (const Vec2& p : x) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  double extent = std::max(maxx - minx, maxy - miny);
  if (extent <= 0.0) extent = 1.0;
  const double margin = 0.02 * extent;
  const double vb_x = minx - margin;
  const double vb_y = miny - margin;
  const double vb_w = (maxx - minx) + 2.0 * margin;
  const double vb_h = (maxy - miny) + 2.0 * margin;
  const double height_px = opts.width_px * vb_h / vb_w;
  const double unit_per_px = vb_w / opts.width_px;

  const double m = static_cast<double>(g.edge_count());
  const double scale = std::max(1.0, m / 1000.0);
  const double stroke_px = std::clamp(1.5 / std::sqrt(scale), 0.1, 1.5);
  const double opacity = std::clamp(1.0 / (1.0 + std::log10(scale)), 0.15, 1.0);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(opts.width_px) << "\" height=\""
      << svg_num(height_px) << "\" viewBox=\"" << svg_num(vb_x) << ' ' << svg_num(vb_y) << ' ' << svg_num(vb_w)
      << ' ' << svg_num(vb_h) << "\">\n";
  out << "<rect x=\"" << svg_num(vb_x) << "\" y=\"" << svg_num(vb_y) << "\" width=\"" << svg_num(vb_w)
      << "\" height=\"" << svg_num(vb_h) << "\" fill=\"white\"/>\n";
  out << "<g stroke=\"black\" stroke-width=\"" << svg_num(stroke_px * unit_per_px) << "\" stroke-opacity=\""
      << svg_num(opacity) << "\" stroke-linecap=\"round\">\n";
  for (const EdgeSpec& e : g.edges()) {
    out << "<line x1=\"" << svg_num(x[e.u].x) << "\" y1=\"" << svg_num(x[e.u].y) << "\" x2=\"" << svg_num(x[e.v].x)
        << "\" y2=\"" << svg_num(x[e.v].y) << "\"/>\n";
  }
  out << "</g>\n";
  if (opts.draw_nodes) {
    const double r = opts.node_radius > 0.0 ? opts.node_radius : 2.0 * stroke_px * unit_per_px;
    out << "<g fill=\"#c0392b\">\n";
    for (const Vec2& p : x) {
      out << "<circle cx=\"" << svg_num(p.x) << "\" cy=\"" << svg_num(p.y) << "\" r=\"" << svg_num(r) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

} // namespace maxent
