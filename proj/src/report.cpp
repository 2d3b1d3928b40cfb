#include "maxent/report.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "maxent/io.hpp"
#include "maxent/metrics.hpp"

namespace maxent {

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T cell_value(const std::string& s, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad CSV value '" + s + "'", line);
  return v;
}

} // namespace

void write_report_header(std::ostream& out) { out << kReportHeader << '\n'; }

void write_report_row(std::ostream& out, const RunReport& r) {
  if (r.graph.find_first_of(",\n") != std::string::npos) throw DataError("graph name must not contain ',' or newline");
  out << r.graph << ',' << r.n << ',' << r.m << ',' << r.h << ',' << r.threads << ',' << r.mode << ',' << r.seed
      << ',' << num(r.t_coarsen_s) << ',' << num(r.t_optimize_s) << ',' << num(r.t_total_s) << ','
      << opt(r.full_stress) << ',' << opt(r.maxent) << ',' << opt(r.scale) << '\n';
}

std::vector<RunReport> parse_reports(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kReportHeader) throw ParseError("missing or unexpected CSV header", 1);
  std::vector<RunReport> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 13) throw ParseError("expected 13 columns, got " + std::to_string(c.size()), line_no);
    RunReport r;
    r.graph = c[0];
    r.n = cell_value<NodeId>(c[1], line_no);
    r.m = cell_value<EdgeIndex>(c[2], line_no);
    r.h = cell_value<int>(c[3], line_no);
    r.threads = cell_value<int>(c[4], line_no);
    r.mode = c[5];
    r.seed = cell_value<std::uint64_t>(c[6], line_no);
    r.t_coarsen_s = cell_value<double>(c[7], line_no);
    r.t_optimize_s = cell_value<double>(c[8], line_no);
    r.t_total_s = cell_value<double>(c[9], line_no);
    if (!c[10].empty()) r.full_stress = cell_value<double>(c[10], line_no);
    if (!c[11].empty()) r.maxent = cell_value<double>(c[11], line_no);
    if (!c[12].empty()) r.scale = cell_value<double>(c[12], line_no);
    out.push_back(std::move(r));
  }
  return out;
}

QualityMetrics evaluate_layout(const Graph& g, const Layout& x, double alpha, std::uint64_t seed, NodeId limit,
                               int threads) {
  const Layout jittered = jitter_coincident(x, seed);
  const StreamedStress st = full_stress_streamed(g, jittered, limit, threads);
  QualityMetrics q;
  q.scale = st.scale;
  q.full_stress = st.stress_scaled;
  q.maxent = maxent_stress(g, scaled(jittered, st.scale), alpha, threads);
  return q;
}

} // namespace maxent
