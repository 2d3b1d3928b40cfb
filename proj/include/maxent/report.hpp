#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maxent/coarsening.hpp"
#include "maxent/graph.hpp"
#include "maxent/layout_engine.hpp"

namespace maxent {

/// One row of the benchmark table. Metric columns are empty when metric
/// evaluation was disabled or the graph exceeded the all-pairs size limit.
struct RunReport {
  std::string graph;
  NodeId n = 0;
  EdgeIndex m = 0;
  int h = 0;
  int threads = 1;
  std::string mode = "static";
  std::uint64_t seed = 1;
  double t_coarsen_s = 0.0;
  double t_optimize_s = 0.0;
  double t_total_s = 0.0;
  std::optional<double> full_stress;
  std::optional<double> maxent;
  std::optional<double> scale;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline constexpr const char* kReportHeader =
    "graph,n,m,h,threads,mode,seed,t_coarsen_s,t_optimize_s,t_total_s,F,M,scale";

void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const RunReport& r);
/// Parses a CSV produced by write_report_header/write_report_row.
std::vector<RunReport> parse_reports(std::istream& in);

struct QualityMetrics {
  double scale = 1.0;
  double full_stress = 0.0; // of the optimally scaled layout
  double maxent = 0.0;      // of the optimally scaled layout at alpha
};

/// Evaluation protocol for a finished layout: jitter coincident nodes, find
/// the stress-optimal scale, then report full stress and maxent-stress of the
/// scaled layout.
QualityMetrics evaluate_layout(const Graph& g, const Layout& x, double alpha, std::uint64_t seed,
                               NodeId limit = 200000, int threads = 0);

} // namespace maxent
