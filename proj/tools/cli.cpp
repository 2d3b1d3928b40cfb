#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "maxent/dynamic.hpp"
#include "maxent/io.hpp"
#include "maxent/layout_engine.hpp"
#include "maxent/metrics.hpp"
#include "maxent/report.hpp"

namespace maxent::cli {

namespace {

struct GraphOptions {
  std::string path;
  std::string format = "metis";
  bool lcc = false;
};

struct EngineOptions {
  int h = 0;
  int threads = 0;
  std::uint64_t seed = 1;
  double f = 20.0;
  double b = 2.0;
  int lp_rounds = 3;
  double alpha_min = 0.008;
  double alpha_factor = 0.3;
  int iters_per_round = 2;
  double epsilon = 1e-4;
  int max_final_iters = 200;

  OptimizerParams optimizer() const {
    OptimizerParams p;
    p.alpha_min = alpha_min;
    p.alpha0 = std::max(1.0, alpha_min);
    p.alpha_factor = alpha_factor;
    p.iters_per_round = iters_per_round;
    p.epsilon = epsilon;
    p.approx_depth = h;
    p.max_final_iters = max_final_iters;
    p.threads = threads;
    p.seed = seed;
    return p;
  }
  HierarchyParams hierarchy() const {
    HierarchyParams hp;
    hp.f0 = f;
    hp.b = b;
    hp.lp_rounds = lp_rounds;
    return hp;
  }
};

struct MetricOptions {
  bool enabled = true;
  NodeId limit = kDefaultApspLimit;
};

void add_graph_options(CLI::App* cmd, GraphOptions& g) {
  cmd->add_option("--graph", g.path, "Input graph file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", g.format, "Input format")->check(CLI::IsMember({"metis", "edgelist"}));
  cmd->add_flag("--lcc", g.lcc, "Keep only the largest connected component");
}

void add_engine_options(CLI::App* cmd, EngineOptions& e) {
  cmd->add_option("--threads", e.threads, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", e.seed, "Random seed");
  cmd->add_option("--f", e.f, "Coarsening divisor f")->check(CLI::PositiveNumber);
  cmd->add_option("--b", e.b, "Coarsening base b")->check(CLI::Range(1.0 + 1e-12, 1e9));
  cmd->add_option("--lp-rounds", e.lp_rounds, "Label propagation rounds")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha-min", e.alpha_min, "Final entropy weight")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha-factor", e.alpha_factor, "Entropy weight reduction factor")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  cmd->add_option("--iters-per-round", e.iters_per_round, "Iterations per entropy weight")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", e.epsilon, "Relative change threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--max-final-iters", e.max_final_iters, "Iteration cap at the final entropy weight")
      ->check(CLI::PositiveNumber);
}

void add_metric_options(CLI::App* cmd, MetricOptions& m) {
  cmd->add_flag("--metrics,!--no-metrics", m.enabled, "Evaluate full stress and maxent-stress");
  cmd->add_option("--metrics-limit", m.limit, "Largest node count for all-pairs metrics")->check(CLI::PositiveNumber);
}

struct LoadedGraph {
  Graph graph;
  std::string name;
};

LoadedGraph load_graph(const GraphOptions& opts, std::ostream& err) {
  ReadResult r = read_graph(opts.path, parse_format(opts.format));
  if (r.stats.dropped_self_loops > 0 || r.stats.merged_duplicates > 0) {
    err << "warning: " << opts.path << ": dropped " << r.stats.dropped_self_loops << " self-loops, merged "
        << r.stats.merged_duplicates << " duplicate edges\n";
  }
  LoadedGraph out{std::move(r.graph), std::filesystem::path(opts.path).stem().string()};
  if (opts.lcc && !is_connected(out.graph)) {
    const NodeId before = out.graph.node_count();
    out.graph = largest_connected_component(out.graph).graph;
    err << "warning: kept largest connected component (" << out.graph.node_count() << " of " << before
        << " nodes)\n";
  }
  return out;
}

void fill_metrics(RunReport& r, const Graph& g, const Layout& x, const MetricOptions& m, const EngineOptions& e,
                  std::ostream& err) {
  if (!m.enabled) return;
  if (g.node_count() > m.limit) {
    err << "note: metrics skipped, " << g.node_count() << " nodes exceed --metrics-limit " << m.limit << '\n';
    return;
  }
  const QualityMetrics q = evaluate_layout(g, x, 0.008, e.seed, m.limit, e.threads);
  r.full_stress = q.full_stress;
  r.maxent = q.maxent;
  r.scale = q.scale;
}

void write_svg(const std::string& path, const Graph& g, const Layout& x) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << render_svg(g, x);
}

RunReport static_run(const LoadedGraph& lg, const EngineOptions& e, const MetricOptions& m, Layout& layout,
                     std::ostream& err) {
  const MultilevelResult res = layout_multilevel(lg.graph, e.optimizer(), e.hierarchy(), e.seed);
  layout = res.layout;
  RunReport r;
  r.graph = lg.name;
  r.n = lg.graph.node_count();
  r.m = lg.graph.edge_count();
  r.h = e.h;
  r.threads = resolve_threads(e.threads);
  r.mode = "static";
  r.seed = e.seed;
  r.t_coarsen_s = res.coarsen_seconds;
  r.t_optimize_s = res.optimize_seconds;
  r.t_total_s = res.total_seconds;
  fill_metrics(r, lg.graph, layout, m, e, err);
  return r;
}

} // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilevel maxent-stress graph layout"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  GraphOptions graph_opts;
  EngineOptions engine;
  MetricOptions metric_opts;

  // layout
  std::string out_path, svg_path;
  auto* layout_cmd = app.add_subcommand("layout", "Compute a layout from scratch");
  add_graph_options(layout_cmd, graph_opts);
  add_engine_options(layout_cmd, engine);
  add_metric_options(layout_cmd, metric_opts);
  layout_cmd->add_option("--h", engine.h, "Approximation depth (0 = exact)")->check(CLI::NonNegativeNumber);
  layout_cmd->add_option("--out", out_path, "Coordinate output file");
  layout_cmd->add_option("--svg", svg_path, "SVG drawing output file");

  // metrics
  std::string coords_path;
  double alpha = 0.008;
  auto* metrics_cmd = app.add_subcommand("metrics", "Evaluate a layout: scale, full stress, maxent-stress");
  add_graph_options(metrics_cmd, graph_opts);
  metrics_cmd->add_option("--coords", coords_path, "Coordinate file")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("--alpha", alpha, "Entropy weight for maxent-stress")->check(CLI::NonNegativeNumber);
  metrics_cmd->add_option("--seed", engine.seed, "Jitter seed");
  metrics_cmd->add_option("--threads", engine.threads, "Worker threads (0 = all)");
  metrics_cmd->add_option("--metrics-limit", metric_opts.limit, "Largest node count for all-pairs metrics");

  // dynamic
  double x_percent = 1.0;
  int max_distance = 2;
  std::string prior_path, mode = "update", graph_out_path;
  auto* dynamic_cmd = app.add_subcommand("dynamic", "Perturb a graph and lay out the result");
  add_graph_options(dynamic_cmd, graph_opts);
  add_engine_options(dynamic_cmd, engine);
  add_metric_options(dynamic_cmd, metric_opts);
  dynamic_cmd->add_option("--h", engine.h, "Approximation depth (0 = exact)")->check(CLI::NonNegativeNumber);
  dynamic_cmd->add_option("--x", x_percent, "Percent of edges to remove and insert")->check(CLI::Range(0.0, 99.999));
  dynamic_cmd->add_option("--D", max_distance, "Insertion distance bound")->check(CLI::Range(2, 1 << 30));
  dynamic_cmd->add_option("--prior-coords", prior_path, "Layout of the unperturbed graph")->check(CLI::ExistingFile);
  dynamic_cmd->add_option("--mode", mode, "update: reuse prior coordinates; scratch: lay out anew")
      ->check(CLI::IsMember({"update", "scratch"}));
  dynamic_cmd->add_option("--out", out_path, "Coordinate output file for the perturbed graph");
  dynamic_cmd->add_option("--out-graph", graph_out_path, "Edge list output file for the perturbed graph");
  dynamic_cmd->add_option("--svg", svg_path, "SVG drawing output file");

  // bench
  std::vector<std::string> bench_graphs;
  std::vector<int> bench_h{0};
  std::string csv_path;
  auto* bench_cmd = app.add_subcommand("bench", "Run (graph, h) configurations and emit CSV rows");
  bench_cmd->add_option("--graph", bench_graphs, "Input graph files")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--format", graph_opts.format, "Input format")->check(CLI::IsMember({"metis", "edgelist"}));
  bench_cmd->add_option("--h", bench_h, "Approximation depths")->check(CLI::NonNegativeNumber);
  add_engine_options(bench_cmd, engine);
  add_metric_options(bench_cmd, metric_opts);
  bench_cmd->add_option("--out", csv_path, "CSV output file (default stdout)");

  try {
    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (layout_cmd->parsed()) {
      const LoadedGraph lg = load_graph(graph_opts, err);
      Layout x;
      const RunReport r = static_run(lg, engine, metric_opts, x, err);
      if (!out_path.empty()) write_coords(out_path, x);
      if (!svg_path.empty()) write_svg(svg_path, lg.graph, x);
      write_report_header(out);
      write_report_row(out, r);
    } else if (metrics_cmd->parsed()) {
      const LoadedGraph lg = load_graph(graph_opts, err);
      const Layout x = read_coords(coords_path, lg.graph);
      const QualityMetrics q = evaluate_layout(lg.graph, x, alpha, engine.seed, metric_opts.limit, engine.threads);
      out << "F=" << q.full_stress << '\n' << "M=" << q.maxent << '\n' << "scale=" << q.scale << '\n';
    } else if (dynamic_cmd->parsed()) {
      const LoadedGraph lg = load_graph(graph_opts, err);
      Layout prior;
      if (!prior_path.empty()) {
        prior = read_coords(prior_path, lg.graph);
      } else if (mode == "update") {
        prior = layout_multilevel(lg.graph, engine.optimizer(), engine.hierarchy(), engine.seed).layout;
      }
      PerturbationParams pp;
      pp.x_percent = x_percent;
      pp.max_distance = max_distance;
      pp.seed = engine.seed;
      const Perturbation pert = perturb(lg.graph, pp);
      for (const std::string& w : pert.warnings) err << "warning: " << w << '\n';

      RunReport r;
      r.graph = lg.name;
      r.n = pert.graph.node_count();
      r.m = pert.graph.edge_count();
      r.h = engine.h;
      r.threads = resolve_threads(engine.threads);
      r.seed = engine.seed;
      Layout x;
      if (mode == "update") {
        const UpdateResult u = update_layout(pert.graph, prior, engine.optimizer(), engine.hierarchy(), engine.seed);
        x = u.layout;
        r.mode = "dynamic-update";
        r.t_coarsen_s = u.coarsen_seconds;
        r.t_optimize_s = u.optimize_seconds;
        r.t_total_s = u.total_seconds;
      } else {
        const MultilevelResult res = layout_multilevel(pert.graph, engine.optimizer(), engine.hierarchy(), engine.seed);
        x = res.layout;
        r.mode = "dynamic-scratch";
        r.t_coarsen_s = res.coarsen_seconds;
        r.t_optimize_s = res.optimize_seconds;
        r.t_total_s = res.total_seconds;
      }
      fill_metrics(r, pert.graph, x, metric_opts, engine, err);
      if (!out_path.empty()) write_coords(out_path, x);
      if (!svg_path.empty()) write_svg(svg_path, pert.graph, x);
      if (!graph_out_path.empty()) {
        std::ofstream g(graph_out_path);
        if (!g) throw DataError("cannot write '" + graph_out_path + "'");
        write_edge_list(g, pert.graph);
      }
      write_report_header(out);
      write_report_row(out, r);
    } else if (bench_cmd->parsed()) {
      std::ofstream file;
      std::ostream* sink = &out;
      if (!csv_path.empty()) {
        file.open(csv_path);
        if (!file) throw DataError("cannot write '" + csv_path + "'");
        sink = &file;
      }
      write_report_header(*sink);
      for (const std::string& path : bench_graphs) {
        GraphOptions go = graph_opts;
        go.path = path;
        go.lcc = true;
        const LoadedGraph lg = load_graph(go, err);
        for (int h : bench_h) {
          EngineOptions e = engine;
          e.h = h;
          Layout x;
          write_report_row(*sink, static_run(lg, e, metric_opts, x, err));
          sink->flush();
        }
      }
    }
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

} // namespace maxent::cli
