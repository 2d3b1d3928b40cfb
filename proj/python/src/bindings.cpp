#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "maxent/dynamic.hpp"
#include "maxent/io.hpp"
#include "maxent/layout_engine.hpp"
#include "maxent/metrics.hpp"
#include "maxent/report.hpp"

namespace py = pybind11;
using namespace maxent;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using I64Array = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

Layout to_layout(const F64Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw std::invalid_argument("coordinates must have shape (n, 2)");
  Layout x(static_cast<std::size_t>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) x[i] = {r(i, 0), r(i, 1)};
  return x;
}

F64Array to_array(const Layout& x) {
  F64Array a({static_cast<py::ssize_t>(x.size()), py::ssize_t{2}});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < x.size(); ++i) {
    w(i, 0) = x[i].x;
    w(i, 1) = x[i].y;
  }
  return a;
}

Graph graph_from_arrays(NodeId n, const I64Array& edges, std::optional<F64Array> weights,
                        std::optional<F64Array> lengths) {
  if (edges.ndim() != 2 || edges.shape(1) != 2) throw std::invalid_argument("edges must have shape (m, 2)");
  const auto m = edges.shape(0);
  auto e = edges.unchecked<2>();
  std::vector<EdgeSpec> specs(static_cast<std::size_t>(m));
  for (py::ssize_t i = 0; i < m; ++i) {
    specs[i].u = static_cast<NodeId>(e(i, 0));
    specs[i].v = static_cast<NodeId>(e(i, 1));
  }
  auto fill = [&](const std::optional<F64Array>& arr, double EdgeSpec::*field, const char* name) {
    if (!arr) return;
    if (arr->ndim() != 1 || arr->shape(0) != m) throw std::invalid_argument(std::string(name) + " must have shape (m,)");
    auto r = arr->unchecked<1>();
    for (py::ssize_t i = 0; i < m; ++i) specs[i].*field = r(i);
  };
  fill(weights, &EdgeSpec::weight, "weights");
  fill(lengths, &EdgeSpec::length, "lengths");
  return Graph::build(n, specs);
}

OptimizerParams make_params(int h, int threads, std::uint64_t seed, double alpha_min, double alpha_factor,
                            int iters_per_round, double epsilon) {
  OptimizerParams p;
  p.approx_depth = h;
  p.threads = threads;
  p.seed = seed;
  p.alpha_min = alpha_min;
  p.alpha_factor = alpha_factor;
  p.iters_per_round = iters_per_round;
  p.epsilon = epsilon;
  return p;
}

HierarchyParams make_hierarchy(double f, double b, int lp_rounds) {
  HierarchyParams hp;
  hp.f0 = f;
  hp.b = b;
  hp.lp_rounds = lp_rounds;
  return hp;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multilevel maxent-stress graph layout";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init(&graph_from_arrays), py::arg("n"), py::arg("edges"), py::arg("weights") = py::none(),
           py::arg("lengths") = py::none())
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("degree", &Graph::degree)
      .def("neighbors", [](const Graph& g, NodeId u) {
        auto nb = g.neighbors(u);
        return std::vector<NodeId>(nb.begin(), nb.end());
      })
      .def("has_edge", &Graph::has_edge)
      .def("edges", [](const Graph& g) {
        const auto es = g.edges();
        I64Array out({static_cast<py::ssize_t>(es.size()), py::ssize_t{2}});
        auto w = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < es.size(); ++i) {
          w(i, 0) = es[i].u;
          w(i, 1) = es[i].v;
        }
        return out;
      })
      .def("is_connected", [](const Graph& g) { return is_connected(g); })
      .def("largest_component", [](const Graph& g) {
        auto c = largest_connected_component(g);
        return py::make_tuple(std::move(c.graph), std::move(c.old_to_new));
      })
      .def("__repr__", [](const Graph& g) {
        std::ostringstream s;
        s << "Graph(n=" << g.node_count() << ", m=" << g.edge_count() << ")";
        return s.str();
      });

  m.def("read_graph", [](const std::string& path, const std::string& format) {
    return read_graph(path, parse_format(format)).graph;
  }, py::arg("path"), py::arg("format") = "metis");
  m.def("parse_metis", [](const std::string& text) {
    std::istringstream in(text);
    return parse_metis(in).graph;
  });
  m.def("to_metis", [](const Graph& g) {
    std::ostringstream out;
    write_metis(out, g);
    return out.str();
  });

  m.def("layout", [](const Graph& g, int h, std::uint64_t seed, int threads, double f, double b, int lp_rounds,
                     double alpha_min, double alpha_factor, int iters_per_round, double epsilon) {
    const auto p = make_params(h, threads, seed, alpha_min, alpha_factor, iters_per_round, epsilon);
    MultilevelResult r;
    {
      py::gil_scoped_release release;
      r = layout_multilevel(g, p, make_hierarchy(f, b, lp_rounds), seed);
    }
    py::dict info;
    info["hierarchy_depth"] = r.hierarchy_depth;
    info["level_sizes"] = r.level_sizes;
    info["coarsen_seconds"] = r.coarsen_seconds;
    info["optimize_seconds"] = r.optimize_seconds;
    info["total_seconds"] = r.total_seconds;
    py::list levels;
    for (const LevelStats& ls : r.level_stats) {
      py::dict d;
      d["iterations"] = ls.iterations;
      d["rounds"] = ls.rounds;
      d["converged"] = ls.converged;
      d["final_relative_change"] = ls.final_relative_change;
      levels.append(d);
    }
    info["levels"] = levels;
    return py::make_tuple(to_array(r.layout), info);
  }, py::arg("graph"), py::arg("h") = 0, py::arg("seed") = 1, py::arg("threads") = 0, py::arg("f") = 20.0,
     py::arg("b") = 2.0, py::arg("lp_rounds") = 3, py::arg("alpha_min") = 0.008, py::arg("alpha_factor") = 0.3,
     py::arg("iters_per_round") = 2, py::arg("epsilon") = 1e-4);

  m.def("iterate_exact", [](const Graph& g, const F64Array& x, double alpha) {
    LevelContext ctx(g, adjusted_distances(g, true));
    return to_array(iterate_exact(ctx, to_layout(x), alpha));
  }, py::arg("graph"), py::arg("coords"), py::arg("alpha"));

  m.def("full_stress", [](const Graph& g, const F64Array& x, NodeId limit, int threads) {
    return full_stress_streamed(g, to_layout(x), limit, threads).stress_unscaled;
  }, py::arg("graph"), py::arg("coords"), py::arg("limit") = kDefaultApspLimit, py::arg("threads") = 0);
  m.def("optimal_scale", [](const Graph& g, const F64Array& x, NodeId limit, int threads) {
    return full_stress_streamed(g, to_layout(x), limit, threads).scale;
  }, py::arg("graph"), py::arg("coords"), py::arg("limit") = kDefaultApspLimit, py::arg("threads") = 0);
  m.def("maxent_stress", [](const Graph& g, const F64Array& x, double alpha, int threads) {
    return maxent_stress(g, to_layout(x), alpha, threads);
  }, py::arg("graph"), py::arg("coords"), py::arg("alpha") = 0.008, py::arg("threads") = 0);
  m.def("jitter", [](const F64Array& x, std::uint64_t seed) {
    return to_array(jitter_coincident(to_layout(x), seed));
  }, py::arg("coords"), py::arg("seed") = 1);
  m.def("evaluate", [](const Graph& g, const F64Array& x, double alpha, std::uint64_t seed, NodeId limit) {
    const QualityMetrics q = evaluate_layout(g, to_layout(x), alpha, seed, limit);
    py::dict d;
    d["scale"] = q.scale;
    d["F"] = q.full_stress;
    d["M"] = q.maxent;
    return d;
  }, py::arg("graph"), py::arg("coords"), py::arg("alpha") = 0.008, py::arg("seed") = 1,
     py::arg("limit") = kDefaultApspLimit);

  m.def("perturb", [](const Graph& g, double x_percent, int max_distance, std::uint64_t seed) {
    PerturbationParams pp;
    pp.x_percent = x_percent;
    pp.max_distance = max_distance;
    pp.seed = seed;
    Perturbation r = perturb(g, pp);
    return py::make_tuple(std::move(r.graph), r.removed, r.inserted, r.warnings);
  }, py::arg("graph"), py::arg("x_percent") = 1.0, py::arg("max_distance") = 2, py::arg("seed") = 1);
  m.def("update_layout", [](const Graph& q, const F64Array& prior, int h, std::uint64_t seed, int threads) {
    const Layout x0 = to_layout(prior);
    OptimizerParams p;
    p.approx_depth = h;
    p.threads = threads;
    UpdateResult r;
    {
      py::gil_scoped_release release;
      r = update_layout(q, x0, p, HierarchyParams{}, seed);
    }
    return to_array(r.layout);
  }, py::arg("graph"), py::arg("prior"), py::arg("h") = 0, py::arg("seed") = 1, py::arg("threads") = 0);

  m.def("render_svg", [](const Graph& g, const F64Array& x) { return render_svg(g, to_layout(x)); });
}
