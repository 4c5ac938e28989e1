/*
 * Copyright 2026 The amplesim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "ample/config.hpp"
#include "ample/experiment.hpp"
#include "ample/gnn.hpp"
#include "ample/graph.hpp"
#include "ample/quant.hpp"
#include "ample/sim/noc.hpp"
#include "ample/sim/scoreboard.hpp"
#include "ample/sim/simulator.hpp"

namespace py = pybind11;
using namespace ample;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() == 1) {
    Matrix m(static_cast<std::size_t>(a.shape(0)), 1);
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
  }
  if (a.ndim() != 2) throw ShapeError("expected a 1-D or 2-D array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

py::array_t<double> to_array(const Matrix& m) {
  py::array_t<double> a({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), a.mutable_data());
  return a;
}

std::vector<double> to_vector(const Array& a) { return {a.data(), a.data() + a.size()}; }

ExperimentConfig config_from(const std::map<std::string, std::string>& overrides) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : overrides) cfg.set(k, v);
  return cfg;
}

py::dict records_dict(const std::vector<sim::NodeRecord>& recs) {
  std::vector<std::size_t> layer, node, degree, slot;
  std::vector<std::string> prec;
  std::vector<Cycle> program, agg, fetch, done;
  for (const auto& r : recs) {
    layer.push_back(r.layer);
    node.push_back(r.node);
    degree.push_back(r.degree);
    slot.push_back(r.slot);
    prec.emplace_back(to_string(r.precision));
    program.push_back(r.program_cycle);
    agg.push_back(r.agg_start);
    fetch.push_back(r.fetch_done);
    done.push_back(r.done_cycle);
  }
  py::dict d;
  d["layer"] = layer;
  d["node_id"] = node;
  d["degree"] = degree;
  d["slot"] = slot;
  d["precision"] = prec;
  d["program_cycle"] = program;
  d["agg_start"] = agg;
  d["fetch_done"] = fetch;
  d["done_cycle"] = done;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ample, m) {
  m.doc() = "amplesim core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IngestionError>(m, "IngestionError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<DeadlockError>(m, "DeadlockError", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", [](const Graph& g) { return g.csr_neighbors().size(); })
      .def_property_readonly("undirected", &Graph::undirected)
      .def_property_readonly("offsets",
                             [](const Graph& g) { return std::vector<std::size_t>(g.csr_offsets().begin(), g.csr_offsets().end()); })
      .def_property_readonly("neighbor_ids",
                             [](const Graph& g) { return std::vector<NodeId>(g.csr_neighbors().begin(), g.csr_neighbors().end()); })
      .def("degree", &Graph::degree)
      .def("degrees", &Graph::degrees)
      .def("neighbors", [](const Graph& g, NodeId v) {
        if (v >= g.num_nodes()) throw py::index_error("node out of range");
        std::vector<std::pair<NodeId, double>> out;
        for (const auto& nb : g.neighbors(v)) out.emplace_back(nb.id, nb.weight);
        return out;
      });

  m.def(
      "build_csr",
      [](const std::vector<std::tuple<NodeId, NodeId, double>>& edges, std::size_t n, bool undirected) {
        std::vector<Edge> es;
        for (const auto& [s, d, w] : edges) es.push_back({s, d, w});
        return build_csr(es, n, undirected);
      },
      py::arg("edges"), py::arg("num_nodes"), py::arg("undirected") = false);
  m.def("load_edge_list", [](const std::string& p, std::size_t n, bool u) { return load_edge_list(p, n, u); },
        py::arg("path"), py::arg("num_nodes"), py::arg("undirected") = false);
  m.def("generate_power_law_graph", &generate_power_law_graph, py::arg("n"), py::arg("gamma"), py::arg("max_degree"),
        py::arg("seed"));
  m.def("gcn_norm_factors", &gcn_norm_factors);

  m.def("gcn_layer", [](const Graph& g, const Array& x, const Array& w) {
    LayerWeights lw;
    lw.w = to_matrix(w);
    return to_array(gcn_layer(g, to_matrix(x), lw));
  });
  m.def(
      "gin_layer",
      [](const Graph& g, const Array& x, const std::vector<std::tuple<Array, Array, std::string>>& mlp, double eps) {
        LayerWeights lw;
        lw.eps = eps;
        for (const auto& [w, b, act] : mlp) lw.mlp.push_back({to_matrix(w), to_vector(b), parse_activation(act)});
        return to_array(gin_layer(g, to_matrix(x), lw));
      },
      py::arg("g"), py::arg("x"), py::arg("mlp"), py::arg("eps") = 0.0);
  m.def(
      "sage_layer",
      [](const Graph& g, const Array& x, const Array& w1, const Array& w2, const Array& w3, const Array& b,
         const std::string& sigma) {
        LayerWeights lw;
        lw.w1 = to_matrix(w1);
        lw.w2 = to_matrix(w2);
        lw.w3 = to_matrix(w3);
        lw.b = to_vector(b);
        return to_array(sage_layer(g, to_matrix(x), lw, parse_activation(sigma)));
      },
      py::arg("g"), py::arg("x"), py::arg("w1"), py::arg("w2"), py::arg("w3"), py::arg("b"), py::arg("sigma") = "relu");

  m.def(
      "quantize",
      [](double x, double scale, double zero_point, int bits) {
        return quantize(x, QuantParams::for_bits(bits, scale, zero_point));
      },
      py::arg("x"), py::arg("scale"), py::arg("zero_point") = 0.0, py::arg("bits") = 8);
  m.def(
      "dequantize",
      [](std::int32_t q, double scale, double zero_point, int bits) {
        return dequantize(q, QuantParams::for_bits(bits, scale, zero_point));
      },
      py::arg("code"), py::arg("scale"), py::arg("zero_point") = 0.0, py::arg("bits") = 8);
  m.def(
      "calibrate",
      [](const Array& t, int bits) {
        const auto v = to_vector(t);
        const QuantParams qp = calibrate(v, bits);
        return py::make_tuple(qp.scale, qp.zero_point, qp.q_min, qp.q_max);
      },
      py::arg("tensor"), py::arg("bits") = 8);
  m.def("protection_probabilities", &protection_probabilities);
  m.def(
      "degree_quant_assign",
      [](const Graph& g, double pmin, double pmax, std::uint64_t seed) {
        std::vector<std::string> out;
        for (Precision p : degree_quant_assign(g, pmin, pmax, seed).precision) out.emplace_back(to_string(p));
        return out;
      },
      py::arg("g"), py::arg("p_min"), py::arg("p_max"), py::arg("seed"));
  m.def(
      "nodeslot_allocation",
      [](const std::vector<std::uint64_t>& rmax, const std::vector<std::uint64_t>& cost, bool strict) {
        if (rmax.size() != kNumResources || cost.size() != kNumResources) {
          throw ConfigError("nodeslot_allocation: expected 4 budgets and 4 costs (LUT, FF, BRAM, DSP)");
        }
        ResourceBudget b;
        for (std::size_t r = 0; r < kNumResources; ++r) {
          b[Precision::Float32].max[r] = rmax[r];
          b[Precision::Float32].cost[r] = cost[r];
        }
        return nodeslot_allocation(b, Precision::Float32, strict);
      },
      py::arg("budget"), py::arg("cost"), py::arg("strict_feasibility") = false);

  m.def("route_flit", [](std::pair<int, int> cur, std::pair<int, int> dest) -> py::object {
    const auto next = sim::route_flit({cur.first, cur.second}, {dest.first, dest.second});
    if (!next) return py::none();
    return py::make_tuple(next->x, next->y);
  });
  m.def("choose_slot", [](std::uint64_t bits, std::size_t n) { return sim::choose_slot(sim::SlotMask::from_bits(bits, n)); },
        py::arg("mask"), py::arg("n") = 64);

  m.def("config_keys", [] {
    std::vector<std::string> k;
    for (const auto& c : config_keys()) k.push_back(c.name);
    return k;
  });
  m.def("default_config", [] { return ExperimentConfig{}.to_ini(); });

  py::class_<Workload>(m, "Workload")
      .def_property_readonly("graph", [](const Workload& w) { return w.graph; })
      .def_property_readonly("features", [](const Workload& w) { return to_array(w.features); })
      .def_property_readonly("num_layers", [](const Workload& w) { return w.layers.size(); })
      .def_property_readonly("precisions", [](const Workload& w) {
        std::vector<std::string> out;
        for (Precision p : w.assignment.precision) out.emplace_back(to_string(p));
        return out;
      });

  m.def(
      "build_workload", [](const std::map<std::string, std::string>& o) { return build_workload(config_from(o)); },
      py::arg("overrides") = std::map<std::string, std::string>{},
      "Builds graph, features, weights and precisions from 'section.key' overrides.");
  m.def("reference", [](const Workload& w) { return to_array(run_model(w.graph, w.features, w.model, w.layers)); });
  m.def(
      "simulate",
      [](const Workload& w, const std::map<std::string, std::string>& o) {
        const ExperimentConfig cfg = config_from(o);
        sim::SimResult r;
        {
          py::gil_scoped_release nogil;
          r = sim::simulate(w.graph, w.model, w.layers, w.features, w.assignment, cfg.hw);
        }
        py::dict d;
        d["output"] = to_array(r.output);
        d["report"] = py::module_::import("json").attr("loads")(r.report.to_json());
        d["nodes"] = records_dict(r.nodes);
        d["trace_length"] = r.trace.size();
        const auto audit = sim::audit_trace(r.trace, w.graph.num_nodes(), w.layers.size());
        d["audit_ok"] = audit.ok;
        return d;
      },
      py::arg("workload"), py::arg("overrides") = std::map<std::string, std::string>{},
      "Runs the simulator; hardware and scheduler keys are read from the overrides.");
}
