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

#include "ample/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ample/rng.hpp"
#include "json.hpp"

namespace ample {

namespace fs = std::filesystem;

Graph build_graph(const ExperimentConfig& cfg) {
  const auto& gs = cfg.graph;
  if (gs.source == GraphSource::File) {
    if (gs.path.empty()) throw ConfigError("graph.path must be set when graph.source = file");
    return load_edge_list(gs.path, gs.num_nodes, gs.undirected);
  }
  const std::uint64_t seed = derive_seed(cfg.run.seed, "graph");
  try {
    if (gs.generator == Generator::PowerLaw) {
      // The default cap assumes large graphs; small ones cap at n - 1.
      const std::size_t cap = gs.num_nodes > 1 ? std::min(gs.max_degree, gs.num_nodes - 1) : gs.max_degree;
      return generate_power_law_graph(gs.num_nodes, gs.gamma, cap, seed);
    }
    return generate_uniform_degree_graph(gs.num_nodes, gs.degree, seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
}

Workload build_workload(const ExperimentConfig& cfg) {
  const auto& ms = cfg.model;
  if (ms.layers == 0) throw ConfigError("model.layers must be at least 1");
  if (ms.in_features == 0 || ms.hidden == 0 || ms.out_features == 0) throw ConfigError("model widths must be positive");
  if (!(ms.gin_eps >= 0.0)) throw ConfigError("model.gin_eps must be >= 0");
  Workload w{build_graph(cfg), {}, ModelConfig::preset(ms.kind), {}, {}};
  if (ms.kind == ModelKind::GraphSAGE) w.model.sigma = ms.sigma;

  Rng frng(derive_seed(cfg.run.seed, "features"));
  w.features = make_random_features(w.graph.num_nodes(), ms.in_features, frng);
  Rng wrng(derive_seed(cfg.run.seed, "weights"));
  std::size_t in = ms.in_features;
  for (std::size_t l = 0; l < ms.layers; ++l) {
    w.layers.push_back(make_random_weights(ms.kind, {in, ms.hidden, ms.out_features}, wrng, ms.gin_eps));
    in = ms.out_features;
  }

  const auto& ps = cfg.precision;
  const std::size_t n = w.graph.num_nodes();
  switch (ps.policy) {
    case PrecisionPolicy::AllFloat:
      w.assignment = PrecisionAssignment::uniform(n, Precision::Float32);
      break;
    case PrecisionPolicy::DegreeQuant:
      if (!(0.0 <= ps.p_min && ps.p_min <= ps.p_max && ps.p_max <= 1.0)) {
        throw ConfigError("precision: need 0 <= p_min <= p_max <= 1");
      }
      w.assignment = degree_quant_assign(w.graph, ps.p_min, ps.p_max, derive_seed(cfg.run.seed, "precision"), ps.low);
      break;
    case PrecisionPolicy::Threshold:
      w.assignment = degree_threshold_assign(w.graph, ps.int4_max_degree, ps.float_min_degree);
      break;
    case PrecisionPolicy::File:
      if (ps.path.empty()) throw ConfigError("precision.path must be set when precision.policy = file");
      w.assignment = read_assignment(ps.path, n);
      break;
  }
  return w;
}

RunRecord run_once(const ExperimentConfig& cfg, const Workload& w) {
  RunRecord r;
  r.seed = cfg.run.seed;
  r.result = sim::simulate(w.graph, w.model, w.layers, w.features, w.assignment, cfg.hw);
  const FeatureMatrix ref = run_model(w.graph, w.features, w.model, w.layers);
  r.oracle_error = max_relative_error(r.result.output, ref);
  r.output_hash = hash_matrix(r.result.output);
  return r;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> c{"total_cycles", "latency_ms_at_clock", "nodes_per_ms",
                                          "scheduler",    "seed",                "output_hash"};
  return c;
}

const std::vector<std::string>& per_node_columns() {
  static const std::vector<std::string> c{"node_id", "degree", "precision", "program_cycle", "done_cycle"};
  return c;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::vector<std::vector<std::string>> per_node_rows(const sim::SimResult& r, std::size_t n) {
  std::vector<std::vector<std::string>> rows;
  if (n == 0) return rows;
  const std::size_t layers = r.nodes.size() / n;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& first = r.nodes[v];
    const auto& last = r.nodes[(layers - 1) * n + v];
    rows.push_back({std::to_string(v), std::to_string(first.degree), std::string(to_string(first.precision)),
                    std::to_string(first.program_cycle), std::to_string(last.done_cycle)});
  }
  return rows;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + "\"";
}

std::vector<sim::Scheduler> schedulers_of(const ExperimentConfig& cfg, const RunOptions& opt) {
  return opt.schedulers.empty() ? std::vector<sim::Scheduler>{cfg.hw.scheduler} : opt.schedulers;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream o(p);
  if (!o) throw Error("cannot write '" + p.string() + "'");
  o << s;
}

int invalid(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
  return kExitInvalid;
}

}  // namespace

std::vector<std::string> summary_fields(const RunRecord& r) {
  const auto& rep = r.result.report;
  return {std::to_string(rep.total_cycles), fmt(rep.latency_ms), fmt(rep.nodes_per_ms), rep.scheduler,
          std::to_string(r.seed), hex(r.output_hash)};
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream o(path);
  if (!o) throw Error("cannot write '" + path.string() + "'");
  auto line = [&o](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) o << (i ? "," : "") << csv_escape(cells[i]);
    o << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

int run_command(const ExperimentConfig& cfg_in, const RunOptions& opt, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = cfg_in;
  Workload w;
  try {
    w = build_workload(cfg);
  } catch (const Error& e) {
    return invalid(err, e);
  } catch (const std::invalid_argument& e) {
    return invalid(err, e);
  }
  fs::create_directories(opt.out_dir);

  std::vector<std::vector<std::string>> summary;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  const auto scheds = schedulers_of(cfg, opt);
  for (std::size_t i = 0; i < scheds.size(); ++i) {
    cfg.hw.scheduler = scheds[i];
    cfg.hw.record_trace = opt.trace || cfg.run.trace;
    RunRecord r;
    try {
      r = run_once(cfg, w);
    } catch (const sim::SimulationDeadlock& d) {
      const fs::path dump = opt.out_dir / "deadlock_trace.txt";
      std::ofstream o(dump);
      sim::write_trace(o, d.trace());
      err << "error: " << d.what() << "\nevent trace written to " << dump.string() << '\n';
      return kExitDeadlock;
    } catch (const ConfigError& e) {
      return invalid(err, e);
    } catch (const ShapeError& e) {
      return invalid(err, e);
    }
    summary.push_back(summary_fields(r));
    const std::string tag = i == 0 ? "" : "_" + std::string(to_string(scheds[i]));
    write_csv(opt.out_dir / ("per_node" + tag + ".csv"), per_node_columns(), per_node_rows(r.result, w.graph.num_nodes()));
    if (cfg.hw.record_trace) {
      std::ofstream o(opt.out_dir / ("trace" + tag + ".txt"));
      sim::write_trace(o, r.result.trace);
    }
    const auto audit = sim::audit_trace(r.result.trace, w.graph.num_nodes(), w.layers.size());
    nlohmann::ordered_json j;
    j["scheduler"] = std::string(to_string(scheds[i]));
    j["oracle_max_relative_error"] = r.oracle_error;
    j["output_hash"] = hex(r.output_hash);
    j["protected_ratio"] = w.assignment.protected_ratio();
    if (cfg.hw.record_trace) j["audit_ok"] = audit.ok;
    j["report"] = nlohmann::ordered_json::parse(r.result.report.to_json());
    runs.push_back(std::move(j));
    out << to_string(scheds[i]) << ": total_cycles=" << r.result.report.total_cycles
        << " latency_ms=" << fmt(r.result.report.latency_ms) << " oracle_error=" << fmt(r.oracle_error) << '\n';
  }
  write_csv(opt.out_dir / "summary.csv", summary_columns(), summary);
  cfg.hw.scheduler = cfg_in.hw.scheduler;
  cfg.hw.record_trace = cfg_in.hw.record_trace;
  write_text(opt.out_dir / "config.ini", cfg_in.to_ini());
  nlohmann::ordered_json doc;
  doc["config"] = cfg_in.to_ini();
  doc["runs"] = runs;
  write_text(opt.out_dir / "run.json", doc.dump(2) + "\n");
  return kExitOk;
}

GridAxis parse_grid_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ConfigError("grid: expected section.key=v1,v2,... got '" + std::string(text) + "'");
  GridAxis a;
  a.key = std::string(text.substr(0, eq));
  ExperimentConfig probe;
  probe.get(a.key);  // throws for unknown keys
  std::string_view rest = text.substr(eq + 1);
  while (true) {
    const auto comma = rest.find(',');
    a.values.emplace_back(rest.substr(0, comma));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  for (const auto& v : a.values) probe.set(a.key, v);  // type-check every value up front
  return a;
}

int sweep_command(const ExperimentConfig& cfg_in, const std::vector<GridAxis>& axes, const RunOptions& opt,
                  std::ostream& out, std::ostream& err) {
  std::vector<std::string> header;
  for (const auto& a : axes) header.push_back(a.key);
  for (const auto& c : summary_columns()) header.push_back(c);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> idx(axes.size(), 0);
  const auto scheds = schedulers_of(cfg_in, opt);
  while (true) {
    ExperimentConfig cfg = cfg_in;
    std::vector<std::string> point;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      cfg.set(axes[k].key, axes[k].values[idx[k]]);
      point.push_back(axes[k].values[idx[k]]);
    }
    cfg.hw.record_trace = false;
    try {
      const Workload w = build_workload(cfg);
      for (auto s : scheds) {
        cfg.hw.scheduler = s;
        const RunRecord r = run_once(cfg, w);
        auto row = point;
        for (auto& f : summary_fields(r)) row.push_back(std::move(f));
        out << (rows.size() + 1) << ": " << to_string(s) << " total_cycles=" << r.result.report.total_cycles << '\n';
        rows.push_back(std::move(row));
      }
    } catch (const sim::SimulationDeadlock& d) {
      err << "error: " << d.what() << '\n';
      return kExitDeadlock;
    } catch (const Error& e) {
      return invalid(err, e);
    } catch (const std::invalid_argument& e) {
      return invalid(err, e);
    }
    // Odometer increment, last axis fastest.
    bool wrapped = true;
    for (std::size_t k = axes.size(); k-- > 0;) {
      if (++idx[k] < axes[k].values.size()) {
        wrapped = false;
        break;
      }
      idx[k] = 0;
    }
    if (wrapped) break;
  }
  fs::create_directories(opt.out_dir);
  write_csv(opt.out_dir / "sweep.csv", header, rows);
  return kExitOk;
}

std::string stats_text(const Graph& g, std::size_t feature_dim) {
  const DegreeStats s = degree_stats(g);
  std::ostringstream os;
  os << "num_nodes " << g.num_nodes() << '\n'
     << "num_edges " << g.csr_neighbors().size() << '\n'
     << "mean_degree " << std::setprecision(6) << s.mean << '\n'
     << "min_degree " << s.min << '\n'
     << "max_degree " << s.max << '\n'
     << "feature_dim " << feature_dim << '\n';
  return os.str();
}

}  // namespace ample
