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

#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ample/experiment.hpp"
#include "ample/sim/audit.hpp"

namespace ample::cli {

namespace {

struct Common {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string scheduler;
  bool trace = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config file (defaults when omitted)");
  cmd->add_option("--out-dir", c.out_dir, "output directory (overrides run.out_dir)");
  cmd->add_option("--seed", c.seed, "top-level seed (overrides run.seed)");
  cmd->add_option("--scheduler", c.scheduler, "event_driven | double_buffered | both");
  cmd->add_flag("--trace", c.trace, "write the state-transition trace");
  cmd->add_option("--set", c.overrides, "override one key, section.key=value (repeatable)");
}

ExperimentConfig resolve(const Common& c, RunOptions& opt) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + o + "'");
    cfg.set(o.substr(0, eq), o.substr(eq + 1));
  }
  if (c.seed) cfg.run.seed = *c.seed;
  if (!c.out_dir.empty()) cfg.run.out_dir = c.out_dir;
  if (c.trace) cfg.run.trace = true;
  opt.out_dir = cfg.run.out_dir;
  opt.trace = cfg.run.trace;
  if (c.scheduler == "both") {
    opt.schedulers = {sim::Scheduler::EventDriven, sim::Scheduler::DoubleBuffered};
  } else if (!c.scheduler.empty()) {
    cfg.hw.scheduler = sim::parse_scheduler(c.scheduler);
  }
  return cfg;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"amplesim: event-driven GNN accelerator simulator"};
  app.require_subcommand(1);

  Common run_c, sweep_c, trace_c, stats_c;
  auto* run = app.add_subcommand("run", "simulate one configuration");
  add_common(run, run_c);

  auto* sweep = app.add_subcommand("sweep", "simulate a parameter grid");
  add_common(sweep, sweep_c);
  std::vector<std::string> grid;
  sweep->add_option("--grid", grid, "axis section.key=v1,v2,... (repeatable)");

  auto* stats = app.add_subcommand("stats", "print graph statistics");
  add_common(stats, stats_c);
  std::string edge_list;
  std::size_t num_nodes = 0;
  bool undirected = false;
  stats->add_option("--edge-list", edge_list, "edge-list file (instead of the config graph)");
  stats->add_option("--num-nodes", num_nodes, "node count for --edge-list");
  stats->add_flag("--undirected", undirected, "treat --edge-list as undirected");

  auto* trace = app.add_subcommand("trace", "re-emit an event trace: audit a trace file, or simulate and print one");
  add_common(trace, trace_c);
  std::string input;
  std::string output;
  trace->add_option("--input", input, "existing trace file to audit and re-emit");
  trace->add_option("--output", output, "write the trace here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    RunOptions opt;
    if (*run) {
      const auto cfg = resolve(run_c, opt);
      return run_command(cfg, opt, out, err);
    }
    if (*sweep) {
      const auto cfg = resolve(sweep_c, opt);
      std::vector<GridAxis> axes;
      for (const auto& g : grid) axes.push_back(parse_grid_axis(g));
      return sweep_command(cfg, axes, opt, out, err);
    }
    if (*stats) {
      const auto cfg = resolve(stats_c, opt);
      if (!edge_list.empty()) {
        if (num_nodes == 0) throw ConfigError("--edge-list needs --num-nodes");
        out << stats_text(load_edge_list(edge_list, num_nodes, undirected), cfg.model.in_features);
      } else {
        out << stats_text(build_graph(cfg), cfg.model.in_features);
      }
      return kExitOk;
    }
    if (*trace) {
      std::vector<sim::TraceEntry> entries;
      std::size_t nodes = 0;
      std::size_t layers = 0;
      if (!input.empty()) {
        std::ifstream in(input);
        if (!in) throw ConfigError("trace: cannot open '" + input + "'");
        entries = sim::read_trace(in);
        for (const auto& e : entries) nodes = std::max<std::size_t>(nodes, e.node + 1);
        std::vector<std::size_t> done(nodes, 0);
        for (const auto& e : entries) done[e.node] += e.to == sim::NodeState::Done;
        layers = nodes ? done[0] : 0;
      } else {
        auto cfg = resolve(trace_c, opt);
        cfg.hw.record_trace = true;
        const Workload w = build_workload(cfg);
        entries = run_once(cfg, w).result.trace;
        nodes = w.graph.num_nodes();
        layers = w.layers.size();
      }
      const auto audit = sim::audit_trace(entries, nodes, layers);
      if (output.empty()) {
        sim::write_trace(out, entries);
      } else {
        std::ofstream o(output);
        sim::write_trace(o, entries);
      }
      err << "audit: " << (audit.ok ? "ok" : "FAILED") << ", " << audit.transitions << " transitions, "
          << audit.completions << " completions\n";
      for (const auto& p : audit.problems) err << "  " << p << '\n';
      return audit.ok ? kExitOk : kExitInvalid;
    }
  } catch (const sim::SimulationDeadlock& e) {
    err << "error: " << e.what() << '\n';
    return kExitDeadlock;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInvalid;
}

}  // namespace ample::cli
