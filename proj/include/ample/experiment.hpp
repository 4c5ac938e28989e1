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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ample/config.hpp"
#include "ample/sim/simulator.hpp"

namespace ample {

/// Sub-seeds: derive_seed(seed, "graph" | "features" | "weights" | "precision").
struct Workload {
  Graph graph;
  FeatureMatrix features;
  ModelConfig model;
  std::vector<LayerWeights> layers;
  PrecisionAssignment assignment;
};

Graph build_graph(const ExperimentConfig& cfg);
Workload build_workload(const ExperimentConfig& cfg);

struct RunRecord {
  sim::SimResult result;
  double oracle_error = 0.0;  // max relative error against the float reference
  std::uint64_t output_hash = 0;
  std::uint64_t seed = 0;
};

RunRecord run_once(const ExperimentConfig& cfg, const Workload& w);

// summary.csv columns, in order.
const std::vector<std::string>& summary_columns();
std::vector<std::string> summary_fields(const RunRecord& r);
// per_node.csv columns; one row per node, first-layer program to last-layer done.
const std::vector<std::string>& per_node_columns();

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitDeadlock = 2, kExitInternal = 3 };

struct RunOptions {
  std::filesystem::path out_dir;
  std::vector<sim::Scheduler> schedulers;  // empty: cfg.hw.scheduler
  bool trace = false;
};

/// run verb: summary.csv, per_node.csv (per_node_<scheduler>.csv for extra
/// schedulers), run.json, config.ini, trace.txt on request. A deadlock
/// writes deadlock_trace.txt and returns kExitDeadlock.
int run_command(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& out, std::ostream& err);

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};
// "section.key=v1,v2,..."; the key must exist.
GridAxis parse_grid_axis(std::string_view text);

/// Cartesian product over axes, first axis outermost, schedulers innermost.
/// Columns: the grid keys, then summary_columns().
int sweep_command(const ExperimentConfig& cfg, const std::vector<GridAxis>& axes, const RunOptions& opt,
                  std::ostream& out, std::ostream& err);

std::string stats_text(const Graph& g, std::size_t feature_dim);

}  // namespace ample
