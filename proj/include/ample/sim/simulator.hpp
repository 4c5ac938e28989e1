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

#include <array>
#include <string_view>
#include <vector>

#include "ample/gnn.hpp"
#include "ample/graph.hpp"
#include "ample/quant.hpp"
#include "ample/sim/audit.hpp"
#include "ample/sim/memory.hpp"
#include "ample/sim/report.hpp"
#include "ample/sim/systolic.hpp"

namespace ample::sim {

enum class Scheduler { EventDriven, DoubleBuffered };
std::string_view to_string(Scheduler s);
Scheduler parse_scheduler(std::string_view s);

struct MeshDims {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t cores() const noexcept { return rows * cols; }
};

// Near-square mesh holding n cores: cols = ceil(sqrt n), rows = ceil(n / cols).
MeshDims mesh_for_cores(std::size_t n);

struct SimConfig {
  std::size_t num_slots = 64;
  Scheduler scheduler = Scheduler::EventDriven;
  std::size_t batch_size = 64;  // double-buffered only

  Cycle host_program_cycles = 1;
  Cycle nid_decode_cycles = 1;

  MemoryConfig memory;
  std::size_t message_queue_capacity = 16;
  bool partial_response = true;

  std::size_t core_width = 16;  // features per aggregation core
  std::size_t flit_words = 4;
  std::array<MeshDims, 3> mesh{};  // zero: derive from the budget
  ResourceBudget budget = ResourceBudget::synthetic_default();
  bool strict_feasibility = false;

  std::size_t abf_rows = 0;  // zero: one row per physical slot
  SystolicConfig systolic;
  WeightChannelConfig weight_channel;

  double clock_mhz = 200.0;
  bool record_trace = true;
};

MeshDims resolve_mesh(const SimConfig& cfg, Precision p);

struct SimResult {
  SimReport report;
  FeatureMatrix output;
  std::vector<NodeRecord> nodes;  // layer-major, node order within a layer
  std::vector<TraceEntry> trace;
};

/// Thrown when the event queue drains with nodes still in flight.
class SimulationDeadlock : public DeadlockError {
 public:
  SimulationDeadlock(const std::string& what, Cycle at, std::vector<TraceEntry> trace)
      : DeadlockError(what, at), trace_(std::move(trace)) {}
  const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

 private:
  std::vector<TraceEntry> trace_;
};

/// Runs every layer through the simulated pipeline under cfg.scheduler.
SimResult simulate(const Graph& g, const ModelConfig& model, const std::vector<LayerWeights>& layers,
                   const FeatureMatrix& x, const PrecisionAssignment& assignment, const SimConfig& cfg);

// Event-driven host loop: a node is programmed as soon as any slot frees.
SimResult host_run(const Graph& g, const ModelConfig& model, const std::vector<LayerWeights>& layers,
                   const FeatureMatrix& x, const PrecisionAssignment& assignment, SimConfig cfg);

/// Baseline: fixed batches of cfg.batch_size nodes. A batch aggregates only
/// once it is fully fetched and the previous batch is fully done. Batch k+1
/// is programmed into slots freed by batch k and prefetches while k computes;
/// at most two batches are resident. Same slot count as the event-driven run,
/// batch_size <= num_slots, no partial response.
SimResult simulate_double_buffered(const Graph& g, const ModelConfig& model, const std::vector<LayerWeights>& layers,
                                   const FeatureMatrix& x, const PrecisionAssignment& assignment, SimConfig cfg);

}  // namespace ample::sim
