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
#include <string>
#include <vector>

#include "ample/quant.hpp"
#include "ample/sim/scoreboard.hpp"

namespace ample::sim {

/// Timeline of one node in one layer. Cycles are absolute.
struct NodeRecord {
  std::size_t layer = 0;
  NodeId node = 0;
  std::size_t slot = 0;
  std::size_t degree = 0;
  Precision precision = Precision::Float32;
  Cycle program_cycle = 0;   // host finished writing the slot
  Cycle prefetch_start = 0;  // PrefetchAdjacency entered
  Cycle adjacency_done = 0;
  Cycle agg_start = 0;       // Aggregating entered (PEs granted)
  Cycle fetch_done = 0;      // last neighbor embedding arrived
  Cycle buffered = 0;
  Cycle transform_start = 0;
  Cycle done_cycle = 0;

  Cycle latency() const noexcept { return done_cycle - program_cycle; }
};

inline constexpr std::size_t kHistogramBins = 24;

/// Total and log2-binned residency per state. Bin k holds durations in
/// [2^(k-1), 2^k), bin 0 holds zero.
struct PhaseStats {
  std::uint64_t visits = 0;
  std::uint64_t total_cycles = 0;
  std::array<std::uint64_t, kHistogramBins> histogram{};

  void add(Cycle duration);
};

struct LayerRecord {
  Cycle start = 0;
  Cycle weights_ready = 0;
  Cycle programming_start = 0;
  Cycle end = 0;
};

struct SimCounters {
  std::uint64_t events = 0;
  std::uint64_t bank_conflicts = 0;
  std::uint64_t memory_requests = 0;
  std::uint64_t words_requested = 0;
  std::uint64_t words_delivered = 0;
  std::uint64_t noc_packets = 0;
  std::uint64_t flits_injected = 0;
  std::uint64_t flits_consumed = 0;
  std::uint64_t link_stalls = 0;
  std::uint64_t partial_responses = 0;
  std::uint64_t nodes_programmed = 0;
  std::uint64_t slots_freed = 0;
  std::uint64_t buffer_stalls = 0;
  std::uint64_t pe_queue_waits = 0;
};

struct SimReport {
  std::string scheduler;
  Cycle total_cycles = 0;
  std::size_t num_nodes = 0;
  std::size_t num_layers = 0;
  std::size_t num_slots = 0;
  double clock_mhz = 200.0;
  double throughput = 0.0;  // nodes per cycle
  double latency_ms = 0.0;  // total_cycles at clock_mhz
  double nodes_per_ms = 0.0;
  double mean_node_latency = 0.0;
  Cycle max_node_latency = 0;
  std::array<std::size_t, 3> subnet_cores{};
  std::array<PhaseStats, kNumNodeStates> phases{};
  std::vector<LayerRecord> layers;
  SimCounters counters;

  void finalize();  // derives throughput and wall-clock fields
  std::string to_json() const;
};

}  // namespace ample::sim
