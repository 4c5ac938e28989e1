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

#include "ample/sim/report.hpp"

#include <algorithm>
#include <bit>

#include "json.hpp"

namespace ample::sim {

void PhaseStats::add(Cycle duration) {
  ++visits;
  total_cycles += duration;
  const std::size_t bin = duration == 0 ? 0 : std::min<std::size_t>(std::bit_width(duration), kHistogramBins - 1);
  ++histogram[bin];
}

void SimReport::finalize() {
  throughput = total_cycles ? static_cast<double>(num_nodes) / static_cast<double>(total_cycles) : 0.0;
  latency_ms = static_cast<double>(total_cycles) / (clock_mhz * 1000.0);
  nodes_per_ms = latency_ms > 0.0 ? static_cast<double>(num_nodes) / latency_ms : 0.0;
}

std::string SimReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["scheduler"] = scheduler;
  j["total_cycles"] = total_cycles;
  j["num_nodes"] = num_nodes;
  j["num_layers"] = num_layers;
  j["num_slots"] = num_slots;
  j["clock_mhz"] = clock_mhz;
  j["throughput_nodes_per_cycle"] = throughput;
  j["latency_ms_at_clock"] = latency_ms;
  j["nodes_per_ms"] = nodes_per_ms;
  j["mean_node_latency"] = mean_node_latency;
  j["max_node_latency"] = max_node_latency;
  j["subnet_cores"] = {{"float", subnet_cores[0]}, {"int8", subnet_cores[1]}, {"int4", subnet_cores[2]}};
  ordered_json phases = ordered_json::object();
  for (std::size_t s = 0; s < kNumNodeStates; ++s) {
    const auto& p = this->phases[s];
    phases[std::string(to_string(static_cast<NodeState>(s)))] = {
        {"visits", p.visits}, {"total_cycles", p.total_cycles}, {"log2_histogram", p.histogram}};
  }
  j["phases"] = phases;
  ordered_json layers_j = ordered_json::array();
  for (const auto& l : layers) {
    layers_j.push_back({{"start", l.start},
                        {"weights_ready", l.weights_ready},
                        {"programming_start", l.programming_start},
                        {"end", l.end}});
  }
  j["layers"] = layers_j;
  const auto& c = counters;
  j["counters"] = {{"events", c.events},
                   {"bank_conflicts", c.bank_conflicts},
                   {"memory_requests", c.memory_requests},
                   {"words_requested", c.words_requested},
                   {"words_delivered", c.words_delivered},
                   {"noc_packets", c.noc_packets},
                   {"flits_injected", c.flits_injected},
                   {"flits_consumed", c.flits_consumed},
                   {"link_stalls", c.link_stalls},
                   {"partial_responses", c.partial_responses},
                   {"nodes_programmed", c.nodes_programmed},
                   {"slots_freed", c.slots_freed},
                   {"buffer_stalls", c.buffer_stalls},
                   {"pe_queue_waits", c.pe_queue_waits}};
  return j.dump(2);
}

}  // namespace ample::sim
