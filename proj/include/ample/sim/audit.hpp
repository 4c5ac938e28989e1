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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ample/sim/scoreboard.hpp"

namespace ample::sim {

/// One state transition; serialized as "cycle slot node_id from_state to_state".
struct TraceEntry {
  Cycle cycle = 0;
  std::size_t slot = 0;
  NodeId node = 0;
  NodeState from = NodeState::Empty;
  NodeState to = NodeState::Empty;

  bool operator==(const TraceEntry&) const = default;
};

std::string format_trace_line(const TraceEntry& e);
TraceEntry parse_trace_line(std::string_view line);  // throws ParseError
void write_trace(std::ostream& os, std::span<const TraceEntry> entries);
std::vector<TraceEntry> read_trace(std::istream& is);

/// Online checker: every transition must be legal and start from the state
/// the slot is actually in. Throws InvariantViolation on the first breach.
class StateAuditor {
 public:
  explicit StateAuditor(std::size_t num_slots) : state_(num_slots, NodeState::Empty), node_(num_slots, 0) {}

  void record(const TraceEntry& e);
  std::size_t transitions() const noexcept { return transitions_; }
  std::size_t completions() const noexcept { return completions_; }
  NodeState state(std::size_t slot) const { return state_.at(slot); }

 private:
  std::vector<NodeState> state_;
  std::vector<NodeId> node_;
  std::size_t transitions_ = 0;
  std::size_t completions_ = 0;
};

struct AuditResult {
  bool ok = true;
  std::size_t transitions = 0;
  std::size_t illegal = 0;
  std::size_t completions = 0;
  std::vector<std::string> problems;
};

/// Offline audit of a full trace: legal chain per slot, and every node
/// reaches Done exactly once per layer.
AuditResult audit_trace(std::span<const TraceEntry> entries, std::size_t num_nodes, std::size_t num_layers);

}  // namespace ample::sim
