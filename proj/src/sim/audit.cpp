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

#include "ample/sim/audit.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace ample::sim {

std::string format_trace_line(const TraceEntry& e) {
  std::ostringstream os;
  os << e.cycle << ' ' << e.slot << ' ' << e.node << ' ' << to_string(e.from) << ' ' << to_string(e.to);
  return os.str();
}

TraceEntry parse_trace_line(std::string_view line) {
  std::istringstream is{std::string(line)};
  TraceEntry e;
  std::string from;
  std::string to;
  if (!(is >> e.cycle >> e.slot >> e.node >> from >> to)) {
    throw ParseError("trace: malformed line '" + std::string(line) + "'");
  }
  std::string extra;
  if (is >> extra) throw ParseError("trace: trailing tokens in '" + std::string(line) + "'");
  e.from = parse_node_state(from);
  e.to = parse_node_state(to);
  return e;
}

void write_trace(std::ostream& os, std::span<const TraceEntry> entries) {
  for (const auto& e : entries) os << format_trace_line(e) << '\n';
}

std::vector<TraceEntry> read_trace(std::istream& is) {
  std::vector<TraceEntry> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_trace_line(line));
  }
  return out;
}

void StateAuditor::record(const TraceEntry& e) {
  if (e.slot >= state_.size()) throw InvariantViolation("audit: slot index out of range");
  if (!is_legal_transition(e.from, e.to)) {
    throw InvariantViolation("audit: illegal transition " + format_trace_line(e));
  }
  if (state_[e.slot] != e.from) {
    throw InvariantViolation("audit: slot " + std::to_string(e.slot) + " is " + std::string(to_string(state_[e.slot])) +
                             ", not " + std::string(to_string(e.from)));
  }
  if (e.from != NodeState::Empty && node_[e.slot] != e.node) {
    throw InvariantViolation("audit: node changed inside slot " + std::to_string(e.slot));
  }
  state_[e.slot] = e.to;
  node_[e.slot] = e.node;
  ++transitions_;
  if (e.to == NodeState::Done) ++completions_;
}

AuditResult audit_trace(std::span<const TraceEntry> entries, std::size_t num_nodes, std::size_t num_layers) {
  AuditResult r;
  std::size_t slots = 0;
  for (const auto& e : entries) slots = std::max(slots, e.slot + 1);
  std::vector<NodeState> state(slots, NodeState::Empty);
  std::vector<std::size_t> done(num_nodes, 0);
  auto problem = [&r](std::string msg) {
    r.ok = false;
    if (r.problems.size() < 32) r.problems.push_back(std::move(msg));
  };
  for (const auto& e : entries) {
    ++r.transitions;
    if (!is_legal_transition(e.from, e.to) || state[e.slot] != e.from) {
      ++r.illegal;
      problem("illegal: " + format_trace_line(e));
    }
    state[e.slot] = e.to;
    if (e.to == NodeState::Done) {
      ++r.completions;
      if (e.node >= num_nodes) problem("unknown node " + std::to_string(e.node));
      else ++done[e.node];
    }
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    if (done[v] != num_layers) {
      problem("node " + std::to_string(v) + " reached Done " + std::to_string(done[v]) + " times");
    }
  }
  return r;
}

}  // namespace ample::sim
