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

#include "ample/sim/scoreboard.hpp"

#include <array>
#include <bit>

namespace ample::sim {

namespace {
constexpr std::array<std::string_view, kNumNodeStates> kStateNames{
    "Empty",       "Programmed",          "PrefetchAdjacency", "PrefetchFeatures", "Aggregating",
    "AggregationBuffered", "Transforming", "WriteBack",         "Done"};
}

std::string_view to_string(NodeState s) { return kStateNames[static_cast<std::size_t>(s)]; }

NodeState parse_node_state(std::string_view s) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == s) return static_cast<NodeState>(i);
  }
  throw ParseError("unknown node state '" + std::string(s) + "'");
}

bool is_legal_transition(NodeState from, NodeState to) {
  if (from == NodeState::Done) return to == NodeState::Empty;
  return static_cast<std::size_t>(to) == static_cast<std::size_t>(from) + 1;
}

SlotMask::SlotMask(std::size_t n, bool ones) : n_(n), words_((n + 63) / 64, ones ? ~std::uint64_t{0} : 0) {
  if (ones && n % 64 != 0) words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
}

SlotMask SlotMask::from_bits(std::uint64_t bits, std::size_t n) {
  if (n > 64) throw std::invalid_argument("SlotMask::from_bits: n > 64");
  SlotMask m(n);
  if (n > 0) m.words_[0] = n == 64 ? bits : bits & ((std::uint64_t{1} << n) - 1);
  return m;
}

bool SlotMask::none() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

bool SlotMask::all() const { return count() == n_; }

std::size_t SlotMask::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::optional<std::size_t> SlotMask::lowest_set() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
  }
  return std::nullopt;
}

std::size_t choose_slot(const SlotMask& mask) {
  const auto s = mask.lowest_set();
  if (!s) throw ContractViolation("choose_slot: no nodeslot available");
  return *s;
}

HostState::HostState(std::size_t num_slots) : available_(num_slots, true), slots_(num_slots) {
  if (num_slots == 0) throw ConfigError("HostState: need at least one nodeslot");
  for (std::size_t i = 0; i < num_slots; ++i) slots_[i].slot = i;
  global.num_slots = num_slots;
}

void HostState::program_nodeslot(std::size_t slot, NodeId node, Precision precision, std::size_t neighbors,
                                 std::uint64_t adjacency_ptr, std::uint64_t feature_ptr) {
  if (available_.none()) throw ContractViolation("program_nodeslot: available_nodeslots is all zero");
  if (slot >= slots_.size()) throw ContractViolation("program_nodeslot: slot index out of range");
  if (!available_.test(slot)) throw ContractViolation("program_nodeslot: slot " + std::to_string(slot) + " is busy");
  Nodeslot& s = slots_[slot];
  s.node = node;
  s.precision = precision;
  s.state = NodeState::Programmed;
  s.neighbors = neighbors;
  s.adjacency_ptr = adjacency_ptr;
  s.feature_ptr = feature_ptr;
  available_.clear(slot);
}

void HostState::release(std::size_t slot) {
  if (available_.test(slot)) throw ContractViolation("release: slot " + std::to_string(slot) + " already free");
  slots_[slot].state = NodeState::Empty;
  available_.set(slot);
}

}  // namespace ample::sim
