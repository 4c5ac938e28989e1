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

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "ample/gnn.hpp"
#include "ample/quant.hpp"

namespace ample::sim {

/// Per-nodeslot state machine. Nodes walk the chain in order; Done hands the
/// slot back as Empty.
enum class NodeState : std::uint8_t {
  Empty,
  Programmed,
  PrefetchAdjacency,
  PrefetchFeatures,
  Aggregating,
  AggregationBuffered,
  Transforming,
  WriteBack,
  Done,
};
inline constexpr std::size_t kNumNodeStates = 9;

std::string_view to_string(NodeState s);
NodeState parse_node_state(std::string_view s);
bool is_legal_transition(NodeState from, NodeState to);

/// One row of the Node Instruction Decoder scoreboard.
struct Nodeslot {
  std::size_t slot = 0;
  NodeId node = 0;
  Precision precision = Precision::Float32;
  NodeState state = NodeState::Empty;
  std::size_t neighbors = 0;
  std::uint64_t adjacency_ptr = 0;  // index into csr_neighbors
  std::uint64_t feature_ptr = 0;    // row of the updated feature store
};

/// available_nodeslots: bit i set means slot i is free.
class SlotMask {
 public:
  SlotMask() = default;
  explicit SlotMask(std::size_t n, bool ones = false);
  static SlotMask from_bits(std::uint64_t bits, std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void clear(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool none() const;
  bool all() const;
  std::size_t count() const;
  std::optional<std::size_t> lowest_set() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Lowest free slot; throws ContractViolation on an all-zero mask.
std::size_t choose_slot(const SlotMask& mask);

struct GlobalParams {
  std::size_t num_nodes = 0;
  std::size_t num_layers = 0;
  std::size_t num_slots = 0;
};

struct LayerConfig {
  std::size_t index = 0;
  ModelKind kind = ModelKind::GCN;
  Aggregation aggregation = Aggregation::Sum;
  std::size_t in_features = 0;
  std::size_t message_features = 0;
  std::size_t out_features = 0;
};

/// Host-side view of the NID register bank.
class HostState {
 public:
  explicit HostState(std::size_t num_slots);

  const SlotMask& available() const noexcept { return available_; }
  std::size_t num_slots() const noexcept { return slots_.size(); }
  const Nodeslot& slot(std::size_t i) const { return slots_.at(i); }
  Nodeslot& slot(std::size_t i) { return slots_.at(i); }

  /// Fills the row, clears the mask bit and moves the slot to Programmed.
  /// Throws ContractViolation when the slot is busy or no slot is free.
  void program_nodeslot(std::size_t slot, NodeId node, Precision precision, std::size_t neighbors = 0,
                        std::uint64_t adjacency_ptr = 0, std::uint64_t feature_ptr = 0);

  // The accelerator side: Done raises the bit again.
  void release(std::size_t slot);

  std::deque<NodeId> pending;
  GlobalParams global;
  LayerConfig layer;

 private:
  SlotMask available_;
  std::vector<Nodeslot> slots_;
};

}  // namespace ample::sim
