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

#include <deque>
#include <functional>
#include <vector>

#include "ample/sim/event_queue.hpp"

namespace ample::sim {

enum class RequestKind : std::uint8_t { SelfFeature, Adjacency, Feature, WriteBack };

struct MemoryConfig {
  std::size_t banks = 32;
  Cycle latency = 100;            // fixed read latency
  std::size_t words_per_cycle = 1;
  bool record_grants = false;
};

struct MemoryStats {
  std::uint64_t requests = 0;
  std::uint64_t grants = 0;
  std::uint64_t words_requested = 0;
  std::uint64_t words_delivered = 0;
  std::uint64_t bank_conflicts = 0;  // requests that could not be granted on the first arbitration cycle
};

/// Banked off-chip memory. Requester r belongs to bank r % banks, so
/// neighbouring slots land on different banks; each bank grants one request
/// per arbitration round, rotating over its requesters. A request submitted at cycle t is first arbitrated at t + 1.
/// A grant at g occupies the bank for ceil(words / words_per_cycle) cycles;
/// reads complete after that plus the fixed latency, writes without it.
class MemorySystem {
 public:
  using Completion = std::function<void(Cycle)>;

  MemorySystem(EventQueue& eq, MemoryConfig cfg, std::size_t num_requesters);

  std::size_t bank_of(std::size_t requester) const { return requester % cfg_.banks; }
  void submit(std::size_t requester, RequestKind kind, std::size_t words, Completion on_complete);

  const MemoryConfig& config() const noexcept { return cfg_; }
  const MemoryStats& stats() const noexcept { return stats_; }
  // Requester IDs in grant order; filled only with record_grants.
  const std::vector<std::size_t>& grant_log(std::size_t bank) const { return banks_.at(bank).log; }
  std::size_t outstanding() const;

 private:
  struct Pending {
    RequestKind kind;
    std::size_t words;
    Cycle submitted;
    Completion done;
  };
  struct Bank {
    std::vector<std::size_t> members;
    std::vector<std::deque<Pending>> queues;
    std::size_t rr = 0;
    std::size_t waiting = 0;
    Cycle free_at = 0;
    bool arbitration_scheduled = false;
    std::vector<std::size_t> log;
  };

  void schedule_arbitration(Bank& b, std::size_t index, Cycle earliest);
  void arbitrate(std::size_t index);

  EventQueue& eq_;
  MemoryConfig cfg_;
  std::vector<Bank> banks_;
  std::vector<std::size_t> member_index_;
  MemoryStats stats_;
};

}  // namespace ample::sim
