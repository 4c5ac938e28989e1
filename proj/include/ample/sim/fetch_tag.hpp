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
#include <limits>

#include "ample/sim/memory.hpp"

namespace ample::sim {

struct FetchTagConfig {
  std::size_t capacity = 16;   // Message Queue entries
  bool partial_response = true;  // false: unbounded queue, unblock only when every neighbor is in
};

struct FetchTagStats {
  std::size_t adjacency_reads = 0;
  std::size_t feature_reads = 0;
  std::size_t partial_responses = 0;  // unblocks with neighbors still outstanding
  Cycle adjacency_done = 0;
  Cycle unblocked_at = 0;
  Cycle fetch_complete = 0;
};

struct FetchTagCallbacks {
  std::function<void()> on_adjacency;  // neighbor IDs landed in the Address Queue
  std::function<void()> on_unblock;    // aggregation may start (fires once)
  std::function<void()> on_message;    // a new embedding is available after unblock
  std::function<void()> on_complete;   // every neighbor embedding has arrived
};

/// Aggregation is unblocked when the Message Queue is full or every neighbor
/// has been fetched.
bool should_unblock(std::size_t occupancy, std::size_t capacity, std::size_t received, std::size_t degree);

/// Per-nodeslot prefetch unit. Stage one reads the adjacency list; stage two
/// turns each Address Queue entry into one feature read, issuing only while
/// queued plus in-flight embeddings stay below capacity. Messages are edge
/// positions within the node's row, in fetch order.
class FetchTag {
 public:
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  FetchTag(std::size_t slot, EventQueue& eq, MemorySystem& mem, FetchTagConfig cfg);

  void start(std::size_t degree, std::size_t feature_words, FetchTagCallbacks callbacks);

  bool has_message() const noexcept { return !messages_.empty(); }
  // Frees one queue entry and lets the tag fetch again.
  std::size_t pop_message();

  std::size_t slot() const noexcept { return slot_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t occupancy() const noexcept { return messages_.size(); }
  std::size_t in_flight() const noexcept { return in_flight_; }
  std::size_t address_queue_size() const noexcept { return addresses_.size(); }
  std::size_t received() const noexcept { return received_; }
  bool unblocked() const noexcept { return unblocked_; }
  bool complete() const noexcept { return received_ == degree_ && started_; }
  const FetchTagStats& stats() const noexcept { return stats_; }

 private:
  void on_adjacency_arrival();
  void issue();
  void on_feature_arrival(std::size_t position);

  std::size_t slot_;
  EventQueue& eq_;
  MemorySystem& mem_;
  std::size_t capacity_;
  FetchTagCallbacks cb_;
  std::size_t degree_ = 0;
  std::size_t feature_words_ = 0;
  std::size_t received_ = 0;
  std::size_t in_flight_ = 0;
  bool started_ = false;
  bool unblocked_ = false;
  std::deque<std::size_t> addresses_;
  std::deque<std::size_t> messages_;
  FetchTagStats stats_;
};

}  // namespace ample::sim
