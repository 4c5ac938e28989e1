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

#include "ample/sim/fetch_tag.hpp"

namespace ample::sim {

bool should_unblock(std::size_t occupancy, std::size_t capacity, std::size_t received, std::size_t degree) {
  return occupancy >= capacity || received == degree;
}

FetchTag::FetchTag(std::size_t slot, EventQueue& eq, MemorySystem& mem, FetchTagConfig cfg)
    : slot_(slot), eq_(eq), mem_(mem), capacity_(cfg.partial_response ? cfg.capacity : kUnbounded) {
  if (capacity_ == 0) throw ConfigError("FetchTag: message queue capacity must be positive");
}

void FetchTag::start(std::size_t degree, std::size_t feature_words, FetchTagCallbacks callbacks) {
  if (started_ && !complete()) throw ContractViolation("FetchTag: restarted while a fetch is in progress");
  if (!messages_.empty()) throw ContractViolation("FetchTag: restarted with undrained messages");
  cb_ = std::move(callbacks);
  degree_ = degree;
  feature_words_ = feature_words;
  received_ = 0;
  in_flight_ = 0;
  unblocked_ = false;
  started_ = true;
  addresses_.clear();
  stats_ = {};
  if (degree == 0) {
    eq_.schedule(eq_.now(), [this] {
      const Cycle now = eq_.now();
      stats_.adjacency_done = stats_.unblocked_at = stats_.fetch_complete = now;
      unblocked_ = true;
      if (cb_.on_adjacency) cb_.on_adjacency();
      if (cb_.on_unblock) cb_.on_unblock();
      if (cb_.on_complete) cb_.on_complete();
    });
    return;
  }
  ++stats_.adjacency_reads;
  mem_.submit(slot_, RequestKind::Adjacency, degree, [this](Cycle) { on_adjacency_arrival(); });
}

void FetchTag::on_adjacency_arrival() {
  stats_.adjacency_done = eq_.now();
  for (std::size_t p = 0; p < degree_; ++p) addresses_.push_back(p);
  if (cb_.on_adjacency) cb_.on_adjacency();
  issue();
}

void FetchTag::issue() {
  while (!addresses_.empty() && messages_.size() + in_flight_ < capacity_) {
    const std::size_t pos = addresses_.front();
    addresses_.pop_front();
    ++in_flight_;
    ++stats_.feature_reads;
    mem_.submit(slot_, RequestKind::Feature, feature_words_, [this, pos](Cycle) { on_feature_arrival(pos); });
  }
}

void FetchTag::on_feature_arrival(std::size_t position) {
  --in_flight_;
  ++received_;
  messages_.push_back(position);
  const bool done = received_ == degree_;
  if (done) stats_.fetch_complete = eq_.now();
  if (!unblocked_ && should_unblock(messages_.size(), capacity_, received_, degree_)) {
    unblocked_ = true;
    stats_.unblocked_at = eq_.now();
    if (!done) ++stats_.partial_responses;
    if (cb_.on_unblock) cb_.on_unblock();
  }
  if (unblocked_ && cb_.on_message) cb_.on_message();
  if (done && cb_.on_complete) cb_.on_complete();
}

std::size_t FetchTag::pop_message() {
  if (messages_.empty()) throw ContractViolation("FetchTag: pop from empty message queue");
  const std::size_t pos = messages_.front();
  messages_.pop_front();
  issue();
  return pos;
}

}  // namespace ample::sim
