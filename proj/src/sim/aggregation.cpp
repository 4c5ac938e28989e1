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

#include "ample/sim/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ample::sim {

AggregationCore::AggregationCore(Precision precision, std::size_t width) : precision_(precision), width_(width) {
  if (width == 0) throw ConfigError("AggregationCore: width must be positive");
}

void AggregationCore::claim(std::size_t slot, std::size_t offset, std::size_t length) {
  if (owner_) throw InvariantViolation("AggregationCore: claimed while owned by slot " + std::to_string(*owner_));
  if (length == 0 || length > width_) throw InvariantViolation("AggregationCore: bad slice length");
  owner_ = slot;
  offset_ = offset;
  length_ = length;
  packets_ = 0;
  cursor_ = 0;
  facc_.assign(precision_ == Precision::Float32 ? length : 0, 0.0);
  iacc_.assign(precision_ == Precision::Float32 ? 0 : length, 0);
}

void AggregationCore::release() {
  owner_.reset();
  facc_.clear();
  iacc_.clear();
}

void AggregationCore::add(std::span<const double> values) {
  if (cursor_ + values.size() > length_) throw InvariantViolation("AggregationCore: payload exceeds claimed slice");
  if (precision_ == Precision::Float32) {
    for (std::size_t k = 0; k < values.size(); ++k) facc_[cursor_ + k] += values[k];
  } else {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double v = values[k];
      if (v != std::nearbyint(v)) throw InvariantViolation("AggregationCore: non-integer code on an integer core");
      const std::int64_t sum = static_cast<std::int64_t>(iacc_[cursor_ + k]) + static_cast<std::int64_t>(v);
      if (sum > std::numeric_limits<std::int32_t>::max() || sum < std::numeric_limits<std::int32_t>::min()) {
        throw InvariantViolation("AggregationCore: 32-bit accumulator overflow");
      }
      iacc_[cursor_ + k] = static_cast<std::int32_t>(sum);
    }
  }
  cursor_ += values.size();
}

void AggregationCore::accept(const Flit& flit) {
  if (!owner_ || *owner_ != flit.slot) {
    throw InvariantViolation("AggregationCore: flit from slot " + std::to_string(flit.slot) + " reached a core it does not own");
  }
  switch (flit.kind) {
    case FlitKind::Head:
      cursor_ = 0;
      break;
    case FlitKind::Body:
      add(flit.payload);
      break;
    case FlitKind::Tail:
      ++packets_;
      cursor_ = 0;
      break;
  }
}

std::vector<double> AggregationCore::result() const {
  if (precision_ == Precision::Float32) return facc_;
  return {iacc_.begin(), iacc_.end()};
}

std::size_t cores_needed(std::size_t feature_count, std::size_t core_width) {
  if (feature_count == 0) throw ContractViolation("allocate_pes: feature_count must be positive");
  if (core_width == 0) throw ConfigError("allocate_pes: core_width must be positive");
  return (feature_count + core_width - 1) / core_width;
}

AggregationSubnet::AggregationSubnet(EventQueue& eq, Precision precision, std::size_t rows, std::size_t cols,
                                     std::size_t core_width, std::size_t injection_ports)
    : eq_(eq), precision_(precision), core_width_(core_width), mesh_(eq, rows, cols, injection_ports) {
  cores_.reserve(rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) cores_.emplace_back(precision, core_width);
  ready_at_.assign(cores_.size(), 0);
}

std::size_t AggregationSubnet::free_cores() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < cores_.size(); ++i) n += !cores_[i].busy() && ready_at_[i] <= eq_.now();
  return n;
}

std::optional<std::vector<std::size_t>> AggregationSubnet::try_allocate(std::size_t slot, std::size_t feature_count) {
  const std::size_t need = cores_needed(feature_count, core_width_);
  if (need > cores_.size()) {
    throw ConfigError("allocate_pes: a node needs " + std::to_string(need) + " cores but the " +
                      std::string(to_string(precision_)) + " subnet has " + std::to_string(cores_.size()));
  }
  if (free_cores() < need) return std::nullopt;
  std::vector<std::size_t> got;
  for (std::size_t i = 0; i < cores_.size() && got.size() < need; ++i) {
    if (cores_[i].busy() || ready_at_[i] > eq_.now()) continue;
    const std::size_t off = got.size() * core_width_;
    cores_[i].claim(slot, off, std::min(core_width_, feature_count - off));
    got.push_back(i);
  }
  return got;
}

void AggregationSubnet::allocate_pes(std::size_t slot, Precision precision, std::size_t feature_count, Grant on_grant) {
  if (precision != precision_) throw ContractViolation("allocate_pes: request precision does not match the subnet");
  cores_needed(feature_count, core_width_);
  if (queue_.empty()) {
    if (auto got = try_allocate(slot, feature_count)) {
      on_grant(std::move(*got));
      return;
    }
  }
  queue_.push_back({slot, feature_count, std::move(on_grant)});
  // Cores released this cycle become usable on the next one.
  eq_.schedule(eq_.now() + 1, [this] { serve(); });
}

void AggregationSubnet::release(std::size_t slot) {
  for (std::size_t i = 0; i < cores_.size(); ++i) {
    if (cores_[i].owner() != slot) continue;
    cores_[i].release();
    ready_at_[i] = eq_.now() + 1;
  }
  eq_.schedule(eq_.now() + 1, [this] { serve(); });
}

void AggregationSubnet::serve() {
  while (!queue_.empty()) {
    auto got = try_allocate(queue_.front().slot, queue_.front().features);
    if (!got) return;
    Grant g = std::move(queue_.front().grant);
    queue_.pop_front();
    g(std::move(*got));
  }
}

AggregationBuffer::AggregationBuffer(std::size_t rows) : used_(rows, false) {
  if (rows == 0) throw ConfigError("AggregationBuffer: at least one row required");
}

std::optional<std::size_t> AggregationBuffer::acquire() {
  for (std::size_t r = 0; r < used_.size(); ++r) {
    if (!used_[r]) {
      used_[r] = true;
      ++occupied_;
      return r;
    }
  }
  return std::nullopt;
}

void AggregationBuffer::free(std::size_t row) {
  if (row >= used_.size() || !used_[row]) throw InvariantViolation("AggregationBuffer: freeing an unused row");
  used_[row] = false;
  --occupied_;
  auto wake = std::move(waiters_);
  waiters_.clear();
  for (auto& w : wake) w();
}

BufferingManager::BufferingManager(EventQueue& eq, AggregationBuffer& abf, std::size_t num_slots)
    : eq_(eq), abf_(abf), pending_(num_slots) {}

void BufferingManager::request(std::size_t slot, Written on_written) {
  if (pending_.at(slot)) throw ContractViolation("BufferingManager: slot already has a pending write");
  pending_[slot] = std::move(on_written);
  ++waiting_;
  schedule(eq_.now() + 1);
}

void BufferingManager::schedule(Cycle at) {
  if (scheduled_ || sleeping_) return;
  scheduled_ = true;
  eq_.schedule(std::max(at, free_at_), [this] { arbitrate(); });
}

void BufferingManager::arbitrate() {
  scheduled_ = false;
  if (waiting_ == 0) return;
  auto row = abf_.acquire();
  if (!row) {
    ++stalls_;
    sleeping_ = true;
    abf_.on_space([this] {
      sleeping_ = false;
      schedule(eq_.now() + 1);
    });
    return;
  }
  const std::size_t n = pending_.size();
  std::size_t pick = n;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = (rr_ + k) % n;
    if (pending_[s]) {
      pick = s;
      break;
    }
  }
  Written done = std::move(*pending_[pick]);
  pending_[pick].reset();
  --waiting_;
  rr_ = (pick + 1) % n;
  log_.push_back(pick);
  const Cycle now = eq_.now();
  free_at_ = now + 1;
  eq_.schedule(now + 1, [done = std::move(done), r = *row, this] { done(r, eq_.now()); });
  if (waiting_ > 0) schedule(free_at_);
}

}  // namespace ample::sim
