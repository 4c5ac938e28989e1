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
#include <functional>
#include <optional>
#include <vector>

#include "ample/quant.hpp"
#include "ample/sim/event_queue.hpp"
#include "ample/sim/noc.hpp"

namespace ample::sim {

/// One aggregation core. Owns a contiguous slice of a node's message features
/// while claimed. Float cores accumulate in double; integer cores accumulate
/// codes in a widened 32-bit register.
class AggregationCore {
 public:
  AggregationCore(Precision precision, std::size_t width);

  Precision precision() const noexcept { return precision_; }
  std::size_t width() const noexcept { return width_; }
  bool busy() const noexcept { return owner_.has_value(); }
  std::optional<std::size_t> owner() const noexcept { return owner_; }
  std::size_t offset() const noexcept { return offset_; }
  std::size_t length() const noexcept { return length_; }

  void claim(std::size_t slot, std::size_t offset, std::size_t length);
  void release();

  // Throws InvariantViolation for flits of another slot or an oversize payload.
  void accept(const Flit& flit);
  void add(std::span<const double> values);

  std::size_t packets_received() const noexcept { return packets_; }
  std::span<const double> float_accumulator() const noexcept { return facc_; }
  std::span<const std::int32_t> int_accumulator() const noexcept { return iacc_; }
  // Accumulator as doubles, whatever the precision.
  std::vector<double> result() const;

 private:
  Precision precision_;
  std::size_t width_;
  std::optional<std::size_t> owner_;
  std::size_t offset_ = 0;
  std::size_t length_ = 0;
  std::size_t packets_ = 0;
  std::size_t cursor_ = 0;  // position inside the current packet
  std::vector<double> facc_;
  std::vector<std::int32_t> iacc_;
};

std::size_t cores_needed(std::size_t feature_count, std::size_t core_width);

/// Mesh of (router, core) pairs sharing one precision. Core i sits at
/// (i mod cols, i div cols).
class AggregationSubnet {
 public:
  using Grant = std::function<void(std::vector<std::size_t>)>;

  AggregationSubnet(EventQueue& eq, Precision precision, std::size_t rows, std::size_t cols, std::size_t core_width,
                    std::size_t injection_ports);

  Precision precision() const noexcept { return precision_; }
  std::size_t num_cores() const noexcept { return cores_.size(); }
  std::size_t core_width() const noexcept { return core_width_; }
  // Cores that are unowned and usable this cycle.
  std::size_t free_cores() const;
  MeshCoord coord(std::size_t core) const {
    return {static_cast<int>(core % mesh_.cols()), static_cast<int>(core / mesh_.cols())};
  }
  AggregationCore& core(std::size_t i) { return cores_.at(i); }
  const AggregationCore& core(std::size_t i) const { return cores_.at(i); }
  MeshNetwork& mesh() noexcept { return mesh_; }
  const MeshNetwork& mesh() const noexcept { return mesh_; }

  // Claims ceil(feature_count / core_width) cores, lowest indices first.
  std::optional<std::vector<std::size_t>> try_allocate(std::size_t slot, std::size_t feature_count);

  /// Immediate grant when cores are free and nobody is queued, otherwise
  /// strict FIFO. on_grant may run synchronously.
  void allocate_pes(std::size_t slot, Precision precision, std::size_t feature_count, Grant on_grant);

  /// Frees every core owned by slot; they are reusable from the next cycle.
  void release(std::size_t slot);

  std::size_t queued() const noexcept { return queue_.size(); }

 private:
  struct Request {
    std::size_t slot;
    std::size_t features;
    Grant grant;
  };
  void serve();

  EventQueue& eq_;
  Precision precision_;
  std::size_t core_width_;
  std::vector<AggregationCore> cores_;
  std::vector<Cycle> ready_at_;
  MeshNetwork mesh_;
  std::deque<Request> queue_;
};

/// Aggregation Buffer: rows of aggregated embeddings awaiting transformation.
class AggregationBuffer {
 public:
  explicit AggregationBuffer(std::size_t rows);

  std::size_t rows() const noexcept { return used_.size(); }
  std::size_t occupied() const noexcept { return occupied_; }
  bool full() const noexcept { return occupied_ == used_.size(); }
  // Lowest free row.
  std::optional<std::size_t> acquire();
  void free(std::size_t row);
  void on_space(std::function<void()> wake) { waiters_.push_back(std::move(wake)); }

 private:
  std::vector<bool> used_;
  std::size_t occupied_ = 0;
  std::vector<std::function<void()>> waiters_;
};

/// Round-robin writer into the Aggregation Buffer. One row write per cycle;
/// requests are arbitrated the cycle after they arrive. Stalls while the
/// buffer is full.
class BufferingManager {
 public:
  using Written = std::function<void(std::size_t row, Cycle)>;

  BufferingManager(EventQueue& eq, AggregationBuffer& abf, std::size_t num_slots);

  void request(std::size_t slot, Written on_written);
  const std::vector<std::size_t>& grant_log() const noexcept { return log_; }
  std::uint64_t stalls() const noexcept { return stalls_; }

 private:
  void schedule(Cycle at);
  void arbitrate();

  EventQueue& eq_;
  AggregationBuffer& abf_;
  std::vector<std::optional<Written>> pending_;
  std::size_t waiting_ = 0;
  std::size_t rr_ = 0;
  Cycle free_at_ = 0;
  bool scheduled_ = false;
  bool sleeping_ = false;
  std::uint64_t stalls_ = 0;
  std::vector<std::size_t> log_;
};

}  // namespace ample::sim
