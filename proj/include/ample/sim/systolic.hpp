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

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ample/gnn.hpp"
#include "ample/quant.hpp"
#include "ample/sim/event_queue.hpp"

namespace ample::sim {

struct SystolicConfig {
  std::size_t rows = 16;
  std::size_t cols = 16;
};

/// Cost of a (1 x D)(D x F) product on a rows x cols array. The D x F weight
/// block is tiled into ceil(D/rows) * ceil(F/cols) passes; each pass streams
/// min(D, rows) + min(F, cols) cycles, and the array fill costs rows cycles
/// once per product.
struct MatmulCost {
  Cycle latency = 0;
  Cycle interval = 0;  // cycles before the array accepts the next row
};
MatmulCost matmul_cost(const SystolicConfig& cfg, std::size_t d, std::size_t f);

// Sum of the products gamma needs: W m, the MLP layers, or W1 x and W2 m.
MatmulCost transform_cost(const SystolicConfig& cfg, const ModelConfig& model, const LayerWeights& w,
                          std::size_t in_dim);

/// A weight matrix plus its symmetric per-tensor integer images.
struct QuantizedWeight {
  Matrix real;
  std::array<std::vector<std::int32_t>, 3> codes;  // indexed by Precision; Float32 entry unused
  std::array<QuantParams, 3> params;

  explicit QuantizedWeight(Matrix m = {});
};

struct PreparedWeights {
  ModelConfig model;
  QuantizedWeight w;
  std::vector<QuantizedWeight> mlp;
  std::vector<std::vector<double>> mlp_bias;
  std::vector<Activation> mlp_act;
  QuantizedWeight w1;
  QuantizedWeight w2;

  PreparedWeights(const ModelConfig& model, const LayerWeights& weights);
};

/// y = W v in the given precision. Integer paths calibrate v per row,
/// multiply codes exactly and dequantize with s_W * s_v.
std::vector<double> precision_linear(const QuantizedWeight& w, std::span<const double> v, Precision p);

struct TransformResult {
  std::vector<double> row;
  Cycle latency = 0;
  Cycle occupancy = 0;
};

/// gamma(x_i, m_i) for one node and its cycle cost.
TransformResult transform_step(const SystolicConfig& cfg, const PreparedWeights& pw, std::span<const double> x_i,
                               std::span<const double> m, Precision p, std::size_t in_dim);

/// Issue-side model of one pipelined array.
class SystolicArray {
 public:
  explicit SystolicArray(SystolicConfig cfg = {}) : cfg_(cfg) {}
  const SystolicConfig& config() const noexcept { return cfg_; }
  bool can_issue(Cycle now) const noexcept { return now >= next_issue_; }
  Cycle next_issue() const noexcept { return next_issue_; }
  // Reserves the array; returns the cycle the result is ready.
  Cycle issue(Cycle now, const MatmulCost& cost);
  std::uint64_t rows_processed() const noexcept { return processed_; }

 private:
  SystolicConfig cfg_;
  Cycle next_issue_ = 0;
  std::uint64_t processed_ = 0;
};

struct WeightChannelConfig {
  Cycle latency = 100;
  std::size_t words_per_cycle = 16;
};

Cycle weight_transfer_cycles(std::size_t words, const WeightChannelConfig& cfg);

/// Weight Bank. Transformation blocks until the current layer's weights land.
class WeightBank {
 public:
  WeightBank(EventQueue& eq, WeightChannelConfig cfg) : eq_(eq), cfg_(cfg) {}

  bool valid() const noexcept { return valid_; }
  void invalidate();
  // Starts a transfer; on_ready runs when the bank turns valid.
  void prefetch(std::size_t words, std::function<void(Cycle)> on_ready);
  Cycle ready_at() const noexcept { return ready_at_; }
  std::uint64_t loads() const noexcept { return loads_; }

 private:
  EventQueue& eq_;
  WeightChannelConfig cfg_;
  bool valid_ = false;
  bool loading_ = false;
  Cycle ready_at_ = 0;
  std::uint64_t loads_ = 0;
};

}  // namespace ample::sim
