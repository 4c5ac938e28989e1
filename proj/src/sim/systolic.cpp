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

#include "ample/sim/systolic.hpp"

#include <algorithm>

namespace ample::sim {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

void add_cost(MatmulCost& acc, const MatmulCost& c) {
  acc.latency += c.latency;
  acc.interval += c.interval;
}

}  // namespace

MatmulCost matmul_cost(const SystolicConfig& cfg, std::size_t d, std::size_t f) {
  if (cfg.rows == 0 || cfg.cols == 0) throw ConfigError("systolic array dimensions must be positive");
  if (d == 0 || f == 0) return {};
  const std::size_t tiles = ceil_div(d, cfg.rows) * ceil_div(f, cfg.cols);
  const Cycle pass = std::min(d, cfg.rows) + std::min(f, cfg.cols);
  return {static_cast<Cycle>(cfg.rows + tiles * pass), static_cast<Cycle>(tiles)};
}

MatmulCost transform_cost(const SystolicConfig& cfg, const ModelConfig& model, const LayerWeights& w,
                          std::size_t in_dim) {
  MatmulCost c;
  if (model.residual == Placement::Transformation) {
    add_cost(c, matmul_cost(cfg, w.w1.cols(), w.w1.rows()));
    add_cost(c, matmul_cost(cfg, w.w2.cols(), w.w2.rows()));
  } else if (!w.mlp.empty()) {
    for (const auto& l : w.mlp) add_cost(c, matmul_cost(cfg, l.weight.cols(), l.weight.rows()));
  } else {
    add_cost(c, matmul_cost(cfg, in_dim, w.w.rows()));
  }
  return c;
}

QuantizedWeight::QuantizedWeight(Matrix m) : real(std::move(m)) {
  if (real.empty()) return;
  for (Precision p : {Precision::Int8, Precision::Int4}) {
    const auto idx = static_cast<std::size_t>(p);
    params[idx] = calibrate(real.data(), bit_width(p));
    codes[idx] = quantize_tensor(real.data(), params[idx]);
  }
}

PreparedWeights::PreparedWeights(const ModelConfig& m, const LayerWeights& weights)
    : model(m), w(weights.w), w1(weights.w1), w2(weights.w2) {
  for (const auto& l : weights.mlp) {
    mlp.emplace_back(l.weight);
    mlp_bias.push_back(l.bias);
    mlp_act.push_back(l.activation);
  }
}

std::vector<double> precision_linear(const QuantizedWeight& w, std::span<const double> v, Precision p) {
  const std::size_t rows = w.real.rows();
  const std::size_t cols = w.real.cols();
  if (v.size() != cols) throw ShapeError("precision_linear: vector width does not match weight columns");
  std::vector<double> y(rows, 0.0);
  if (p == Precision::Float32) {
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      const auto wr = w.real.row(r);
      for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * v[c];
      y[r] = acc;
    }
    return y;
  }
  const auto idx = static_cast<std::size_t>(p);
  const QuantParams& qw = w.params[idx];
  const QuantParams qv = calibrate(v, bit_width(p));
  const auto vc = quantize_tensor(v, qv);
  const auto& wc = w.codes[idx];
  for (std::size_t r = 0; r < rows; ++r) {
    std::int64_t acc = 0;
    for (std::size_t c = 0; c < cols; ++c) acc += static_cast<std::int64_t>(wc[r * cols + c]) * vc[c];
    y[r] = static_cast<double>(acc) * qw.scale * qv.scale;
  }
  return y;
}

TransformResult transform_step(const SystolicConfig& cfg, const PreparedWeights& pw, std::span<const double> x_i,
                               std::span<const double> m, Precision p, std::size_t in_dim) {
  TransformResult out;
  MatmulCost cost;
  if (pw.model.residual == Placement::Transformation) {
    auto a = precision_linear(pw.w1, x_i, p);
    const auto b = precision_linear(pw.w2, m, p);
    for (std::size_t f = 0; f < a.size(); ++f) a[f] = a[f] + b[f];
    out.row = std::move(a);
    add_cost(cost, matmul_cost(cfg, pw.w1.real.cols(), pw.w1.real.rows()));
    add_cost(cost, matmul_cost(cfg, pw.w2.real.cols(), pw.w2.real.rows()));
  } else if (!pw.mlp.empty()) {
    std::vector<double> h(m.begin(), m.end());
    for (std::size_t l = 0; l < pw.mlp.size(); ++l) {
      auto y = precision_linear(pw.mlp[l], h, p);
      const auto& bias = pw.mlp_bias[l];
      for (std::size_t f = 0; f < y.size(); ++f) {
        y[f] = apply_activation(pw.mlp_act[l], bias.empty() ? y[f] : y[f] + bias[f]);
      }
      add_cost(cost, matmul_cost(cfg, pw.mlp[l].real.cols(), pw.mlp[l].real.rows()));
      h = std::move(y);
    }
    out.row = std::move(h);
  } else {
    out.row = precision_linear(pw.w, m, p);
    add_cost(cost, matmul_cost(cfg, in_dim, pw.w.real.rows()));
  }
  out.latency = cost.latency;
  out.occupancy = cost.interval;
  return out;
}

Cycle SystolicArray::issue(Cycle now, const MatmulCost& cost) {
  if (now < next_issue_) throw InvariantViolation("SystolicArray: issued while the array is busy");
  next_issue_ = now + std::max<Cycle>(cost.interval, 1);
  ++processed_;
  return now + cost.latency;
}

Cycle weight_transfer_cycles(std::size_t words, const WeightChannelConfig& cfg) {
  if (cfg.words_per_cycle == 0) throw ConfigError("weight channel words_per_cycle must be positive");
  if (words == 0) return 0;
  return cfg.latency + ceil_div(words, cfg.words_per_cycle);
}

void WeightBank::invalidate() {
  valid_ = false;
  loading_ = false;
}

void WeightBank::prefetch(std::size_t words, std::function<void(Cycle)> on_ready) {
  if (loading_) throw ContractViolation("WeightBank: prefetch already in progress");
  valid_ = false;
  loading_ = true;
  ++loads_;
  ready_at_ = eq_.now() + weight_transfer_cycles(words, cfg_);
  eq_.schedule(ready_at_, [this, cb = std::move(on_ready)] {
    loading_ = false;
    valid_ = true;
    if (cb) cb(eq_.now());
  });
}

}  // namespace ample::sim
