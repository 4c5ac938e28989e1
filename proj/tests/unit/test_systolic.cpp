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

#include "ample/rng.hpp"
#include "ample/sim/event_queue.hpp"
#include "ample/sim/systolic.hpp"
#include "doctest.h"

using namespace ample;
using namespace ample::sim;

TEST_SUITE("systolic") {

TEST_CASE("cost model") {
  CHECK(matmul_cost({4, 4}, 4, 4).latency == 4 + 4 + 4);
  CHECK(matmul_cost({4, 4}, 4, 4).interval == 1);
  // Two row tiles, three column tiles, partial passes.
  const auto c = matmul_cost({4, 4}, 8, 10);
  CHECK(c.interval == 6);
  CHECK(c.latency == 4 + 6 * (4 + 4));
  CHECK(matmul_cost({16, 16}, 3, 5).latency == 16 + 3 + 5);
  CHECK(matmul_cost({16, 16}, 0, 5).latency == 0);
  CHECK_THROWS_AS(matmul_cost({0, 4}, 1, 1), ConfigError);
}

TEST_CASE("array issue pacing") {
  SystolicArray sa({4, 4});
  CHECK(sa.issue(10, {12, 1}) == 22);
  CHECK_FALSE(sa.can_issue(10));
  CHECK(sa.can_issue(11));
  CHECK_THROWS_AS(sa.issue(10, {12, 1}), InvariantViolation);
  CHECK(sa.issue(11, {20, 6}) == 31);
  CHECK(sa.next_issue() == 17);
}

TEST_CASE("identity weights pass the aggregate through") {
  LayerWeights w;
  w.w = Matrix::identity(3);
  const PreparedWeights pw(ModelConfig::gcn(), w);
  const std::vector<double> m{0.5, -1.25, 2.0};
  const auto r = transform_step({4, 4}, pw, m, m, Precision::Float32, 3);
  CHECK(r.row == m);
  CHECK(r.latency == 4 + 3 + 3);
}

TEST_CASE("sage transform is W1 x + W2 m") {
  LayerWeights w;
  w.w1 = Matrix::from_rows({{1, 2}, {0, 1}});
  w.w2 = Matrix::from_rows({{3, 0}, {1, -1}});
  const PreparedWeights pw(ModelConfig::sage(), w);
  const std::vector<double> x{1, 1};
  const std::vector<double> m{2, 4};
  const auto r = transform_step({4, 4}, pw, x, m, Precision::Float32, 2);
  CHECK(r.row == std::vector<double>{3 + 6, 1 - 2});
  CHECK(r.latency == 2 * (4 + 2 + 2));
  CHECK(r.occupancy == 2);
}

TEST_CASE("integer linear is exact on representable inputs") {
  // Weights and inputs on the quantization grid survive the round trip.
  LayerWeights w;
  w.w = Matrix::from_rows({{127, -64}, {1, 0}});
  const PreparedWeights pw(ModelConfig::gcn(), w);
  const std::vector<double> m{127, 2};
  const auto r = transform_step({4, 4}, pw, m, m, Precision::Int8, 2);
  CHECK(r.row[0] == doctest::Approx(127.0 * 127 - 128));
  CHECK(r.row[1] == doctest::Approx(127.0));
}

TEST_CASE("integer linear stays within the rounding budget") {
  Rng rng(5);
  Matrix wm(6, 8);
  for (auto& v : wm.data()) v = rng.uniform(-1, 1);
  const QuantizedWeight qw(wm);
  std::vector<double> v(8);
  for (auto& x : v) x = rng.uniform(-3, 3);
  const auto exact = precision_linear(qw, v, Precision::Float32);
  for (Precision p : {Precision::Int8, Precision::Int4}) {
    const double qmax = p == Precision::Int8 ? 127 : 7;
    const double sw = qw.params[static_cast<std::size_t>(p)].scale;
    double vmax = 0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    const double sv = vmax / qmax;
    const auto got = precision_linear(qw, v, p);
    for (std::size_t r = 0; r < 6; ++r) {
      double bound = 0;
      for (std::size_t c = 0; c < 8; ++c) bound += (std::abs(wm(r, c)) + sw / 2) * sv / 2 + sw / 2 * std::abs(v[c]);
      CHECK(std::abs(got[r] - exact[r]) <= bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("weight transfer") {
  const WeightChannelConfig ch{.latency = 100, .words_per_cycle = 16};
  CHECK(weight_transfer_cycles(0, ch) == 0);
  CHECK(weight_transfer_cycles(1024, ch) == 64 + 100);
  CHECK(weight_transfer_cycles(1025, ch) == 65 + 100);
}

TEST_CASE("weight bank reload between layers") {
  EventQueue eq;
  WeightBank bank(eq, {.latency = 10, .words_per_cycle = 4});
  std::vector<Cycle> ready;
  bank.prefetch(0, [&](Cycle t) { ready.push_back(t); });
  eq.run();
  CHECK(ready == std::vector<Cycle>{0});
  CHECK(bank.valid());
  bank.invalidate();
  CHECK_FALSE(bank.valid());
  eq.schedule(5, [&] { bank.prefetch(40, [&](Cycle t) { ready.push_back(t); }); });
  eq.run();
  CHECK(ready.back() == 5 + 10 + 10);
  CHECK(bank.valid());
  CHECK(bank.loads() == 2);
}

}  // TEST_SUITE
