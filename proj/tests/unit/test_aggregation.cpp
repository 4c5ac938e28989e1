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
#include "ample/sim/event_queue.hpp"
#include "doctest.h"

using namespace ample;
using namespace ample::sim;

namespace {

void deliver(AggregationCore& core, std::size_t slot, const std::vector<double>& v) {
  for (const auto& f : Packet::make(slot, {}, v, 4).flits) core.accept(f);
}

}  // namespace

TEST_SUITE("aggregation") {

TEST_CASE("float sum and mean") {
  AggregationCore core(Precision::Float32, 4);
  core.claim(0, 0, 1);
  deliver(core, 0, {1});
  deliver(core, 0, {2});
  deliver(core, 0, {3});
  CHECK(core.result() == std::vector<double>{6.0});
  core.release();
  core.claim(1, 0, 1);
  deliver(core, 1, {2});
  deliver(core, 1, {4});
  CHECK(core.result()[0] / static_cast<double>(core.packets_received()) == 3.0);
}

TEST_CASE("int8 accumulator is widened") {
  AggregationCore core(Precision::Int8, 2);
  core.claim(0, 0, 1);
  deliver(core, 0, {100});
  deliver(core, 0, {100});
  CHECK(core.int_accumulator()[0] == 200);
  CHECK(core.result() == std::vector<double>{200});
  CHECK_THROWS_AS(deliver(core, 0, {0.5}), InvariantViolation);
}

TEST_CASE("int32 overflow is detected") {
  AggregationCore core(Precision::Int4, 1);
  core.claim(0, 0, 1);
  deliver(core, 0, {2147483000.0});
  CHECK_THROWS_AS(deliver(core, 0, {1000.0}), InvariantViolation);
}

TEST_CASE("ownership") {
  AggregationCore core(Precision::Float32, 4);
  CHECK_THROWS_AS(core.accept(Flit{FlitKind::Head, 0}), InvariantViolation);
  core.claim(2, 0, 4);
  CHECK_THROWS_AS(core.accept(Flit{FlitKind::Head, 1}), InvariantViolation);
  CHECK_THROWS_AS(core.claim(3, 0, 4), InvariantViolation);
  CHECK_THROWS_AS(deliver(core, 2, {1, 2, 3, 4, 5}), InvariantViolation);
}

TEST_CASE("cores needed") {
  CHECK(cores_needed(16, 16) == 1);
  CHECK(cores_needed(17, 16) == 2);
  CHECK(cores_needed(1, 16) == 1);
  CHECK_THROWS_AS(cores_needed(0, 16), ContractViolation);
}

TEST_CASE("allocation slices features across cores") {
  EventQueue eq;
  AggregationSubnet net(eq, Precision::Float32, 2, 2, 4, 1);
  std::vector<std::size_t> got;
  net.allocate_pes(5, Precision::Float32, 10, [&](std::vector<std::size_t> c) { got = std::move(c); });
  CHECK(got == std::vector<std::size_t>{0, 1, 2});
  CHECK(net.core(2).offset() == 8);
  CHECK(net.core(2).length() == 2);
  CHECK(net.free_cores() == 1);
  CHECK(net.coord(3) == MeshCoord{1, 1});
  CHECK_THROWS_AS(net.allocate_pes(6, Precision::Int8, 4, [](auto) {}), ContractViolation);
  CHECK_THROWS_AS(net.allocate_pes(6, Precision::Float32, 20, [](auto) {}), ConfigError);
}

TEST_CASE("two slots get disjoint cores") {
  EventQueue eq;
  AggregationSubnet net(eq, Precision::Int8, 2, 2, 4, 1);
  std::vector<std::size_t> a, b;
  net.allocate_pes(0, Precision::Int8, 8, [&](auto c) { a = c; });
  net.allocate_pes(1, Precision::Int8, 8, [&](auto c) { b = c; });
  CHECK(a == std::vector<std::size_t>{0, 1});
  CHECK(b == std::vector<std::size_t>{2, 3});
  for (auto i : a) CHECK(net.core(i).owner() == 0);
  for (auto i : b) CHECK(net.core(i).owner() == 1);
}

TEST_CASE("queued request is granted the cycle after release") {
  EventQueue eq;
  AggregationSubnet net(eq, Precision::Float32, 1, 2, 4, 1);
  net.allocate_pes(0, Precision::Float32, 8, [](auto) {});
  Cycle granted = 0;
  std::vector<std::size_t> cores;
  eq.schedule(3, [&] {
    net.allocate_pes(1, Precision::Float32, 4, [&](auto c) {
      granted = eq.now();
      cores = c;
    });
    CHECK(net.queued() == 1);
  });
  eq.schedule(10, [&] { net.release(0); });
  eq.run();
  CHECK(granted == 11);
  CHECK(cores == std::vector<std::size_t>{0});
  CHECK(net.queued() == 0);
}

TEST_CASE("queue is FIFO even when a later request would fit") {
  EventQueue eq;
  AggregationSubnet net(eq, Precision::Float32, 1, 3, 4, 1);
  net.allocate_pes(0, Precision::Float32, 8, [](auto) {});
  std::vector<std::size_t> order;
  net.allocate_pes(1, Precision::Float32, 12, [&](auto) { order.push_back(1); });
  net.allocate_pes(2, Precision::Float32, 4, [&](auto) { order.push_back(2); });
  eq.schedule(5, [&] { net.release(0); });
  eq.run();
  CHECK(order == std::vector<std::size_t>{1});
}

TEST_CASE("buffer rows") {
  AggregationBuffer abf(2);
  CHECK(abf.acquire() == 0u);
  CHECK(abf.acquire() == 1u);
  CHECK_FALSE(abf.acquire().has_value());
  CHECK(abf.full());
  abf.free(0);
  CHECK(abf.acquire() == 0u);
  CHECK_THROWS_AS(abf.free(5), InvariantViolation);
}

TEST_CASE("single slot writes row 0") {
  EventQueue eq;
  AggregationBuffer abf(4);
  BufferingManager bm(eq, abf, 4);
  std::size_t row = 9;
  Cycle at = 0;
  bm.request(2, [&](std::size_t r, Cycle t) {
    row = r;
    at = t;
  });
  eq.run();
  CHECK(row == 0);
  CHECK(at == 2);
}

TEST_CASE("simultaneous writes are granted round-robin") {
  EventQueue eq;
  AggregationBuffer abf(8);
  BufferingManager bm(eq, abf, 4);
  std::vector<Cycle> at(4);
  eq.schedule(0, [&] {
    for (std::size_t s : {3, 1, 2}) bm.request(s, [&, s](std::size_t, Cycle t) { at[s] = t; });
  });
  // Arrives after slot 1 took the first grant at cycle 1.
  eq.schedule(2, [&] {
    bm.request(0, [&](std::size_t, Cycle t) { at[0] = t; });
  });
  eq.run();
  CHECK(bm.grant_log() == std::vector<std::size_t>{1, 2, 3, 0});
  CHECK(at[1] < at[2]);
  CHECK(at[2] < at[3]);
}

TEST_CASE("full buffer stalls without dropping") {
  EventQueue eq;
  AggregationBuffer abf(1);
  BufferingManager bm(eq, abf, 3);
  std::vector<std::size_t> rows;
  for (std::size_t s = 0; s < 3; ++s)
    bm.request(s, [&](std::size_t r, Cycle) { rows.push_back(r); });
  eq.schedule(20, [&] { abf.free(0); });
  eq.schedule(40, [&] { abf.free(0); });
  eq.run();
  CHECK(rows == std::vector<std::size_t>{0, 0, 0});
  CHECK(bm.stalls() >= 2);
  CHECK(eq.now() > 40);
}

}  // TEST_SUITE
