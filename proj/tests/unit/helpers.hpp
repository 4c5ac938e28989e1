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

#include "ample/config.hpp"
#include "ample/experiment.hpp"
#include "ample/sim/simulator.hpp"

namespace testing_support {

inline ample::ExperimentConfig small_config(ample::ModelKind kind, std::size_t n, std::uint64_t seed) {
  ample::ExperimentConfig c;
  c.graph.num_nodes = n;
  c.graph.max_degree = std::max<std::size_t>(1, n / 4);
  c.model.kind = kind;
  c.model.in_features = 8;
  c.model.hidden = 12;
  c.model.out_features = 6;
  c.run.seed = seed;
  c.hw.num_slots = 16;
  return c;
}

inline ample::sim::SimResult run(const ample::Workload& w, const ample::sim::SimConfig& hw) {
  return ample::sim::simulate(w.graph, w.model, w.layers, w.features, w.assignment, hw);
}

}  // namespace testing_support
