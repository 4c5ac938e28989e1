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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ample/gnn.hpp"
#include "ample/quant.hpp"
#include "ample/sim/simulator.hpp"

namespace ample {

enum class GraphSource { Synthetic, File };
enum class Generator { PowerLaw, Uniform };
enum class PrecisionPolicy { AllFloat, DegreeQuant, Threshold, File };

std::string_view to_string(GraphSource s);
std::string_view to_string(Generator g);
std::string_view to_string(PrecisionPolicy p);

struct GraphSection {
  GraphSource source = GraphSource::Synthetic;
  std::string path;
  std::size_t num_nodes = 1000;
  bool undirected = false;
  Generator generator = Generator::PowerLaw;
  double gamma = 2.0;
  std::size_t max_degree = 100;
  std::size_t degree = 4;  // uniform generator
};

struct ModelSection {
  ModelKind kind = ModelKind::GCN;
  std::size_t layers = 1;
  std::size_t in_features = 16;
  std::size_t hidden = 16;
  std::size_t out_features = 16;
  Activation sigma = Activation::ReLU;
  double gin_eps = 0.1;
};

struct PrecisionSection {
  PrecisionPolicy policy = PrecisionPolicy::AllFloat;
  double p_min = 0.0;
  double p_max = 0.1;
  Precision low = Precision::Int8;
  std::size_t int4_max_degree = 1;
  std::size_t float_min_degree = 32;
  std::string path;
};

struct RunSection {
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  bool trace = false;
};

/// Everything one experiment needs. Hardware and scheduler settings live in
/// the embedded SimConfig.
struct ExperimentConfig {
  GraphSection graph;
  ModelSection model;
  PrecisionSection precision;
  sim::SimConfig hw;
  RunSection run;

  /// Sets "section.key" from its text form; throws ConfigError for unknown
  /// keys or values that do not parse.
  void set(std::string_view dotted_key, std::string_view value);
  std::string get(std::string_view dotted_key) const;

  // Effective config with every key, in registry order.
  std::string to_ini() const;
};

struct ConfigKey {
  std::string name;  // section.key
  std::string doc;
};
const std::vector<ConfigKey>& config_keys();

/// INI-style text: [section] headers, "key = value" lines, '#' comments.
/// Unset keys keep their defaults.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace ample
