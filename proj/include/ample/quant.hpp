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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "ample/graph.hpp"
#include "ample/matrix.hpp"

namespace ample {

enum class Precision : std::uint8_t { Float32 = 0, Int8 = 1, Int4 = 2 };
inline constexpr std::array<Precision, 3> kAllPrecisions{Precision::Float32, Precision::Int8, Precision::Int4};

std::string_view to_string(Precision p);
Precision parse_precision(std::string_view s);
int bit_width(Precision p);  // 32, 8, 4

struct QuantParams {
  double scale = 1.0;
  double zero_point = 0.0;
  std::int32_t q_min = -128;
  std::int32_t q_max = 127;
  int bits = 8;

  // Signed symmetric range for 8 or 4 bits.
  static QuantParams for_bits(int bits, double scale, double zero_point = 0.0);
  void validate() const;  // throws std::invalid_argument
};

/// min(q_max, max(q_min, round(x / s + z))), round half to even.
std::int32_t quantize(double x, const QuantParams& qp);
double dequantize(std::int32_t code, const QuantParams& qp);

// Scale floor used when a tensor is all zeros.
inline constexpr double kMinScale = 1e-12;

/// Symmetric: s = max|x| / q_max, z = 0, s floored at kMinScale.
QuantParams calibrate(std::span<const double> tensor, int bits);

std::vector<std::int32_t> quantize_tensor(std::span<const double> values, const QuantParams& qp);
std::vector<double> dequantize_tensor(std::span<const std::int32_t> codes, const QuantParams& qp);

struct PrecisionAssignment {
  std::vector<Precision> precision;

  std::size_t size() const noexcept { return precision.size(); }
  std::size_t count(Precision p) const;
  // Fraction of nodes kept in Float32.
  double protected_ratio() const;
  static PrecisionAssignment uniform(std::size_t n, Precision p) { return {std::vector<Precision>(n, p)}; }
  bool operator==(const PrecisionAssignment&) const = default;
};

/// p_i = p_min + (deg_i - deg_min)(p_max - p_min)/(deg_max - deg_min);
/// every p_i = p_min when all degrees are equal.
std::vector<double> protection_probabilities(const Graph& g, double p_min, double p_max);

/// One Bernoulli(p_i) draw per node in ID order from a generator seeded with
/// `seed`. Protected nodes run Float32, the rest `low` (Int8 by default).
PrecisionAssignment degree_quant_assign(const Graph& g, double p_min, double p_max, std::uint64_t seed,
                                        Precision low = Precision::Int8);

/// Deterministic three-tier mode: deg >= float_min_degree -> Float32,
/// deg <= int4_max_degree -> Int4, otherwise Int8.
PrecisionAssignment degree_threshold_assign(const Graph& g, std::size_t int4_max_degree,
                                            std::size_t float_min_degree);

// Text form: one "node_id precision" per line, precision in {float,int8,int4}.
void write_assignment(const std::filesystem::path& path, const PrecisionAssignment& a);
PrecisionAssignment read_assignment(const std::filesystem::path& path, std::size_t num_nodes);
PrecisionAssignment parse_assignment(std::string_view text, std::size_t num_nodes);

enum class Resource : std::uint8_t { LUT = 0, FF = 1, BRAM = 2, DSP = 3 };
inline constexpr std::size_t kNumResources = 4;

struct PrecisionBudget {
  std::array<std::uint64_t, kNumResources> max{};   // R^max per resource
  std::array<std::uint64_t, kNumResources> cost{};  // per-nodeslot cost C; 0 = not consumed
};

struct ResourceBudget {
  std::array<PrecisionBudget, 3> per_precision{};
  PrecisionBudget& operator[](Precision p) { return per_precision[static_cast<std::size_t>(p)]; }
  const PrecisionBudget& operator[](Precision p) const { return per_precision[static_cast<std::size_t>(p)]; }

  // Synthetic budget giving 64 nodeslots for every precision.
  static ResourceBudget synthetic_default();
};

/// N_p = ceil(min_r R_r / C_r) over the resources with C_r > 0, or the floor
/// when strict_feasibility is set. Computed in exact integer arithmetic.
/// Throws std::invalid_argument if no resource has a non-zero cost.
std::size_t nodeslot_allocation(const ResourceBudget& budget, Precision p, bool strict_feasibility = false);

}  // namespace ample
