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

#include "ample/quant.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ample/rng.hpp"

namespace ample {

std::string_view to_string(Precision p) {
  switch (p) {
    case Precision::Float32: return "float";
    case Precision::Int8: return "int8";
    case Precision::Int4: return "int4";
  }
  return "?";
}

Precision parse_precision(std::string_view s) {
  if (s == "float" || s == "float32") return Precision::Float32;
  if (s == "int8") return Precision::Int8;
  if (s == "int4") return Precision::Int4;
  throw ParseError("unknown precision '" + std::string(s) + "'");
}

int bit_width(Precision p) {
  switch (p) {
    case Precision::Float32: return 32;
    case Precision::Int8: return 8;
    case Precision::Int4: return 4;
  }
  return 0;
}

QuantParams QuantParams::for_bits(int bits, double scale, double zero_point) {
  if (bits < 2 || bits > 16) throw std::invalid_argument("QuantParams: unsupported bit width");
  QuantParams qp;
  qp.bits = bits;
  qp.scale = scale;
  qp.zero_point = zero_point;
  qp.q_min = -(1 << (bits - 1));
  qp.q_max = (1 << (bits - 1)) - 1;
  return qp;
}

void QuantParams::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("QuantParams: scale must be > 0");
  if (!(q_min < q_max)) throw std::invalid_argument("QuantParams: q_min must be < q_max");
  if (!std::isfinite(zero_point)) throw std::invalid_argument("QuantParams: zero point must be finite");
}

std::int32_t quantize(double x, const QuantParams& qp) {
  qp.validate();
  if (!std::isfinite(x)) throw std::invalid_argument("quantize: non-finite input");
  // nearbyint honours the default FE_TONEAREST mode: ties go to even.
  const double r = std::nearbyint(x / qp.scale + qp.zero_point);
  const double clamped = std::min<double>(qp.q_max, std::max<double>(qp.q_min, r));
  return static_cast<std::int32_t>(clamped);
}

double dequantize(std::int32_t code, const QuantParams& qp) {
  return (static_cast<double>(code) - qp.zero_point) * qp.scale;
}

QuantParams calibrate(std::span<const double> tensor, int bits) {
  if (tensor.empty()) throw std::invalid_argument("calibrate: empty tensor");
  double amax = 0.0;
  for (double v : tensor) {
    if (!std::isfinite(v)) throw std::invalid_argument("calibrate: non-finite value");
    amax = std::max(amax, std::abs(v));
  }
  QuantParams qp = QuantParams::for_bits(bits, 1.0);
  qp.scale = std::max(amax / qp.q_max, kMinScale);
  return qp;
}

std::vector<std::int32_t> quantize_tensor(std::span<const double> values, const QuantParams& qp) {
  std::vector<std::int32_t> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return quantize(v, qp); });
  return out;
}

std::vector<double> dequantize_tensor(std::span<const std::int32_t> codes, const QuantParams& qp) {
  std::vector<double> out(codes.size());
  std::transform(codes.begin(), codes.end(), out.begin(), [&](std::int32_t c) { return dequantize(c, qp); });
  return out;
}

std::size_t PrecisionAssignment::count(Precision p) const {
  return static_cast<std::size_t>(std::count(precision.begin(), precision.end(), p));
}

double PrecisionAssignment::protected_ratio() const {
  if (precision.empty()) return 0.0;
  return static_cast<double>(count(Precision::Float32)) / static_cast<double>(precision.size());
}

std::vector<double> protection_probabilities(const Graph& g, double p_min, double p_max) {
  if (!(p_min >= 0.0 && p_min <= p_max && p_max <= 1.0)) {
    throw std::invalid_argument("degree quant: need 0 <= p_min <= p_max <= 1");
  }
  const DegreeStats s = degree_stats(g);
  std::vector<double> p(g.num_nodes(), p_min);
  if (s.max == s.min) return p;
  const double span = static_cast<double>(s.max - s.min);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = p_min + static_cast<double>(s.degree[i] - s.min) * (p_max - p_min) / span;
  }
  return p;
}

PrecisionAssignment degree_quant_assign(const Graph& g, double p_min, double p_max, std::uint64_t seed,
                                        Precision low) {
  const auto p = protection_probabilities(g, p_min, p_max);
  Rng rng(seed);
  PrecisionAssignment a;
  a.precision.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) a.precision[i] = rng.bernoulli(p[i]) ? Precision::Float32 : low;
  return a;
}

PrecisionAssignment degree_threshold_assign(const Graph& g, std::size_t int4_max_degree,
                                            std::size_t float_min_degree) {
  if (int4_max_degree >= float_min_degree) {
    throw std::invalid_argument("degree_threshold_assign: int4_max_degree must be < float_min_degree");
  }
  PrecisionAssignment a;
  a.precision.resize(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const std::size_t d = g.degree(v);
    a.precision[v] = d >= float_min_degree ? Precision::Float32
                     : d <= int4_max_degree ? Precision::Int4
                                            : Precision::Int8;
  }
  return a;
}

void write_assignment(const std::filesystem::path& path, const PrecisionAssignment& a) {
  std::ofstream f(path);
  if (!f) throw IngestionError("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < a.size(); ++i) f << i << ' ' << to_string(a.precision[i]) << '\n';
}

PrecisionAssignment parse_assignment(std::string_view text, std::size_t num_nodes) {
  PrecisionAssignment a;
  a.precision.assign(num_nodes, Precision::Float32);
  std::vector<bool> seen(num_nodes, false);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long id = -1;
    std::string prec;
    if (!(fields >> id >> prec)) throw ParseError("assignment line " + std::to_string(lineno) + ": expected 'node_id precision'");
    if (id < 0 || static_cast<unsigned long long>(id) >= num_nodes) {
      throw IngestionError("assignment line " + std::to_string(lineno) + ": node " + std::to_string(id) + " out of range");
    }
    a.precision[static_cast<std::size_t>(id)] = parse_precision(prec);
    seen[static_cast<std::size_t>(id)] = true;
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (!seen[i]) throw IngestionError("assignment has no entry for node " + std::to_string(i));
  }
  return a;
}

PrecisionAssignment read_assignment(const std::filesystem::path& path, std::size_t num_nodes) {
  std::ifstream f(path);
  if (!f) throw IngestionError("cannot open assignment '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_assignment(ss.str(), num_nodes);
}

ResourceBudget ResourceBudget::synthetic_default() {
  ResourceBudget b;
  // float cores cost roughly 4x an int8 core; int4 half an int8 core.
  b[Precision::Float32] = {{640000, 1280000, 1280, 2560}, {10000, 20000, 20, 40}};
  b[Precision::Int8] = {{160000, 320000, 640, 640}, {2500, 5000, 10, 10}};
  b[Precision::Int4] = {{80000, 160000, 320, 320}, {1250, 2500, 5, 5}};
  return b;
}

std::size_t nodeslot_allocation(const ResourceBudget& budget, Precision p, bool strict_feasibility) {
  const PrecisionBudget& pb = budget[p];
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  bool any = false;
  for (std::size_t r = 0; r < kNumResources; ++r) {
    const std::uint64_t c = pb.cost[r];
    if (c == 0) continue;
    any = true;
    // ceil and floor are monotone, so min of ceilings equals ceiling of the min.
    const std::uint64_t q = strict_feasibility ? pb.max[r] / c : (pb.max[r] + c - 1) / c;
    best = std::min(best, q);
  }
  if (!any) throw std::invalid_argument("nodeslot_allocation: no resource with non-zero cost");
  return static_cast<std::size_t>(best);
}

}  // namespace ample
