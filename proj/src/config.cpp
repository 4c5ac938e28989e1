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

#include "ample/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace ample {

std::string_view to_string(GraphSource s) { return s == GraphSource::Synthetic ? "synthetic" : "file"; }
std::string_view to_string(Generator g) { return g == Generator::PowerLaw ? "power_law" : "uniform"; }
std::string_view to_string(PrecisionPolicy p) {
  switch (p) {
    case PrecisionPolicy::AllFloat: return "float";
    case PrecisionPolicy::DegreeQuant: return "degree_quant";
    case PrecisionPolicy::Threshold: return "threshold";
    case PrecisionPolicy::File: return "file";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("config: " + std::string(key) + " = '" + std::string(value) + "' is not " +
                    std::string(expected));
}

template <class T>
T parse_unsigned(std::string_view key, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad_value(key, v, "a non-negative integer");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  std::string s(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    bad_value(key, v, "a number");
  }
  if (used != s.size()) bad_value(key, v, "a number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "a boolean");
}

// Shortest form that parses back to the same double.
std::string fmt_real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::array<std::uint64_t, kNumResources> parse_quad(std::string_view key, std::string_view v) {
  std::array<std::uint64_t, kNumResources> out{};
  std::size_t i = 0;
  while (true) {
    const auto comma = v.find(',');
    const auto tok = trim(v.substr(0, comma));
    if (i >= kNumResources) bad_value(key, v, "four comma-separated integers (LUT,FF,BRAM,DSP)");
    out[i++] = parse_unsigned<std::uint64_t>(key, tok);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (i != kNumResources) bad_value(key, v, "four comma-separated integers (LUT,FF,BRAM,DSP)");
  return out;
}

std::string fmt_quad(const std::array<std::uint64_t, kNumResources>& q) {
  std::string s;
  for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + std::to_string(q[i]);
  return s;
}

struct Field {
  std::string name;
  std::string doc;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field uint_field(std::string name, std::string doc, T& (*ref)(ExperimentConfig&)) {
  return {name, std::move(doc),
          [ref, name](ExperimentConfig& c, std::string_view v) { ref(c) = parse_unsigned<T>(name, v); },
          [ref](const ExperimentConfig& c) { return std::to_string(ref(const_cast<ExperimentConfig&>(c))); }};
}

Field real_field(std::string name, std::string doc, double& (*ref)(ExperimentConfig&)) {
  return {name, std::move(doc), [ref, name](ExperimentConfig& c, std::string_view v) { ref(c) = parse_real(name, v); },
          [ref](const ExperimentConfig& c) { return fmt_real(ref(const_cast<ExperimentConfig&>(c))); }};
}

Field bool_field(std::string name, std::string doc, bool& (*ref)(ExperimentConfig&)) {
  return {name, std::move(doc), [ref, name](ExperimentConfig& c, std::string_view v) { ref(c) = parse_bool(name, v); },
          [ref](const ExperimentConfig& c) { return std::string(ref(const_cast<ExperimentConfig&>(c)) ? "true" : "false"); }};
}

Field string_field(std::string name, std::string doc, std::string& (*ref)(ExperimentConfig&)) {
  return {name, std::move(doc), [ref](ExperimentConfig& c, std::string_view v) { ref(c) = std::string(v); },
          [ref](const ExperimentConfig& c) { return ref(const_cast<ExperimentConfig&>(c)); }};
}

template <class E>
Field enum_field(std::string name, std::string doc, E& (*ref)(ExperimentConfig&), E (*parse)(std::string_view)) {
  return {name, std::move(doc),
          [ref, parse, name](ExperimentConfig& c, std::string_view v) {
            try {
              ref(c) = parse(v);
            } catch (const std::exception& e) {
              throw ConfigError("config: " + name + ": " + e.what());
            }
          },
          [ref](const ExperimentConfig& c) { return std::string(to_string(ref(const_cast<ExperimentConfig&>(c)))); }};
}

GraphSource parse_source(std::string_view v) {
  if (v == "synthetic") return GraphSource::Synthetic;
  if (v == "file") return GraphSource::File;
  throw ConfigError("expected synthetic or file, got '" + std::string(v) + "'");
}

Generator parse_generator(std::string_view v) {
  if (v == "power_law") return Generator::PowerLaw;
  if (v == "uniform") return Generator::Uniform;
  throw ConfigError("expected power_law or uniform, got '" + std::string(v) + "'");
}

PrecisionPolicy parse_policy(std::string_view v) {
  if (v == "float") return PrecisionPolicy::AllFloat;
  if (v == "degree_quant") return PrecisionPolicy::DegreeQuant;
  if (v == "threshold") return PrecisionPolicy::Threshold;
  if (v == "file") return PrecisionPolicy::File;
  throw ConfigError("expected float, degree_quant, threshold or file, got '" + std::string(v) + "'");
}

Precision parse_low(std::string_view v) {
  const Precision p = parse_precision(v);
  if (p == Precision::Float32) throw ConfigError("precision.low must be int8 or int4");
  return p;
}

#define REF(expr) +[](ExperimentConfig& c) -> decltype(auto) { return (c.expr); }

std::vector<Field> make_fields() {
  std::vector<Field> f;
  // graph
  f.push_back(enum_field<GraphSource>("graph.source", "synthetic | file", REF(graph.source), parse_source));
  f.push_back(string_field("graph.path", "edge-list path when source = file", REF(graph.path)));
  f.push_back(uint_field<std::size_t>("graph.num_nodes", "node count", REF(graph.num_nodes)));
  f.push_back(bool_field("graph.undirected", "materialize both edge directions", REF(graph.undirected)));
  f.push_back(enum_field<Generator>("graph.generator", "power_law | uniform", REF(graph.generator), parse_generator));
  f.push_back(real_field("graph.gamma", "power-law exponent, > 1", REF(graph.gamma)));
  f.push_back(uint_field<std::size_t>("graph.max_degree", "power-law truncation, < num_nodes", REF(graph.max_degree)));
  f.push_back(uint_field<std::size_t>("graph.degree", "uniform generator degree", REF(graph.degree)));
  // model
  f.push_back(enum_field<ModelKind>("model.kind", "gcn | gin | sage", REF(model.kind), parse_model_kind));
  f.push_back(uint_field<std::size_t>("model.layers", "number of layers", REF(model.layers)));
  f.push_back(uint_field<std::size_t>("model.in_features", "input feature width", REF(model.in_features)));
  f.push_back(uint_field<std::size_t>("model.hidden", "GIN MLP / SAGE message width", REF(model.hidden)));
  f.push_back(uint_field<std::size_t>("model.out_features", "output width of every layer", REF(model.out_features)));
  f.push_back(enum_field<Activation>("model.sigma", "SAGE activation: identity | relu", REF(model.sigma), parse_activation));
  f.push_back(real_field("model.gin_eps", "GIN epsilon, >= 0", REF(model.gin_eps)));
  // precision
  f.push_back(enum_field<PrecisionPolicy>("precision.policy", "float | degree_quant | threshold | file",
                                          REF(precision.policy), parse_policy));
  f.push_back(real_field("precision.p_min", "degree_quant lower protection probability", REF(precision.p_min)));
  f.push_back(real_field("precision.p_max", "degree_quant upper protection probability", REF(precision.p_max)));
  f.push_back(enum_field<Precision>("precision.low", "unprotected precision: int8 | int4", REF(precision.low), parse_low));
  f.push_back(uint_field<std::size_t>("precision.int4_max_degree", "threshold: degree <= this runs int4",
                                      REF(precision.int4_max_degree)));
  f.push_back(uint_field<std::size_t>("precision.float_min_degree", "threshold: degree >= this runs float",
                                      REF(precision.float_min_degree)));
  f.push_back(string_field("precision.path", "assignment file when policy = file", REF(precision.path)));
  // hardware
  f.push_back(uint_field<std::size_t>("hardware.num_slots", "nodeslots (event-driven)", REF(hw.num_slots)));
  f.push_back(uint_field<Cycle>("hardware.host_program_cycles", "host cycles to program one slot",
                                REF(hw.host_program_cycles)));
  f.push_back(uint_field<Cycle>("hardware.nid_decode_cycles", "Programmed -> prefetch delay", REF(hw.nid_decode_cycles)));
  f.push_back(uint_field<std::size_t>("hardware.banks", "memory banks", REF(hw.memory.banks)));
  f.push_back(uint_field<Cycle>("hardware.memory_latency", "fixed read latency, cycles", REF(hw.memory.latency)));
  f.push_back(uint_field<std::size_t>("hardware.words_per_cycle", "bank streaming bandwidth",
                                      REF(hw.memory.words_per_cycle)));
  f.push_back(uint_field<std::size_t>("hardware.message_queue_capacity", "Fetch Tag message queue entries",
                                      REF(hw.message_queue_capacity)));
  f.push_back(bool_field("hardware.partial_response", "unblock aggregation on a full message queue",
                         REF(hw.partial_response)));
  f.push_back(uint_field<std::size_t>("hardware.core_width", "features per aggregation core", REF(hw.core_width)));
  f.push_back(uint_field<std::size_t>("hardware.flit_words", "data words per body flit", REF(hw.flit_words)));
  f.push_back(uint_field<std::size_t>("hardware.mesh_float_rows", "0 = from budget", REF(hw.mesh[0].rows)));
  f.push_back(uint_field<std::size_t>("hardware.mesh_float_cols", "0 = from budget", REF(hw.mesh[0].cols)));
  f.push_back(uint_field<std::size_t>("hardware.mesh_int8_rows", "0 = from budget", REF(hw.mesh[1].rows)));
  f.push_back(uint_field<std::size_t>("hardware.mesh_int8_cols", "0 = from budget", REF(hw.mesh[1].cols)));
  f.push_back(uint_field<std::size_t>("hardware.mesh_int4_rows", "0 = from budget", REF(hw.mesh[2].rows)));
  f.push_back(uint_field<std::size_t>("hardware.mesh_int4_cols", "0 = from budget", REF(hw.mesh[2].cols)));
  const char* prec_names[] = {"float", "int8", "int4"};
  for (std::size_t p = 0; p < 3; ++p) {
    const std::string base = std::string("hardware.budget_") + prec_names[p];
    for (int which = 0; which < 2; ++which) {
      const std::string name = base + (which == 0 ? "_max" : "_cost");
      f.push_back({name, which == 0 ? "resource budget LUT,FF,BRAM,DSP" : "per-nodeslot cost LUT,FF,BRAM,DSP",
                   [p, which, name](ExperimentConfig& c, std::string_view v) {
                     auto& pb = c.hw.budget.per_precision[p];
                     (which == 0 ? pb.max : pb.cost) = parse_quad(name, v);
                   },
                   [p, which](const ExperimentConfig& c) {
                     const auto& pb = c.hw.budget.per_precision[p];
                     return fmt_quad(which == 0 ? pb.max : pb.cost);
                   }});
    }
  }
  f.push_back(bool_field("hardware.strict_feasibility", "floor instead of ceiling in the slot allocation",
                         REF(hw.strict_feasibility)));
  f.push_back(uint_field<std::size_t>("hardware.abf_rows", "aggregation buffer rows, 0 = one per slot", REF(hw.abf_rows)));
  f.push_back(uint_field<std::size_t>("hardware.systolic_rows", "systolic array rows", REF(hw.systolic.rows)));
  f.push_back(uint_field<std::size_t>("hardware.systolic_cols", "systolic array columns", REF(hw.systolic.cols)));
  f.push_back(uint_field<Cycle>("hardware.weight_latency", "weight channel latency", REF(hw.weight_channel.latency)));
  f.push_back(uint_field<std::size_t>("hardware.weight_words_per_cycle", "weight channel bandwidth",
                                      REF(hw.weight_channel.words_per_cycle)));
  f.push_back(real_field("hardware.clock_mhz", "clock for wall-clock figures", REF(hw.clock_mhz)));
  // scheduler
  f.push_back(enum_field<sim::Scheduler>("scheduler.policy", "event_driven | double_buffered", REF(hw.scheduler),
                                         sim::parse_scheduler));
  f.push_back(uint_field<std::size_t>("scheduler.batch_size", "double-buffered batch size", REF(hw.batch_size)));
  // run
  f.push_back(uint_field<std::uint64_t>("run.seed", "top-level seed", REF(run.seed)));
  f.push_back(string_field("run.out_dir", "output directory", REF(run.out_dir)));
  f.push_back(bool_field("run.trace", "write trace.txt", REF(run.trace)));
  return f;
}

#undef REF

const std::vector<Field>& fields() {
  static const std::vector<Field> f = make_fields();
  return f;
}

const Field& find_field(std::string_view name) {
  for (const auto& f : fields()) {
    if (f.name == name) return f;
  }
  throw ConfigError("config: unknown key '" + std::string(name) + "'");
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& f : fields()) k.push_back({f.name, f.doc});
    return k;
  }();
  return keys;
}

void ExperimentConfig::set(std::string_view dotted_key, std::string_view value) {
  find_field(dotted_key).set(*this, trim(value));
}

std::string ExperimentConfig::get(std::string_view dotted_key) const { return find_field(dotted_key).get(*this); }

std::string ExperimentConfig::to_ini() const {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.name.find('.');
    const std::string sec = f.name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << '\n';
      os << '[' << sec << "]\n";
      section = sec;
    }
    os << f.name.substr(dot + 1) << " = " << f.get(*this) << '\n';
  }
  return os.str();
}

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  ExperimentConfig cfg;
  std::string section;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    if (section.empty()) throw ConfigError(where + ": key outside of any [section]");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace ample
