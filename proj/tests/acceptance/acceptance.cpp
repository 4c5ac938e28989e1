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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "ample/experiment.hpp"
#include "ample/quant.hpp"
#include "ample/rng.hpp"
#include "ample/sim/audit.hpp"
#include "cli.hpp"
#include "oracles/dense_oracle.hpp"

namespace fs = std::filesystem;
using namespace ample;
using namespace ample::sim;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Every simulation in this binary is audited.
struct AuditTally {
  std::size_t runs = 0;
  std::size_t failed = 0;
  std::size_t transitions = 0;
  void add(const SimResult& r, std::size_t layers) {
    const auto a = audit_trace(r.trace, r.report.num_nodes, layers);
    const auto& c = r.report.counters;
    const bool conserved = c.nodes_programmed == c.slots_freed && c.nodes_programmed == r.report.num_nodes * layers &&
                           c.flits_injected == c.flits_consumed && c.words_requested == c.words_delivered;
    ++runs;
    failed += !(a.ok && conserved);
    transitions += a.transitions;
  }
};

AuditTally g_audit;

SimResult sim_run(const Workload& w, const SimConfig& hw) {
  auto r = simulate(w.graph, w.model, w.layers, w.features, w.assignment, hw);
  g_audit.add(r, w.layers.size());
  return r;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Simulator against the sparse reference, all-float.
Verdict oracle_equivalence() {
  double worst = 0;
  std::size_t runs = 0;
  for (std::uint64_t g = 0; g < 50; ++g) {
    ExperimentConfig cfg;
    cfg.run.seed = 1000 + g;
    cfg.graph.num_nodes = 16 + (g * 37) % 241;
    cfg.graph.generator = g % 2 ? Generator::Uniform : Generator::PowerLaw;
    cfg.graph.max_degree = std::max<std::size_t>(1, cfg.graph.num_nodes / 3);
    cfg.graph.degree = 1 + g % 7;
    cfg.model.in_features = 8 + g % 12;
    cfg.model.hidden = 12;
    cfg.model.out_features = 10;
    cfg.hw.num_slots = 1 + (g * 13) % 64;
    for (ModelKind k : {ModelKind::GCN, ModelKind::GIN, ModelKind::GraphSAGE}) {
      cfg.model.kind = k;
      const Workload w = build_workload(cfg);
      const auto r = sim_run(w, cfg.hw);
      const auto ref = run_model(w.graph, w.features, w.model, w.layers);
      worst = std::max(worst, max_relative_error(r.output, ref));
      ++runs;
    }
  }
  return {worst <= 1e-5, fmt("%zu runs, max relative error %.3g (tol 1e-5)", runs, worst)};
}

// 2. Sparse reference against dense matrix forms.
Verdict dense_oracle() {
  double worst = 0;
  std::size_t runs = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::size_t n = 4 + s % 61;
    Rng rng(derive_seed(s, "dense"));
    const Graph g = s % 3 == 0 ? generate_uniform_degree_graph(n, 1 + s % 3, s)
                               : generate_power_law_graph(n, 2.0 + 0.1 * (s % 5), n - 1, s);
    const FeatureMatrix x = make_random_features(n, 5, rng);
    const auto xe = oracle::to_eigen(x);
    for (ModelKind k : {ModelKind::GCN, ModelKind::GIN, ModelKind::GraphSAGE}) {
      const auto w = make_random_weights(k, {5, 7, 4}, rng, 0.2);
      const ModelConfig cfg = ModelConfig::preset(k);
      const auto got = oracle::to_eigen(message_passing_layer(g, x, cfg, w));
      worst = std::max(worst, oracle::max_relative_error(got, oracle::layer(g, xe, cfg, w)));
      ++runs;
    }
  }
  return {worst <= 1e-6, fmt("%zu graphs x models (n <= 64), max relative error %.3g (tol 1e-6)", runs, worst)};
}

// Round half to even, written without nearbyint.
double half_even(double v) {
  const double f = std::floor(v);
  const double d = v - f;
  if (d < 0.5) return f;
  if (d > 0.5) return f + 1;
  return std::fmod(f, 2.0) == 0.0 ? f : f + 1;
}

// 3. Scalar quantization scanned on a dense grid.
Verdict quant_grid() {
  std::size_t points = 0, bad = 0;
  std::size_t params = 0;
  for (int bits : {8, 4}) {
    for (double scale : {0.25, 0.01, 1.0 / 127, 0.3}) {
      for (double z : {0.0, 2.0, -3.0}) {
        const auto qp = QuantParams::for_bits(bits, scale, z);
        ++params;
        const double lo = (qp.q_min - z - 4) * scale;
        const double hi = (qp.q_max - z + 4) * scale;
        const int N = 100000;
        std::int32_t prev = qp.q_min;
        for (int i = 0; i < N; ++i) {
          const double x = lo + (hi - lo) * i / (N - 1);
          const std::int32_t q = quantize(x, qp);
          ++points;
          const double expect = std::min<double>(qp.q_max, std::max<double>(qp.q_min, half_even(x / scale + z)));
          bool ok = q == static_cast<std::int32_t>(expect) && q >= prev && q >= qp.q_min && q <= qp.q_max;
          const double u = x / scale + z;
          if (u >= qp.q_min && u <= qp.q_max) ok = ok && std::abs(dequantize(q, qp) - x) <= scale / 2 * (1 + 1e-12);
          if (u > qp.q_max + 0.5) ok = ok && q == qp.q_max;
          if (u < qp.q_min - 0.5) ok = ok && q == qp.q_min;
          bad += !ok;
          prev = q;
        }
      }
    }
  }
  return {bad == 0, fmt("%zu points over %zu parameter sets (int8, int4): %zu violations", points, params, bad)};
}

// Smallest N with N * C_r >= R_r for some costed resource (the ceiling of the
// binding ratio), and largest N that fits every resource.
std::pair<std::uint64_t, std::uint64_t> brute_force_slots(const PrecisionBudget& b) {
  std::uint64_t ceil_n = 0;
  while (true) {
    bool reached = false;
    bool all = true;
    for (std::size_t r = 0; r < kNumResources; ++r) {
      if (b.cost[r] == 0) continue;
      reached = reached || ceil_n * b.cost[r] >= b.max[r];
      all = all && ceil_n * b.cost[r] >= b.max[r];
    }
    (void)all;
    if (reached) break;
    ++ceil_n;
  }
  std::uint64_t floor_n = 0;
  while (true) {
    bool fits = true;
    for (std::size_t r = 0; r < kNumResources; ++r)
      if (b.cost[r] > 0 && (floor_n + 1) * b.cost[r] > b.max[r]) fits = false;
    if (!fits) break;
    ++floor_n;
  }
  return {ceil_n, floor_n};
}

// 4. Nodeslot allocation against brute force.
Verdict nodeslot_exactness() {
  std::size_t mismatches = 0;
  ResourceBudget ex;
  ex[Precision::Int8].max = {1000, 2000, 0, 0};
  ex[Precision::Int8].cost = {300, 450, 0, 0};
  const bool example = nodeslot_allocation(ex, Precision::Int8) == 4;
  Rng rng(404);
  for (int t = 0; t < 100; ++t) {
    ResourceBudget b;
    const Precision p = kAllPrecisions[t % 3];
    auto& pb = b[p];
    for (std::size_t r = 0; r < kNumResources; ++r) {
      pb.max[r] = rng.below(5000);
      pb.cost[r] = rng.below(4) == 0 ? 0 : 1 + rng.below(400);
    }
    if (std::all_of(pb.cost.begin(), pb.cost.end(), [](auto c) { return c == 0; })) pb.cost[t % 4] = 7;
    const auto [c, f] = brute_force_slots(pb);
    mismatches += nodeslot_allocation(b, p) != c;
    mismatches += nodeslot_allocation(b, p, true) != f;
  }
  return {example && mismatches == 0,
          fmt("100 random budgets, %zu mismatches; ceil(3.33) example -> %s", mismatches, example ? "4" : "wrong")};
}

// 5. Bernoulli protection: empirical ratio vs analytic expectation.
Verdict degree_quant_stats() {
  const std::size_t n = 10000;
  const Graph g = generate_power_law_graph(n, 2.0, 100, 5555);
  const auto p = protection_probabilities(g, 0.0, 0.1);
  const auto deg = g.degrees();
  bool monotone = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : {(i * 7919 + 1) % n, (i + 1) % n})
      if (deg[i] < deg[j] && p[i] > p[j]) monotone = false;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return deg[a] < deg[b]; });
  for (std::size_t k = 1; k < n; ++k) monotone = monotone && p[order[k - 1]] <= p[order[k]];

  double mu = 0, var = 0;
  for (double x : p) {
    mu += x;
    var += x * (1 - x);
  }
  mu /= n;
  const double sigma = std::sqrt(var) / n;
  std::size_t outside = 0;
  double mean_ratio = 0;
  double worst_z = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const double ratio = degree_quant_assign(g, 0.0, 0.1, derive_seed(s, "precision")).protected_ratio();
    const double z = std::abs(ratio - mu) / sigma;
    worst_z = std::max(worst_z, z);
    outside += z > 3.0;
    mean_ratio += ratio / 50;
  }
  const bool mean_ok = std::abs(mean_ratio - mu) <= 3 * sigma / std::sqrt(50.0);
  return {monotone && outside == 0 && mean_ok,
          fmt("expected ratio %.5f, mean empirical %.5f, worst |z| %.2f, %zu/50 seeds outside 3 sigma, monotone %s", mu,
              mean_ratio, worst_z, outside, monotone ? "yes" : "no")};
}

// 6. Event-driven against double-buffered on power-law graphs.
Verdict scheduling_dominance() {
  std::size_t losses = 0;
  double mean_gain = 0;
  double min_gain = 1;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    ExperimentConfig cfg;
    cfg.run.seed = s;
    cfg.graph.num_nodes = 5000;
    cfg.graph.gamma = 2.0;
    cfg.hw.num_slots = 64;
    cfg.hw.batch_size = 64;
    const Workload w = build_workload(cfg);
    cfg.hw.scheduler = Scheduler::EventDriven;
    const auto ed = sim_run(w, cfg.hw);
    cfg.hw.scheduler = Scheduler::DoubleBuffered;
    const auto db = sim_run(w, cfg.hw);
    const double e = static_cast<double>(ed.report.total_cycles);
    const double d = static_cast<double>(db.report.total_cycles);
    losses += e > d;
    const double gain = 1.0 - e / d;
    mean_gain += gain / 20;
    min_gain = std::min(min_gain, gain);
  }
  return {losses == 0 && mean_gain >= 0.10,
          fmt("20 seeds: event-driven slower on %zu, mean cycle reduction %.1f%% (min %.1f%%, need >= 10%%)", losses,
              100 * mean_gain, 100 * min_gain)};
}

// 7. Aggregation starts before the last neighbor arrives, and hiding matters.
Verdict partial_response() {
  // Light nodes with every fiftieth node heavy, so heavy nodes rarely share
  // the mesh and the measured gap is the mechanism's own.
  const std::size_t n = 1000;
  std::vector<Edge> e;
  Rng rng(77);
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t deg = v % 50 == 0 ? 40 + rng.below(80) : 1 + rng.below(4);
    std::vector<NodeId> picks;
    while (picks.size() < deg) {
      const auto u = static_cast<NodeId>(rng.below(n));
      if (u != v && std::find(picks.begin(), picks.end(), u) == picks.end()) picks.push_back(u);
    }
    for (auto u : picks) e.push_back({v, u, 1.0});
  }
  Workload w{build_csr(e, n), {}, ModelConfig::gcn(), {}, {}};
  Rng frng(78);
  w.features = make_random_features(n, 16, frng);
  w.layers.push_back(make_random_weights(ModelKind::GCN, {16, 16, 16}, frng));
  w.assignment = PrecisionAssignment::uniform(n, Precision::Float32);
  SimConfig hw;
  // One bank per slot, so a node's fetch rate depends on the mechanism rather
  // than on which neighbour shares its bank.
  hw.memory.banks = hw.num_slots;
  const auto on = sim_run(w, hw);
  hw.partial_response = false;
  const auto off = sim_run(w, hw);
  std::size_t heavy = 0, early = 0, slower = 0;
  double sum_on = 0, sum_off = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (on.nodes[v].degree <= hw.message_queue_capacity) continue;
    ++heavy;
    early += on.nodes[v].agg_start < on.nodes[v].fetch_done;
    slower += off.nodes[v].latency() > on.nodes[v].latency();
    sum_on += static_cast<double>(on.nodes[v].latency());
    sum_off += static_cast<double>(off.nodes[v].latency());
  }
  const bool ok = heavy > 0 && early == heavy && slower == heavy;
  return {ok, fmt("%zu nodes above capacity: %zu start early, %zu slower without it (mean latency %.0f -> %.0f cycles)",
                  heavy, early, slower, sum_on / heavy, sum_off / heavy)};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "amplesim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8. Byte-identical reruns; audit results of every run above.
Verdict determinism(const fs::path& work) {
  std::size_t identical = 0, configs = 0;
  struct Variant {
    std::vector<std::string> args;
    std::size_t layers;
  };
  const std::vector<Variant> variants{
      {{"--set", "model.kind=gcn"}, 1},
      {{"--set", "model.kind=gin", "--set", "precision.policy=degree_quant", "--set", "precision.p_max=0.3"}, 1},
      {{"--set", "model.kind=sage", "--set", "model.layers=2", "--scheduler", "both"}, 2},
      {{"--set", "precision.policy=threshold", "--set", "hardware.num_slots=7"}, 1},
  };
  bool audited = true;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    ++configs;
    std::string sums[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = work / ("det_" + std::to_string(i) + "_" + std::to_string(rep));
      fs::remove_all(dir);
      std::vector<std::string> args{"run", "--set", "graph.num_nodes=800", "--seed", std::to_string(40 + i),
                                    "--trace", "--out-dir", dir.string()};
      args.insert(args.end(), variants[i].args.begin(), variants[i].args.end());
      if (run_cli(args) != 0) return {false, "cli run failed for variant " + std::to_string(i)};
      sums[rep] = slurp(dir / "summary.csv");
      std::ifstream t(dir / "trace.txt");
      const auto entries = read_trace(t);
      audited = audited && audit_trace(entries, 800, variants[i].layers).ok;
    }
    identical += !sums[0].empty() && sums[0] == sums[1];
  }
  const bool ok = identical == configs && audited && g_audit.failed == 0 && g_audit.runs > 0;
  return {ok, fmt("%zu/%zu configs byte-identical; audited %zu simulations, %zu transitions, %zu failures", identical,
                  configs, g_audit.runs, g_audit.transitions, g_audit.failed)};
}

// 9. Throughput against slot count.
Verdict throughput_monotone() {
  ExperimentConfig cfg;
  cfg.graph.num_nodes = 10000;
  cfg.run.seed = 9;
  const Workload w = build_workload(cfg);
  std::string detail = "nodes/cycle:";
  double prev = 0;
  bool ok = true;
  for (std::size_t slots : {1, 4, 16, 64}) {
    cfg.hw.num_slots = slots;
    const auto r = sim_run(w, cfg.hw);
    ok = ok && r.report.throughput >= prev;
    prev = r.report.throughput;
    detail += fmt(" %zu->%.5f", slots, r.report.throughput);
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "amplesim_acceptance";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--work-dir") work = argv[i + 1];
  fs::create_directories(work);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> fn;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", 120, oracle_equivalence},
      {2, "dense-oracle equivalence", 30, dense_oracle},
      {3, "quantization grid scan", 10, quant_grid},
      {4, "nodeslot allocation exactness", 1, nodeslot_exactness},
      {5, "degree-quant statistics", 30, degree_quant_stats},
      {6, "scheduling dominance", 300, scheduling_dominance},
      {7, "partial-response latency hiding", 60, partial_response},
      {9, "throughput monotonicity", 180, throughput_monotone},
      {8, "determinism and conservation", 600, [&] { return determinism(work); }},
  };
  int failures = 0;
  std::vector<std::string> lines(10);
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    const bool in_time = secs <= c.budget_s;
    const bool pass = v.pass && in_time;
    failures += !pass;
    lines[c.id] = fmt("criterion %d %-32s %s  ", c.id, c.name, pass ? "PASS" : "FAIL") + v.detail +
                  fmt(" [%.2fs, budget %.0fs]", secs, c.budget_s);
  }
  for (int i = 1; i <= 9; ++i) std::cout << lines[i] << '\n';
  std::cout << (failures == 0 ? "all criteria passed" : fmt("%d criteria failed", failures)) << '\n';
  return failures == 0 ? 0 : 1;
}
