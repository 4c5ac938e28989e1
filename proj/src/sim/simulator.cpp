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

#include "ample/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "ample/sim/aggregation.hpp"
#include "ample/sim/event_queue.hpp"
#include "ample/sim/fetch_tag.hpp"
#include "ample/sim/noc.hpp"
#include "ample/sim/scoreboard.hpp"

namespace ample::sim {

std::string_view to_string(Scheduler s) {
  return s == Scheduler::EventDriven ? "event_driven" : "double_buffered";
}

Scheduler parse_scheduler(std::string_view s) {
  if (s == "event_driven") return Scheduler::EventDriven;
  if (s == "double_buffered") return Scheduler::DoubleBuffered;
  throw ConfigError("unknown scheduler '" + std::string(s) + "' (expected event_driven or double_buffered)");
}

MeshDims mesh_for_cores(std::size_t n) {
  if (n == 0) return {};
  auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (cols * cols < n) ++cols;
  while (cols > 1 && (cols - 1) * (cols - 1) >= n) --cols;
  return {(n + cols - 1) / cols, cols};
}

MeshDims resolve_mesh(const SimConfig& cfg, Precision p) {
  const MeshDims& m = cfg.mesh[static_cast<std::size_t>(p)];
  if (m.rows > 0 && m.cols > 0) return m;
  if (m.rows > 0 || m.cols > 0) throw ConfigError("mesh dimensions must both be set or both be zero");
  return mesh_for_cores(nodeslot_allocation(cfg.budget, p, cfg.strict_feasibility));
}

namespace {

std::size_t pidx(Precision p) { return static_cast<std::size_t>(p); }

class Simulation {
 public:
  Simulation(const Graph& g, const ModelConfig& model, const std::vector<LayerWeights>& layers,
             const FeatureMatrix& x, const PrecisionAssignment& assignment, const SimConfig& cfg);

  SimResult run();

 private:
  struct SlotRun {
    NodeId node = 0;
    Precision precision = Precision::Float32;
    std::size_t degree = 0;
    std::size_t record = 0;
    std::size_t batch = 0;
    Cycle entered = 0;
    std::vector<std::size_t> cores;
    std::size_t packets_out = 0;
    bool injecting = false;
    bool aggregating = false;
    bool fetch_complete = false;
    bool self_ready = false;
    bool finalized = false;
    std::size_t abf_row = 0;
    std::vector<double> m;
    std::vector<double> out_row;
  };

  bool double_buffered() const { return cfg_.scheduler == Scheduler::DoubleBuffered; }
  std::size_t batch_len(std::size_t b) const { return std::min(cfg_.batch_size, n_ - b * cfg_.batch_size); }

  void transition(std::size_t slot, NodeState to);
  void log(std::size_t slot, NodeState from, NodeState to);

  void start_layer(std::size_t l);
  void begin_programming();
  void end_layer();

  void host_pump();
  std::optional<std::size_t> pick_slot(NodeId node) const;
  void program(std::size_t slot, NodeId node);
  void start_prefetch(std::size_t slot);
  void request_pes(std::size_t slot);
  void on_pes(std::size_t slot, std::vector<std::size_t> cores);
  void agm_pump(std::size_t slot);
  void deliver(std::size_t slot, Packet&& p);
  void try_finalize(std::size_t slot);
  void fte_request(std::size_t slot);
  void schedule_fte(Precision p, Cycle at);
  void fte_arbitrate(Precision p);
  void write_back(std::size_t slot);
  void complete(std::size_t slot);
  void check_gate(std::size_t batch);
  [[noreturn]] void deadlock();

  const Graph& g_;
  const ModelConfig& model_;
  const std::vector<LayerWeights>& layers_;
  const FeatureMatrix& x0_;
  const PrecisionAssignment& assign_;
  SimConfig cfg_;
  std::size_t n_;
  std::size_t phys_;

  EventQueue eq_;
  MemorySystem mem_;
  std::vector<std::unique_ptr<FetchTag>> tags_;
  std::array<std::unique_ptr<AggregationSubnet>, 3> subnets_;
  AggregationBuffer abf_;
  BufferingManager bm_;
  std::array<SystolicArray, 3> fte_;
  WeightBank wbank_;
  HostState host_;
  StateAuditor auditor_;
  std::vector<SlotRun> run_;

  // Per-layer state.
  std::size_t layer_ = 0;
  FeatureMatrix x_cur_;
  FeatureMatrix x_next_;
  FeatureMatrix phi_;  // SAGE message table, otherwise empty
  bool projected_ = false;
  std::vector<double> dhat_;
  std::array<QuantParams, 3> msg_qp_{};
  std::array<QuantParams, 3> self_qp_{};
  std::unique_ptr<PreparedWeights> pw_;
  std::size_t in_dim_ = 0;
  std::size_t msg_dim_ = 0;
  std::size_t out_dim_ = 0;
  std::size_t done_in_layer_ = 0;
  bool programming_open_ = false;
  bool host_busy_ = false;
  NodeId next_node_ = 0;

  std::array<std::vector<bool>, 3> fte_pending_;
  std::array<std::size_t, 3> fte_rr_{};
  std::array<bool, 3> fte_scheduled_{};

  std::vector<std::size_t> batch_done_;
  std::vector<std::size_t> batch_fetched_;
  std::vector<bool> batch_open_;
  std::vector<std::vector<std::size_t>> batch_waiting_;

  std::vector<NodeRecord> records_;
  std::vector<TraceEntry> trace_;
  SimReport report_;
  bool finished_ = false;
};

Simulation::Simulation(const Graph& g, const ModelConfig& model, const std::vector<LayerWeights>& layers,
                       const FeatureMatrix& x, const PrecisionAssignment& assignment, const SimConfig& cfg)
    : g_(g),
      model_(model),
      layers_(layers),
      x0_(x),
      assign_(assignment),
      cfg_(cfg),
      n_(g.num_nodes()),
      phys_(cfg.num_slots),
      mem_(eq_, cfg.memory, phys_),
      abf_(cfg.abf_rows ? cfg.abf_rows : std::max<std::size_t>(phys_, 1)),
      bm_(eq_, abf_, phys_),
      fte_{SystolicArray(cfg.systolic), SystolicArray(cfg.systolic), SystolicArray(cfg.systolic)},
      wbank_(eq_, cfg.weight_channel),
      host_(phys_),
      auditor_(phys_),
      run_(phys_) {
  if (phys_ == 0) throw ConfigError("simulator: at least one nodeslot required");
  if (x.rows() != n_) throw ShapeError("simulator: feature rows do not match the graph");
  if (assignment.size() != n_) throw ShapeError("simulator: precision assignment length does not match the graph");
  if (layers.empty()) throw ConfigError("simulator: at least one layer required");
  std::size_t width = x.cols();
  for (const auto& l : layers) {
    validate_layer(model, l, width);
    width = output_width(model, l);
  }

  FetchTagConfig tc{cfg.message_queue_capacity, cfg.partial_response && !double_buffered()};
  for (std::size_t s = 0; s < phys_; ++s) tags_.push_back(std::make_unique<FetchTag>(s, eq_, mem_, tc));

  std::size_t max_msg = 0;
  width = x.cols();
  for (const auto& l : layers) {
    max_msg = std::max(max_msg, message_width(model, l, width));
    width = output_width(model, l);
  }
  for (Precision p : kAllPrecisions) {
    if (assignment.count(p) == 0) continue;
    const MeshDims dims = resolve_mesh(cfg, p);
    if (dims.cores() == 0) {
      throw ConfigError("simulator: nodes assigned " + std::string(to_string(p)) + " but that subnet has no cores");
    }
    subnets_[pidx(p)] = std::make_unique<AggregationSubnet>(eq_, p, dims.rows, dims.cols, cfg.core_width, phys_);
    if (cores_needed(max_msg, cfg.core_width) > dims.cores()) {
      throw ConfigError("simulator: the " + std::string(to_string(p)) + " subnet is too small for one node");
    }
    report_.subnet_cores[pidx(p)] = dims.cores();
    fte_pending_[pidx(p)].assign(phys_, false);
  }
  records_.resize(n_ * layers.size());
}

void Simulation::log(std::size_t slot, NodeState from, NodeState to) {
  const TraceEntry e{eq_.now(), slot, run_[slot].node, from, to};
  auditor_.record(e);
  if (cfg_.record_trace) trace_.push_back(e);
  if (from != NodeState::Empty) report_.phases[static_cast<std::size_t>(from)].add(eq_.now() - run_[slot].entered);
  run_[slot].entered = eq_.now();
}

void Simulation::transition(std::size_t slot, NodeState to) {
  Nodeslot& ns = host_.slot(slot);
  log(slot, ns.state, to);
  ns.state = to;
}

void Simulation::start_layer(std::size_t l) {
  layer_ = l;
  const LayerWeights& w = layers_[l];
  x_cur_ = l == 0 ? x0_ : std::move(x_next_);
  in_dim_ = x_cur_.cols();
  msg_dim_ = message_width(model_, w, in_dim_);
  out_dim_ = output_width(model_, w);
  x_next_ = FeatureMatrix(n_, out_dim_);
  projected_ = !w.w3.empty();
  phi_ = projected_ ? sage_messages(x_cur_, w, model_.sigma) : FeatureMatrix{};
  dhat_ = model_.normalization == Placement::Aggregation ? gcn_norm_factors(g_) : std::vector<double>{};
  const FeatureMatrix& table = projected_ ? phi_ : x_cur_;
  for (Precision p : {Precision::Int8, Precision::Int4}) {
    if (assign_.count(p) == 0 || n_ == 0) continue;
    msg_qp_[pidx(p)] = calibrate(table.data(), bit_width(p));
    self_qp_[pidx(p)] = calibrate(x_cur_.data(), bit_width(p));
  }
  pw_ = std::make_unique<PreparedWeights>(model_, w);
  done_in_layer_ = 0;
  next_node_ = 0;
  if (double_buffered()) {
    const std::size_t batches = (n_ + cfg_.batch_size - 1) / cfg_.batch_size;
    batch_done_.assign(batches, 0);
    batch_fetched_.assign(batches, 0);
    batch_open_.assign(batches, false);
    batch_waiting_.assign(batches, {});
  }

  LayerRecord rec;
  rec.start = eq_.now();
  report_.layers.push_back(rec);

  wbank_.invalidate();
  wbank_.prefetch(w.word_count(), [this](Cycle at) {
    report_.layers.back().weights_ready = at;
    if (projected_) {
      // The FTE builds the sigma(W3 x + b) table before any node aggregates.
      const MatmulCost c = matmul_cost(cfg_.systolic, in_dim_, msg_dim_);
      eq_.schedule(at + c.latency + static_cast<Cycle>(n_) * c.interval, [this] { begin_programming(); });
    }
    for (Precision p : kAllPrecisions) {
      if (subnets_[pidx(p)]) schedule_fte(p, eq_.now());
    }
  });
  if (!projected_) begin_programming();
  if (n_ == 0) end_layer();
}

void Simulation::begin_programming() {
  report_.layers.back().programming_start = eq_.now();
  programming_open_ = true;
  host_pump();
}

void Simulation::end_layer() {
  report_.layers.back().end = eq_.now();
  programming_open_ = false;
  if (layer_ + 1 < layers_.size()) {
    start_layer(layer_ + 1);
  } else {
    finished_ = true;
  }
}

std::optional<std::size_t> Simulation::pick_slot(NodeId node) const {
  const SlotMask& mask = host_.available();
  if (!double_buffered()) {
    if (mask.none()) return std::nullopt;
    return choose_slot(mask);
  }
  // At most two batches resident: batch b enters once b - 2 has drained.
  const std::size_t b = node / cfg_.batch_size;
  if (b >= 2 && batch_done_[b - 2] < batch_len(b - 2)) return std::nullopt;
  if (mask.none()) return std::nullopt;
  return choose_slot(mask);
}

// Host loop: while nodes remain and a slot is free, program it.
void Simulation::host_pump() {
  if (!programming_open_ || host_busy_ || next_node_ >= n_) return;
  const NodeId node = next_node_;
  const auto slot = pick_slot(node);
  if (!slot) return;
  host_busy_ = true;
  ++next_node_;
  eq_.schedule(eq_.now() + cfg_.host_program_cycles, [this, s = *slot, node] {
    host_busy_ = false;
    program(s, node);
    host_pump();
  });
}

void Simulation::program(std::size_t slot, NodeId node) {
  const auto offs = g_.csr_offsets();
  SlotRun& r = run_[slot];
  r = SlotRun{};
  r.node = node;
  r.precision = assign_.precision[node];
  r.degree = g_.degree(node);
  r.record = layer_ * n_ + node;
  r.batch = double_buffered() ? node / cfg_.batch_size : 0;
  host_.program_nodeslot(slot, node, r.precision, r.degree, offs[node], node);
  log(slot, NodeState::Empty, NodeState::Programmed);
  ++report_.counters.nodes_programmed;

  NodeRecord& rec = records_[r.record];
  rec.layer = layer_;
  rec.node = node;
  rec.slot = slot;
  rec.degree = r.degree;
  rec.precision = r.precision;
  rec.program_cycle = eq_.now();
  eq_.schedule(eq_.now() + cfg_.nid_decode_cycles, [this, slot] { start_prefetch(slot); });
}

void Simulation::start_prefetch(std::size_t slot) {
  SlotRun& r = run_[slot];
  transition(slot, NodeState::PrefetchAdjacency);
  records_[r.record].prefetch_start = eq_.now();
  mem_.submit(slot, RequestKind::SelfFeature, in_dim_, [this, slot](Cycle) {
    run_[slot].self_ready = true;
    try_finalize(slot);
  });
  FetchTagCallbacks cb;
  cb.on_adjacency = [this, slot] {
    transition(slot, NodeState::PrefetchFeatures);
    records_[run_[slot].record].adjacency_done = eq_.now();
  };
  cb.on_unblock = [this, slot] {
    if (!double_buffered()) {
      request_pes(slot);
      return;
    }
    batch_waiting_[run_[slot].batch].push_back(slot);
  };
  cb.on_message = [this, slot] { agm_pump(slot); };
  cb.on_complete = [this, slot] {
    SlotRun& rr = run_[slot];
    rr.fetch_complete = true;
    records_[rr.record].fetch_done = eq_.now();
    report_.counters.partial_responses += tags_[slot]->stats().partial_responses;
    if (double_buffered()) {
      ++batch_fetched_[rr.batch];
      check_gate(rr.batch);
    }
    try_finalize(slot);
  };
  tags_[slot]->start(r.degree, msg_dim_, std::move(cb));
}

void Simulation::check_gate(std::size_t b) {
  if (b >= batch_open_.size() || batch_open_[b]) return;
  if (batch_fetched_[b] < batch_len(b)) return;
  if (b > 0 && batch_done_[b - 1] < batch_len(b - 1)) return;
  batch_open_[b] = true;
  auto waiting = std::move(batch_waiting_[b]);
  for (std::size_t s : waiting) request_pes(s);
}

void Simulation::request_pes(std::size_t slot) {
  SlotRun& r = run_[slot];
  AggregationSubnet& net = *subnets_[pidx(r.precision)];
  const std::size_t before = net.queued();
  net.allocate_pes(slot, r.precision, msg_dim_, [this, slot](std::vector<std::size_t> cores) {
    on_pes(slot, std::move(cores));
  });
  if (net.queued() > before) ++report_.counters.pe_queue_waits;
}

void Simulation::on_pes(std::size_t slot, std::vector<std::size_t> cores) {
  SlotRun& r = run_[slot];
  r.cores = std::move(cores);
  r.aggregating = true;
  transition(slot, NodeState::Aggregating);
  records_[r.record].agg_start = eq_.now();
  agm_pump(slot);
  try_finalize(slot);
}

// Aggregation Manager: pop one embedding, split it across the slot's cores
// and inject one packet per core. The next message waits until the last
// packet has left the injection port.
void Simulation::agm_pump(std::size_t slot) {
  SlotRun& r = run_[slot];
  FetchTag& tag = *tags_[slot];
  if (!r.aggregating || r.injecting || !tag.has_message()) return;
  const std::size_t pos = tag.pop_message();
  const std::size_t e = g_.csr_offsets()[r.node] + pos;
  const NodeId j = g_.csr_neighbors()[e];

  std::vector<double> vals(msg_dim_);
  const auto src = projected_ ? phi_.row(j) : x_cur_.row(j);
  if (!dhat_.empty()) {
    const double c = g_.edge_weights()[e] / std::sqrt(dhat_[j] * dhat_[r.node]);
    for (std::size_t k = 0; k < msg_dim_; ++k) vals[k] = c * src[k];
  } else {
    std::copy(src.begin(), src.end(), vals.begin());
  }
  if (r.precision != Precision::Float32) {
    const QuantParams& qp = msg_qp_[pidx(r.precision)];
    for (double& v : vals) v = static_cast<double>(quantize(v, qp));
  }

  AggregationSubnet& net = *subnets_[pidx(r.precision)];
  r.injecting = true;
  r.packets_out += r.cores.size();
  for (std::size_t c = 0; c < r.cores.size(); ++c) {
    const AggregationCore& core = net.core(r.cores[c]);
    const std::span<const double> slice(vals.data() + core.offset(), core.length());
    const bool last = c + 1 == r.cores.size();
    MeshNetwork::Injected injected;
    if (last) {
      injected = [this, slot](Cycle) {
        run_[slot].injecting = false;
        agm_pump(slot);
        try_finalize(slot);
      };
    }
    net.mesh().send(slot, Packet::make(slot, net.coord(r.cores[c]), slice, cfg_.flit_words), std::move(injected),
                    [this, slot](Packet&& p, Cycle) { deliver(slot, std::move(p)); });
  }
}

void Simulation::deliver(std::size_t slot, Packet&& p) {
  SlotRun& r = run_[slot];
  AggregationSubnet& net = *subnets_[pidx(r.precision)];
  const std::size_t idx = static_cast<std::size_t>(p.dest.y) * net.mesh().cols() + static_cast<std::size_t>(p.dest.x);
  AggregationCore& core = net.core(idx);
  for (const Flit& f : p.flits) core.accept(f);
  --r.packets_out;
  try_finalize(slot);
}

void Simulation::try_finalize(std::size_t slot) {
  SlotRun& r = run_[slot];
  if (r.finalized || !r.aggregating || !r.fetch_complete || !r.self_ready || r.injecting || r.packets_out > 0 ||
      tags_[slot]->has_message()) {
    return;
  }
  r.finalized = true;
  AggregationSubnet& net = *subnets_[pidx(r.precision)];
  std::vector<double> acc(msg_dim_, 0.0);
  for (std::size_t c : r.cores) {
    const AggregationCore& core = net.core(c);
    const auto v = core.result();
    std::copy(v.begin(), v.end(), acc.begin() + static_cast<std::ptrdiff_t>(core.offset()));
  }
  const auto xi = x_cur_.row(r.node);
  const LayerWeights& w = layers_[layer_];
  const bool is_float = r.precision == Precision::Float32;
  if (!dhat_.empty()) {
    // Self term of the normalized sum, weight 1 / d_i.
    const double c = 1.0 / dhat_[r.node];
    for (std::size_t k = 0; k < msg_dim_; ++k) {
      acc[k] += is_float ? c * xi[k] : static_cast<double>(quantize(c * xi[k], msg_qp_[pidx(r.precision)]));
    }
  }
  if (!is_float) {
    const double s = msg_qp_[pidx(r.precision)].scale;
    for (double& v : acc) v *= s;
  }
  if (model_.aggregation == Aggregation::Mean && r.degree > 0) {
    const double deg = static_cast<double>(r.degree);
    for (double& v : acc) v = v / deg;
  }
  if (model_.residual == Placement::Aggregation) {
    const QuantParams& qp = self_qp_[pidx(r.precision)];
    for (std::size_t k = 0; k < msg_dim_; ++k) {
      const double self = is_float ? xi[k] : dequantize(quantize(xi[k], qp), qp);
      acc[k] = (1.0 + w.eps) * self + acc[k];
    }
  }
  r.m = std::move(acc);

  bm_.request(slot, [this, slot](std::size_t row, Cycle) {
    SlotRun& rr = run_[slot];
    rr.abf_row = row;
    subnets_[pidx(rr.precision)]->release(slot);
    rr.cores.clear();
    rr.aggregating = false;
    transition(slot, NodeState::AggregationBuffered);
    records_[rr.record].buffered = eq_.now();
    fte_request(slot);
  });
}

void Simulation::fte_request(std::size_t slot) {
  const Precision p = run_[slot].precision;
  fte_pending_[pidx(p)][slot] = true;
  schedule_fte(p, eq_.now() + 1);
}

void Simulation::schedule_fte(Precision p, Cycle at) {
  const std::size_t i = pidx(p);
  if (fte_scheduled_[i] || !wbank_.valid()) return;
  if (std::none_of(fte_pending_[i].begin(), fte_pending_[i].end(), [](bool b) { return b; })) return;
  fte_scheduled_[i] = true;
  eq_.schedule(std::max({at, fte_[i].next_issue(), eq_.now()}), [this, p] { fte_arbitrate(p); });
}

void Simulation::fte_arbitrate(Precision p) {
  const std::size_t i = pidx(p);
  fte_scheduled_[i] = false;
  if (!wbank_.valid()) throw ContractViolation("transform_step: layer weights are not in the Weight Bank");
  auto& pending = fte_pending_[i];
  std::size_t slot = phys_;
  for (std::size_t k = 0; k < phys_; ++k) {
    const std::size_t s = (fte_rr_[i] + k) % phys_;
    if (pending[s]) {
      slot = s;
      break;
    }
  }
  if (slot == phys_) return;
  pending[slot] = false;
  fte_rr_[i] = (slot + 1) % phys_;

  SlotRun& r = run_[slot];
  abf_.free(r.abf_row);
  transition(slot, NodeState::Transforming);
  records_[r.record].transform_start = eq_.now();
  TransformResult t = transform_step(cfg_.systolic, *pw_, x_cur_.row(r.node), r.m, p, in_dim_);
  r.out_row = std::move(t.row);
  const Cycle ready = fte_[i].issue(eq_.now(), {t.latency, t.occupancy});
  eq_.schedule(ready, [this, slot] { write_back(slot); });
  schedule_fte(p, fte_[i].next_issue());
}

void Simulation::write_back(std::size_t slot) {
  transition(slot, NodeState::WriteBack);
  mem_.submit(slot, RequestKind::WriteBack, out_dim_, [this, slot](Cycle) { complete(slot); });
}

void Simulation::complete(std::size_t slot) {
  SlotRun& r = run_[slot];
  std::copy(r.out_row.begin(), r.out_row.end(), x_next_.row(r.node).begin());
  transition(slot, NodeState::Done);
  records_[r.record].done_cycle = eq_.now();
  log(slot, NodeState::Done, NodeState::Empty);
  host_.release(slot);
  ++report_.counters.slots_freed;
  ++done_in_layer_;
  if (double_buffered()) {
    ++batch_done_[r.batch];
    check_gate(r.batch + 1);
  }
  if (done_in_layer_ == n_) {
    end_layer();
    return;
  }
  host_pump();
}

void Simulation::deadlock() {
  std::ostringstream os;
  os << "simulation deadlock at cycle " << eq_.now() << " in layer " << layer_ << ": " << done_in_layer_ << " of "
     << n_ << " nodes done";
  for (std::size_t s = 0; s < phys_; ++s) {
    const Nodeslot& ns = host_.slot(s);
    if (ns.state == NodeState::Empty) continue;
    os << "; slot " << s << " node " << ns.node << " " << to_string(ns.state);
  }
  throw SimulationDeadlock(os.str(), eq_.now(), std::move(trace_));
}

SimResult Simulation::run() {
  start_layer(0);
  eq_.run();
  if (!finished_) deadlock();

  SimReport& rep = report_;
  rep.scheduler = std::string(to_string(cfg_.scheduler));
  rep.total_cycles = eq_.now();
  rep.num_nodes = n_;
  rep.num_layers = layers_.size();
  rep.num_slots = phys_;
  rep.clock_mhz = cfg_.clock_mhz;
  double sum = 0.0;
  for (const auto& rec : records_) {
    sum += static_cast<double>(rec.latency());
    rep.max_node_latency = std::max(rep.max_node_latency, rec.latency());
    rep.total_cycles = std::max(rep.total_cycles, rec.done_cycle);
  }
  rep.mean_node_latency = records_.empty() ? 0.0 : sum / static_cast<double>(records_.size());

  auto& c = rep.counters;
  c.events = eq_.executed();
  const auto& ms = mem_.stats();
  c.bank_conflicts = ms.bank_conflicts;
  c.memory_requests = ms.requests;
  c.words_requested = ms.words_requested;
  c.words_delivered = ms.words_delivered;
  for (const auto& net : subnets_) {
    if (!net) continue;
    const auto& ns = net->mesh().stats();
    c.noc_packets += ns.packets;
    c.flits_injected += ns.flits_injected;
    c.flits_consumed += ns.flits_consumed;
    c.link_stalls += ns.link_stalls;
  }
  c.buffer_stalls = bm_.stalls();
  rep.finalize();

  SimResult out;
  out.report = std::move(rep);
  out.output = n_ == 0 ? FeatureMatrix{} : std::move(x_next_);
  out.nodes = std::move(records_);
  out.trace = std::move(trace_);
  return out;
}

}  // namespace

SimResult simulate(const Graph& g, const ModelConfig& model, const std::vector<LayerWeights>& layers,
                   const FeatureMatrix& x, const PrecisionAssignment& assignment, const SimConfig& cfg) {
  if (cfg.scheduler == Scheduler::DoubleBuffered && cfg.batch_size == 0) {
    throw ConfigError("double-buffered scheduler needs batch_size > 0");
  }
  if (cfg.scheduler == Scheduler::DoubleBuffered && cfg.batch_size > cfg.num_slots) {
    throw ConfigError("double-buffered scheduler needs batch_size <= num_slots");
  }
  Simulation sim(g, model, layers, x, assignment, cfg);
  return sim.run();
}

SimResult host_run(const Graph& g, const ModelConfig& model, const std::vector<LayerWeights>& layers,
                   const FeatureMatrix& x, const PrecisionAssignment& assignment, SimConfig cfg) {
  cfg.scheduler = Scheduler::EventDriven;
  return simulate(g, model, layers, x, assignment, cfg);
}

SimResult simulate_double_buffered(const Graph& g, const ModelConfig& model, const std::vector<LayerWeights>& layers,
                                   const FeatureMatrix& x, const PrecisionAssignment& assignment, SimConfig cfg) {
  cfg.scheduler = Scheduler::DoubleBuffered;
  return simulate(g, model, layers, x, assignment, cfg);
}

}  // namespace ample::sim
