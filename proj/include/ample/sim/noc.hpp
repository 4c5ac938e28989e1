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

#include <compare>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ample/sim/event_queue.hpp"

namespace ample::sim {

struct MeshCoord {
  int x = 0;
  int y = 0;
  auto operator<=>(const MeshCoord&) const = default;
};

/// XY dimension-order routing: next hop toward dest, X first. nullopt at dest.
std::optional<MeshCoord> route_flit(MeshCoord current, MeshCoord dest);
// Every hop from src to dst, excluding src.
std::vector<MeshCoord> xy_route(MeshCoord src, MeshCoord dst);

enum class FlitKind : std::uint8_t { Head, Body, Tail };

struct Flit {
  FlitKind kind = FlitKind::Body;
  std::size_t slot = 0;          // owning nodeslot (routing payload of the head)
  MeshCoord dest{};              // head only
  std::vector<double> payload;   // body only; integer cores carry exact integer codes
};

struct Packet {
  std::size_t slot = 0;
  MeshCoord dest{};
  std::vector<Flit> flits;

  // Head, ceil(|data| / flit_words) body flits, tail.
  static Packet make(std::size_t slot, MeshCoord dest, std::span<const double> data, std::size_t flit_words);
};

struct NocStats {
  std::uint64_t packets = 0;
  std::uint64_t flits_injected = 0;
  std::uint64_t flits_consumed = 0;
  std::uint64_t hops = 0;
  std::uint64_t link_stalls = 0;  // head flits that found their next link owned
};

/// Wormhole mesh of routers with one-flit input buffers. A packet owns each
/// link from the moment its head crosses it until its tail does; body flits
/// trail the head one link per cycle and stall with it. Injection port p
/// enters the mesh at router (0, p mod rows), ejection is into the core at
/// dest at one flit per cycle. One hop costs one cycle.
class MeshNetwork {
 public:
  using Injected = std::function<void(Cycle)>;
  using Delivered = std::function<void(Packet&&, Cycle)>;

  MeshNetwork(EventQueue& eq, std::size_t rows, std::size_t cols, std::size_t injection_ports);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  MeshCoord entry_router(std::size_t port) const {
    return {0, static_cast<int>(port % rows_)};
  }

  /// on_injected fires when the tail has left the injection link,
  /// on_delivered when the tail has been consumed at dest.
  void send(std::size_t port, Packet packet, Injected on_injected, Delivered on_delivered);

  const NocStats& stats() const noexcept { return stats_; }
  std::size_t in_flight() const noexcept { return live_; }

 private:
  static constexpr Cycle kOwned = ~Cycle{0};

  struct Link {
    Cycle free_at = 0;  // kOwned while the tail time is not yet known
    std::deque<std::size_t> waiters;
    bool grant_scheduled = false;
  };
  struct Flight {
    Packet packet;
    std::vector<std::size_t> links;
    std::vector<std::vector<Cycle>> cross;  // cross[k][i]: cycle flit k traverses link i
    std::size_t head = 0;                   // next link the head needs
    Injected on_injected;
    Delivered on_delivered;
  };

  std::size_t router_index(MeshCoord c) const { return static_cast<std::size_t>(c.y) * cols_ + c.x; }
  std::size_t out_link(MeshCoord from, MeshCoord to) const;
  std::size_t eject_link(MeshCoord at) const { return router_index(at) * 5 + 4; }

  void request(std::size_t flight);
  void grant(std::size_t link, std::size_t flight);
  void schedule_grant(std::size_t link);
  void on_cross(std::size_t flight, std::size_t link_pos, Cycle at);
  void settle(Flight& f, std::size_t diag);
  void tail_crossed(Flight& f, std::size_t link_pos, Cycle at);
  void set_free(std::size_t link, Cycle at);

  EventQueue& eq_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t injection_base_;
  std::vector<Link> links_;
  std::vector<std::unique_ptr<Flight>> flights_;
  std::vector<std::size_t> free_flights_;
  std::size_t live_ = 0;
  NocStats stats_;
};

}  // namespace ample::sim
