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

#include "ample/sim/noc.hpp"

#include <algorithm>

namespace ample::sim {

std::optional<MeshCoord> route_flit(MeshCoord current, MeshCoord dest) {
  if (current.x != dest.x) return MeshCoord{current.x + (dest.x > current.x ? 1 : -1), current.y};
  if (current.y != dest.y) return MeshCoord{current.x, current.y + (dest.y > current.y ? 1 : -1)};
  return std::nullopt;
}

std::vector<MeshCoord> xy_route(MeshCoord src, MeshCoord dst) {
  std::vector<MeshCoord> hops;
  for (auto next = route_flit(src, dst); next; next = route_flit(*next, dst)) hops.push_back(*next);
  return hops;
}

Packet Packet::make(std::size_t slot, MeshCoord dest, std::span<const double> data, std::size_t flit_words) {
  if (flit_words == 0) throw ConfigError("Packet: flit_words must be positive");
  Packet p;
  p.slot = slot;
  p.dest = dest;
  p.flits.push_back({FlitKind::Head, slot, dest, {}});
  for (std::size_t off = 0; off < data.size(); off += flit_words) {
    const std::size_t n = std::min(flit_words, data.size() - off);
    p.flits.push_back({FlitKind::Body, slot, dest, {data.begin() + off, data.begin() + off + n}});
  }
  p.flits.push_back({FlitKind::Tail, slot, dest, {}});
  return p;
}

MeshNetwork::MeshNetwork(EventQueue& eq, std::size_t rows, std::size_t cols, std::size_t injection_ports)
    : eq_(eq), rows_(rows), cols_(cols), injection_base_(rows * cols * 5) {
  if (rows == 0 || cols == 0) throw ConfigError("MeshNetwork: mesh dimensions must be positive");
  links_.resize(injection_base_ + injection_ports);
}

std::size_t MeshNetwork::out_link(MeshCoord from, MeshCoord to) const {
  std::size_t dir = 0;  // 0:E 1:W 2:N 3:S
  if (to.x > from.x) dir = 0;
  else if (to.x < from.x) dir = 1;
  else if (to.y > from.y) dir = 2;
  else dir = 3;
  return router_index(from) * 5 + dir;
}

void MeshNetwork::send(std::size_t port, Packet packet, Injected on_injected, Delivered on_delivered) {
  if (port >= links_.size() - injection_base_) throw ContractViolation("MeshNetwork: bad injection port");
  if (packet.dest.x < 0 || packet.dest.y < 0 || static_cast<std::size_t>(packet.dest.x) >= cols_ ||
      static_cast<std::size_t>(packet.dest.y) >= rows_) {
    throw ContractViolation("MeshNetwork: destination outside the mesh");
  }
  auto f = std::make_unique<Flight>();
  f->links.push_back(injection_base_ + port);
  MeshCoord cur = entry_router(port);
  for (MeshCoord next : xy_route(cur, packet.dest)) {
    f->links.push_back(out_link(cur, next));
    cur = next;
  }
  f->links.push_back(eject_link(packet.dest));
  f->cross.assign(packet.flits.size(), std::vector<Cycle>(f->links.size(), 0));
  f->packet = std::move(packet);
  f->on_injected = std::move(on_injected);
  f->on_delivered = std::move(on_delivered);

  ++stats_.packets;
  stats_.flits_injected += f->packet.flits.size();
  std::size_t id;
  if (!free_flights_.empty()) {
    id = free_flights_.back();
    free_flights_.pop_back();
    flights_[id] = std::move(f);
  } else {
    id = flights_.size();
    flights_.push_back(std::move(f));
  }
  ++live_;
  request(id);
}

void MeshNetwork::request(std::size_t flight) {
  Flight& f = *flights_[flight];
  const std::size_t link = f.links[f.head];
  Link& l = links_[link];
  const Cycle now = eq_.now();
  if (l.waiters.empty() && l.free_at != kOwned && l.free_at <= now) {
    grant(link, flight);
    return;
  }
  ++stats_.link_stalls;
  l.waiters.push_back(flight);
  schedule_grant(link);
}

void MeshNetwork::schedule_grant(std::size_t link) {
  Link& l = links_[link];
  if (l.grant_scheduled || l.waiters.empty() || l.free_at == kOwned) return;
  l.grant_scheduled = true;
  eq_.schedule(std::max(l.free_at, eq_.now()), [this, link] {
    Link& ll = links_[link];
    ll.grant_scheduled = false;
    if (ll.waiters.empty() || ll.free_at == kOwned || ll.free_at > eq_.now()) return;
    const std::size_t next = ll.waiters.front();
    ll.waiters.pop_front();
    grant(link, next);
  });
}

void MeshNetwork::grant(std::size_t link, std::size_t flight) {
  links_[link].free_at = kOwned;
  Flight& f = *flights_[flight];
  const std::size_t pos = f.head;
  on_cross(flight, pos, eq_.now());
  ++f.head;
  if (f.head < f.links.size()) {
    ++stats_.hops;
    eq_.schedule(eq_.now() + 1, [this, flight] { request(flight); });
  }
}

void MeshNetwork::set_free(std::size_t link, Cycle at) {
  links_[link].free_at = at;
  schedule_grant(link);
}

// Flit k may cross link i once it crossed link i-1, flit k-1 crossed link i
// on an earlier cycle, and flit k-1 has vacated the buffer behind link i+1.
// Entries on anti-diagonal k + i = d depend only on diagonals < d and on the
// head's crossing of link d.
void MeshNetwork::settle(Flight& f, std::size_t diag) {
  const std::size_t n = f.cross.size();
  const std::size_t links = f.links.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (k > diag) break;
    const std::size_t i = diag - k;
    if (i >= links) continue;
    Cycle t = f.cross[k - 1][i] + 1;
    if (i > 0) t = std::max(t, f.cross[k][i - 1] + 1);
    if (i + 1 < links) t = std::max(t, f.cross[k - 1][i + 1]);
    f.cross[k][i] = t;
    if (k == n - 1) tail_crossed(f, i, t);
  }
}

void MeshNetwork::tail_crossed(Flight& f, std::size_t link_pos, Cycle at) {
  set_free(f.links[link_pos], at + 1);
  if (link_pos == 0 && f.on_injected) {
    eq_.schedule(at + 1, [cb = std::move(f.on_injected), t = at + 1] { cb(t); });
  }
}

void MeshNetwork::on_cross(std::size_t flight, std::size_t link_pos, Cycle at) {
  Flight& f = *flights_[flight];
  f.cross[0][link_pos] = at;
  if (f.cross.size() == 1) tail_crossed(f, link_pos, at);
  settle(f, link_pos);
  const std::size_t links = f.links.size();
  if (link_pos + 1 < links) return;

  // Head is in the core; the rest of the worm is now fully determined.
  const std::size_t n = f.cross.size();
  for (std::size_t d = links; d + 1 < links + n; ++d) settle(f, d);
  const Cycle delivered = f.cross[n - 1][links - 1] + 1;
  eq_.schedule(delivered, [this, flight, delivered] {
    Flight& ff = *flights_[flight];
    stats_.flits_consumed += ff.packet.flits.size();
    Delivered cb = std::move(ff.on_delivered);
    Packet p = std::move(ff.packet);
    flights_[flight].reset();
    free_flights_.push_back(flight);
    --live_;
    if (cb) cb(std::move(p), delivered);
  });
}

}  // namespace ample::sim
