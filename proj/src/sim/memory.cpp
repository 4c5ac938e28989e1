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

#include "ample/sim/memory.hpp"

#include <algorithm>

namespace ample::sim {

MemorySystem::MemorySystem(EventQueue& eq, MemoryConfig cfg, std::size_t num_requesters)
    : eq_(eq), cfg_(cfg), banks_(cfg.banks), member_index_(num_requesters) {
  if (cfg_.banks == 0 || cfg_.words_per_cycle == 0) {
    throw ConfigError("MemorySystem: banks and words_per_cycle must be positive");
  }
  for (std::size_t r = 0; r < num_requesters; ++r) {
    Bank& b = banks_[bank_of(r)];
    member_index_[r] = b.members.size();
    b.members.push_back(r);
    b.queues.emplace_back();
  }
}

std::size_t MemorySystem::outstanding() const {
  std::size_t n = 0;
  for (const auto& b : banks_) n += b.waiting;
  return n;
}

void MemorySystem::submit(std::size_t requester, RequestKind kind, std::size_t words, Completion on_complete) {
  if (requester >= member_index_.size()) throw ContractViolation("MemorySystem: unknown requester");
  ++stats_.requests;
  stats_.words_requested += words;
  if (words == 0) {
    eq_.schedule(eq_.now(), [this, done = std::move(on_complete)] { done(eq_.now()); });
    return;
  }
  const std::size_t bi = bank_of(requester);
  Bank& b = banks_[bi];
  b.queues[member_index_[requester]].push_back({kind, words, eq_.now(), std::move(on_complete)});
  ++b.waiting;
  schedule_arbitration(b, bi, eq_.now() + 1);
}

void MemorySystem::schedule_arbitration(Bank& b, std::size_t index, Cycle earliest) {
  if (b.arbitration_scheduled) return;
  b.arbitration_scheduled = true;
  eq_.schedule(std::max(earliest, b.free_at), [this, index] { arbitrate(index); });
}

void MemorySystem::arbitrate(std::size_t index) {
  Bank& b = banks_[index];
  b.arbitration_scheduled = false;
  if (b.waiting == 0) return;
  const std::size_t n = b.members.size();
  std::size_t pick = n;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = (b.rr + k) % n;
    if (!b.queues[m].empty()) {
      pick = m;
      break;
    }
  }
  Pending req = std::move(b.queues[pick].front());
  b.queues[pick].pop_front();
  --b.waiting;
  b.rr = (pick + 1) % n;

  const Cycle now = eq_.now();
  if (now > req.submitted + 1) ++stats_.bank_conflicts;
  ++stats_.grants;
  if (cfg_.record_grants) b.log.push_back(b.members[pick]);

  const Cycle occupancy = (req.words + cfg_.words_per_cycle - 1) / cfg_.words_per_cycle;
  b.free_at = now + occupancy;
  const Cycle done_at = b.free_at + (req.kind == RequestKind::WriteBack ? 0 : cfg_.latency);
  eq_.schedule(done_at, [this, words = req.words, done = std::move(req.done)] {
    stats_.words_delivered += words;
    done(eq_.now());
  });
  if (b.waiting > 0) schedule_arbitration(b, index, b.free_at);
}

}  // namespace ample::sim
