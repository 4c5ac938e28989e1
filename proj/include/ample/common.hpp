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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ample {

using NodeId = std::uint32_t;
using Cycle = std::uint64_t;

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IngestionError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (busy slot, missing weights, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Internal simulator invariant broken (wrong flit owner, illegal transition).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Event queue drained while nodes were still in flight.
class DeadlockError : public Error {
 public:
  DeadlockError(const std::string& what, Cycle at) : Error(what), cycle_(at) {}
  Cycle cycle() const noexcept { return cycle_; }

 private:
  Cycle cycle_;
};

}  // namespace ample
