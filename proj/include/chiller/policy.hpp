// Copyright 2026 The Chiller HRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Policy interfaces consumed by the episode runners.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "chiller/plant_sim.hpp"

namespace chiller {

// High-level action: change which chillers are enabled, or hand control to
// the low-level agent for `step_goal` environment steps.
struct SetEnables {
  std::vector<bool> enables;
  friend bool operator==(const SetEnables&, const SetEnables&) = default;
};

struct InvokeLla {
  int step_goal = 1;
  friend bool operator==(const InvokeLla&, const InvokeLla&) = default;
};

using HlaAction = std::variant<SetEnables, InvokeLla>;

// Acts on the whole plant action every step.
class FlatPolicy {
 public:
  virtual ~FlatPolicy() = default;
  virtual void begin_episode(std::uint64_t /*seed*/) {}
  virtual Action act(const PlantState& state, std::span<const double> obs) = 0;
};

class HlaPolicy {
 public:
  virtual ~HlaPolicy() = default;
  virtual void begin_episode(std::uint64_t /*seed*/) {}
  virtual HlaAction act(const PlantState& state, std::span<const double> obs) = 0;
};

// Returns one setpoint per chiller. Entries for disabled chillers are
// ignored by the runners; those chillers keep their last setpoint.
class LlaPolicy {
 public:
  virtual ~LlaPolicy() = default;
  virtual void begin_episode(std::uint64_t /*seed*/) {}
  virtual std::vector<double> act(const PlantState& state,
                                  std::span<const double> obs) = 0;
};

}  // namespace chiller
