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

// Rule-based reference policies: the timed-threshold heuristic with a fixed
// setpoint, constant policies and a uniform random policy.

#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "chiller/plant_sim.hpp"
#include "chiller/policy.hpp"

namespace chiller {

struct HbpConfig {
  double fixed_setpoint = 41.0;
  int on_trigger_minutes = 10;
  int off_trigger_minutes = 15;
  double trigger_upper = 60.0;
  double trigger_lower = 50.0;

  void validate(const SimConfig& sim) const;
};

struct HbpState {
  int above_counter = 0;
  int below_counter = 0;
};

// One heuristic decision. Counters count consecutive steps beyond a trigger
// and reset on any in-band reading. When the upper rule fires, the least
// used disabled chiller is enabled; when the lower rule fires, the most used
// enabled chiller is disabled. Ties go to the lowest index.
std::pair<Action, HbpState> hbp_act(const PlantState& state, const HbpState& hbp,
                                    const HbpConfig& config, const SimConfig& sim);

class HbpPolicy final : public FlatPolicy {
 public:
  HbpPolicy(HbpConfig config, SimConfig sim);

  void begin_episode(std::uint64_t seed) override;
  Action act(const PlantState& state, std::span<const double> obs) override;

  const HbpState& state() const { return state_; }

 private:
  HbpConfig config_;
  SimConfig sim_;
  HbpState state_;
};

class ConstantPolicy final : public FlatPolicy {
 public:
  explicit ConstantPolicy(Action action) : action_(std::move(action)) {}

  Action act(const PlantState&, std::span<const double>) override {
    return action_;
  }

 private:
  Action action_;
};

std::unique_ptr<FlatPolicy> constant_policy(const std::vector<bool>& enables,
                                            double setpoint);

// Uniform over the same discrete action set the flat learner uses. Seeded
// per episode so evaluation on shared seeds is reproducible.
class RandomPolicy final : public FlatPolicy {
 public:
  RandomPolicy(std::vector<Action> catalog, std::uint64_t salt);

  void begin_episode(std::uint64_t seed) override;
  Action act(const PlantState& state, std::span<const double> obs) override;

 private:
  std::vector<Action> catalog_;
  std::uint64_t salt_;
  std::mt19937_64 rng_;
};

}  // namespace chiller
