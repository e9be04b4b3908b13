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

#include "chiller/baselines.hpp"

#include "chiller/errors.hpp"

namespace chiller {

void HbpConfig::validate(const SimConfig& sim) const {
  if (!(trigger_lower < trigger_upper)) {
    throw ConfigError("trigger_lower", "violates trigger_lower < trigger_upper");
  }
  const auto multiple = [&](int minutes, const char* field) {
    if (minutes <= 0 || minutes % sim.step_minutes != 0) {
      throw ConfigError(field, "violates positive multiple of step_minutes");
    }
  };
  multiple(on_trigger_minutes, "on_trigger_minutes");
  multiple(off_trigger_minutes, "off_trigger_minutes");
  if (fixed_setpoint < sim.setpoint_min || fixed_setpoint > sim.setpoint_max) {
    throw ConfigError("fixed_setpoint",
                      "violates setpoint_min <= fixed_setpoint <= setpoint_max");
  }
}

std::pair<Action, HbpState> hbp_act(const PlantState& state, const HbpState& hbp,
                                    const HbpConfig& config, const SimConfig& sim) {
  HbpState next = hbp;
  const double tf = state.facility_temp;
  next.above_counter = tf > config.trigger_upper ? hbp.above_counter + 1 : 0;
  next.below_counter = tf < config.trigger_lower ? hbp.below_counter + 1 : 0;

  Action action;
  for (const auto& c : state.chillers) {
    action.commands.push_back({c.enabled, config.fixed_setpoint});
  }

  const int n = static_cast<int>(state.chillers.size());
  if (next.above_counter * sim.step_minutes >= config.on_trigger_minutes) {
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      const auto& c = state.chillers[static_cast<std::size_t>(i)];
      if (c.enabled) continue;
      if (pick < 0 || c.cumulative_on_steps <
                          state.chillers[static_cast<std::size_t>(pick)].cumulative_on_steps) {
        pick = i;
      }
    }
    if (pick >= 0) {
      action.commands[static_cast<std::size_t>(pick)].enable = true;
      next.above_counter = 0;
    }
  }
  if (next.below_counter * sim.step_minutes >= config.off_trigger_minutes) {
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      const auto& c = state.chillers[static_cast<std::size_t>(i)];
      if (!c.enabled) continue;
      if (pick < 0 || c.cumulative_on_steps >
                          state.chillers[static_cast<std::size_t>(pick)].cumulative_on_steps) {
        pick = i;
      }
    }
    if (pick >= 0) {
      action.commands[static_cast<std::size_t>(pick)].enable = false;
      next.below_counter = 0;
    }
  }
  return {std::move(action), next};
}

HbpPolicy::HbpPolicy(HbpConfig config, SimConfig sim)
    : config_(config), sim_(std::move(sim)) {}

void HbpPolicy::begin_episode(std::uint64_t) { state_ = HbpState{}; }

Action HbpPolicy::act(const PlantState& state, std::span<const double>) {
  auto [action, next] = hbp_act(state, state_, config_, sim_);
  state_ = next;
  return action;
}

std::unique_ptr<FlatPolicy> constant_policy(const std::vector<bool>& enables,
                                            double setpoint) {
  if (enables.empty()) throw ContractError("constant policy needs an enable vector");
  Action a;
  for (bool e : enables) a.commands.push_back({e, setpoint});
  return std::make_unique<ConstantPolicy>(std::move(a));
}

RandomPolicy::RandomPolicy(std::vector<Action> catalog, std::uint64_t salt)
    : catalog_(std::move(catalog)), salt_(salt), rng_(salt) {
  if (catalog_.empty()) throw ContractError("random policy needs actions");
}

void RandomPolicy::begin_episode(std::uint64_t seed) {
  rng_.seed(seed ^ (salt_ * 0x9E3779B97F4A7C15ULL));
}

Action RandomPolicy::act(const PlantState&, std::span<const double>) {
  std::uniform_int_distribution<std::size_t> pick(0, catalog_.size() - 1);
  return catalog_[pick(rng_)];
}

}  // namespace chiller
