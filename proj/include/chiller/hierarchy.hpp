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

// Episode runners for flat, hierarchical (options) and fixed-period
// two-agent control.
//
// Hierarchical loop: the high-level agent (HLA) either sets the chiller
// enable vector, which consumes one environment step with the persisted
// setpoints, or invokes the low-level agent (LLA) for k steps. An
// invocation is an option: it terminates after k steps or at episode end,
// can start in any state, and the HLA receives it as a single semi-MDP
// transition whose reward is the discounted sum of the per-step HLA
// rewards and whose bootstrap exponent is the number of executed steps.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "chiller/plant_sim.hpp"
#include "chiller/policy.hpp"
#include "chiller/rewards.hpp"

namespace chiller {

struct GoalMenu {
  std::vector<int> goals{1, 3, 6, 12, 24, 48};

  bool contains(int k) const;
  int max_goal() const;
  // Throws ConfigError unless nonempty, strictly increasing and in [1, 48].
  void validate() const;
};

enum class ActingAgent { kHla, kLla, kEnv };

std::string_view agent_name(ActingAgent agent);
ActingAgent parse_agent_name(std::string_view name);

struct TraceEntry {
  int t = 0;
  ActingAgent agent = ActingAgent::kEnv;
  Action action;
  RewardBreakdown reward;
  // Plant state after the step.
  PlantState state;
  // Disturbances applied during the step.
  double ambient_applied = 0.0;
  double load_applied = 0.0;
  // Option (or fixed period) this step belongs to; -1 outside any.
  int option_id = -1;
};

struct OptionExecution {
  int id = 0;
  int start_t = 0;
  int step_goal = 0;
  int steps_executed = 0;
  std::vector<double> per_step_hla_rewards;
  double discounted_sum = 0.0;
  bool terminated_early = false;
};

// Reward credited to one learner transition.
struct Credit {
  int start_t = 0;
  int steps = 1;
  double discounted = 0.0;
  double undiscounted = 0.0;
};

struct HierTrace {
  std::uint64_t seed = 0;
  double weather_amplitude = 0.0;
  std::vector<TraceEntry> entries;
  std::vector<OptionExecution> options;
  std::vector<Credit> hla_credits;
  std::vector<Credit> lla_credits;
  std::vector<Credit> flat_credits;
};

// sum_i gamma^i * r_i, accumulated in index order.
double discounted_sum(std::span<const double> rewards, double gamma);

std::size_t lla_observation_size(const SimConfig& sim);

// Plant observation followed by the HLA's enable vector, the step goal and
// the remaining steps, both divided by `goal_scale`.
std::vector<double> lla_observation(const PlantState& state, const SimConfig& sim,
                                    const std::vector<bool>& enables, int step_goal,
                                    int steps_remaining, int goal_scale);

// Receives learner transitions as the runners produce them. Defaults are
// no-ops so sinks override only what they consume.
class ExperienceSink {
 public:
  virtual ~ExperienceSink() = default;
  virtual void on_flat(std::span<const double> /*obs*/, const Action& /*action*/,
                       double /*reward*/, std::span<const double> /*next_obs*/,
                       bool /*terminal*/) {}
  virtual void on_hla(std::span<const double> /*obs*/, const HlaAction& /*action*/,
                      double /*reward*/, std::span<const double> /*next_obs*/,
                      int /*discount_exponent*/, bool /*terminal*/) {}
  virtual void on_lla(std::span<const double> /*obs*/,
                      const std::vector<double>& /*setpoints*/, double /*reward*/,
                      std::span<const double> /*next_obs*/, bool /*terminal*/) {}
  // Called once after every environment step.
  virtual void after_env_step() {}
};

HierTrace run_hrl_episode(HlaPolicy& hla, LlaPolicy& lla, const SimConfig& sim,
                          std::uint64_t seed, const RewardParams& params,
                          double gamma, const GoalMenu& menu = {},
                          ExperienceSink* sink = nullptr);

// HLA picks enables at t = 0, period, 2 * period, ...; the LLA drives the
// setpoints at every other step. The HLA must only emit SetEnables.
HierTrace run_marl_episode(HlaPolicy& hla, LlaPolicy& lla, const SimConfig& sim,
                           std::uint64_t seed, const RewardParams& params,
                           int period = 12, double gamma = 0.99,
                           ExperienceSink* sink = nullptr);

HierTrace flat_episode(FlatPolicy& policy, const SimConfig& sim,
                       std::uint64_t seed, const RewardParams& params,
                       ExperienceSink* sink = nullptr);

}  // namespace chiller
