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

// Discrete-time lumped-parameter model of a multi-chiller cooling plant.
//
// One step is `step_minutes` of plant time. The facility temperature is a
// single well-mixed node heated by building load and ambient exchange and
// cooled by every enabled chiller in proportion to the gap between the
// facility and that chiller's supply water. Supply water follows a
// first-order lag towards the setpoint (enabled) or the facility
// temperature (disabled).

#include <cstdint>
#include <span>
#include <vector>

namespace chiller {

struct SimConfig {
  int n_tot = 2;
  int n_d = 1;
  int step_minutes = 5;
  int episode_steps = 144;

  double setpoint_min = 38.0;
  double setpoint_max = 46.0;
  double hard_lower = 50.0;
  double hard_upper = 60.0;

  double load_mean = 6.0;
  double load_amplitude = 2.0;
  double load_period_minutes = 400.0;

  double weather_mean = 75.0;
  double weather_amp_min = 1.0;
  double weather_amp_max = 10.0;
  double weather_period_minutes = 200.0;

  // Thermal coefficients, per step.
  double a_load = 0.25;
  double a_amb = 0.01;
  double a_cool = 0.15;
  double beta_on = 0.5;
  double beta_off = 0.2;

  // Power model, kW.
  double p_idle = 50.0;
  double k_w = 30.0;
  double k_sp = 0.03;
  double p_start = 400.0;
  int startup_steps = 2;

  double initial_facility_temp = 55.0;
  std::uint64_t seed = 0;

  // Throws ConfigError naming the first violated invariant.
  void validate() const;
};

struct ChillerUnit {
  bool enabled = false;
  double setpoint = 0.0;
  double supply_water_temp = 0.0;
  // Steps since the most recent off->on transition, 1 on the first enabled
  // step, 0 while disabled. Saturates at episode_steps.
  int steps_since_on = 0;
  int cumulative_on_steps = 0;
  double power = 0.0;
};

struct PlantState {
  int t = 0;
  double facility_temp = 0.0;
  // Disturbances at step t (the ones the next call to step() applies).
  double ambient_temp = 0.0;
  double load_velocity = 0.0;
  std::vector<ChillerUnit> chillers;
  double total_power = 0.0;
  double weather_amplitude_drawn = 0.0;

  int enabled_count() const;
  std::vector<int> on_steps() const;
  bool done(const SimConfig& config) const { return t >= config.episode_steps; }
};

struct ChillerCommand {
  bool enable = false;
  double setpoint = 0.0;

  friend bool operator==(const ChillerCommand&, const ChillerCommand&) = default;
};

// Full plant action: one (enable, setpoint) pair per chiller.
struct Action {
  std::vector<ChillerCommand> commands;

  // Interleaved [enable_0, setpoint_0, enable_1, setpoint_1, ...].
  std::vector<double> to_vector() const;
  static Action from_vector(std::span<const double> flat);

  std::vector<bool> enables() const;

  friend bool operator==(const Action&, const Action&) = default;
};

struct StepInfo {
  double heat_in = 0.0;
  std::vector<double> heat_removed;
  std::vector<bool> startup_surcharge_applied;
};

struct StepResult {
  PlantState state;
  StepInfo info;
};

PlantState new_episode(const SimConfig& config, std::uint64_t seed);

double load_at(const SimConfig& config, int t);

double weather_at(const PlantState& state, const SimConfig& config, int t);

// Advances one step. Setpoints are clamped into the configured range.
// Throws EpisodeCompleteError once t == episode_steps and ContractError
// when the action does not cover exactly n_tot chillers.
StepResult step(const PlantState& state, const Action& action,
                const SimConfig& config);

// Affine map of a temperature onto [0, 1] over the hard constraint band.
double scale_temperature(double temp, const SimConfig& config);

std::size_t observation_size(const SimConfig& config);

std::vector<double> observation_vector(const PlantState& state,
                                       const SimConfig& config);

}  // namespace chiller
