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

#include "chiller/plant_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "chiller/errors.hpp"
#include "chiller/rewards.hpp"

namespace chiller {
namespace {

void require(bool ok, const char* field, const std::string& constraint) {
  if (!ok) throw ConfigError(field, "violates " + constraint);
}

double sine(double amplitude, int t, int step_minutes, double period_minutes) {
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) *
                       static_cast<double>(step_minutes) / period_minutes;
  return amplitude * std::sin(phase);
}

}  // namespace

void SimConfig::validate() const {
  require(n_tot >= 2, "n_tot", "n_tot >= 2");
  require(n_d >= 1, "n_d", "n_d >= 1");
  require(n_d <= n_tot, "n_d", "n_d <= n_tot");
  require(step_minutes >= 1, "step_minutes", "step_minutes >= 1");
  require(episode_steps >= 1, "episode_steps", "episode_steps >= 1");
  require(setpoint_min < setpoint_max, "setpoint_min",
          "setpoint_min < setpoint_max");
  require(hard_lower < hard_upper, "hard_lower", "hard_lower < hard_upper");
  require(load_period_minutes > 0.0, "load_period_minutes",
          "load_period_minutes > 0");
  require(weather_period_minutes > 0.0, "weather_period_minutes",
          "weather_period_minutes > 0");
  require(load_amplitude >= 0.0, "load_amplitude", "load_amplitude >= 0");
  require(weather_amp_min >= 0.0, "weather_amp_min", "weather_amp_min >= 0");
  require(weather_amp_min <= weather_amp_max, "weather_amp_min",
          "weather_amp_min <= weather_amp_max");
  require(a_load >= 0.0, "a_load", "a_load >= 0");
  require(a_amb >= 0.0, "a_amb", "a_amb >= 0");
  require(a_cool >= 0.0, "a_cool", "a_cool >= 0");
  require(beta_on >= 0.0 && beta_on <= 1.0, "beta_on", "0 <= beta_on <= 1");
  require(beta_off >= 0.0 && beta_off <= 1.0, "beta_off", "0 <= beta_off <= 1");
  require(p_idle >= 0.0, "p_idle", "p_idle >= 0");
  require(k_w >= 0.0, "k_w", "k_w >= 0");
  require(k_sp >= 0.0, "k_sp", "k_sp >= 0");
  require(p_start >= 0.0, "p_start", "p_start >= 0");
  require(startup_steps >= 0, "startup_steps", "startup_steps >= 0");
  require(std::isfinite(initial_facility_temp), "initial_facility_temp",
          "finite initial_facility_temp");
}

int PlantState::enabled_count() const {
  return static_cast<int>(std::count_if(
      chillers.begin(), chillers.end(),
      [](const ChillerUnit& c) { return c.enabled; }));
}

std::vector<int> PlantState::on_steps() const {
  std::vector<int> out;
  out.reserve(chillers.size());
  for (const auto& c : chillers) out.push_back(c.cumulative_on_steps);
  return out;
}

std::vector<double> Action::to_vector() const {
  std::vector<double> flat;
  flat.reserve(commands.size() * 2);
  for (const auto& c : commands) {
    flat.push_back(c.enable ? 1.0 : 0.0);
    flat.push_back(c.setpoint);
  }
  return flat;
}

Action Action::from_vector(std::span<const double> flat) {
  if (flat.size() % 2 != 0) {
    throw ContractError("action vector length must be even (2 * n_tot)");
  }
  Action a;
  for (std::size_t i = 0; i < flat.size(); i += 2) {
    a.commands.push_back({flat[i] > 0.5, flat[i + 1]});
  }
  return a;
}

std::vector<bool> Action::enables() const {
  std::vector<bool> out;
  out.reserve(commands.size());
  for (const auto& c : commands) out.push_back(c.enable);
  return out;
}

double load_at(const SimConfig& config, int t) {
  return config.load_mean + sine(config.load_amplitude, t, config.step_minutes,
                                 config.load_period_minutes);
}

double weather_at(const PlantState& state, const SimConfig& config, int t) {
  return config.weather_mean + sine(state.weather_amplitude_drawn, t,
                                    config.step_minutes,
                                    config.weather_period_minutes);
}

PlantState new_episode(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  PlantState s;
  if (config.weather_amp_min == config.weather_amp_max) {
    s.weather_amplitude_drawn = config.weather_amp_min;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(config.weather_amp_min,
                                               config.weather_amp_max);
    s.weather_amplitude_drawn = amp(rng);
  }
  s.t = 0;
  s.facility_temp = config.initial_facility_temp;
  s.chillers.assign(static_cast<std::size_t>(config.n_tot),
                    ChillerUnit{false, config.setpoint_max,
                                config.initial_facility_temp, 0, 0, 0.0});
  s.ambient_temp = weather_at(s, config, 0);
  s.load_velocity = load_at(config, 0);
  s.total_power = 0.0;
  return s;
}

StepResult step(const PlantState& state, const Action& action,
                const SimConfig& config) {
  if (state.done(config)) throw EpisodeCompleteError();
  if (action.commands.size() != state.chillers.size()) {
    throw ContractError("action must carry exactly n_tot chiller commands");
  }

  StepResult out{state, {}};
  PlantState& next = out.state;
  StepInfo& info = out.info;
  const std::size_t n = state.chillers.size();
  info.heat_removed.assign(n, 0.0);
  info.startup_surcharge_applied.assign(n, false);

  // (1) enable transitions and usage counters.
  for (std::size_t i = 0; i < n; ++i) {
    ChillerUnit& c = next.chillers[i];
    const ChillerCommand& cmd = action.commands[i];
    c.setpoint = std::clamp(cmd.setpoint, config.setpoint_min, config.setpoint_max);
    if (cmd.enable) {
      c.steps_since_on =
          c.enabled ? std::min(c.steps_since_on + 1, config.episode_steps) : 1;
      c.cumulative_on_steps += 1;
    } else {
      c.steps_since_on = 0;
    }
    c.enabled = cmd.enable;
  }

  // (2) supply water lag.
  for (auto& c : next.chillers) {
    if (c.enabled) {
      c.supply_water_temp += config.beta_on * (c.setpoint - c.supply_water_temp);
    } else {
      c.supply_water_temp +=
          config.beta_off * (state.facility_temp - c.supply_water_temp);
    }
  }

  // (3) facility node.
  const double tf = state.facility_temp;
  info.heat_in = config.a_load * state.load_velocity +
                 config.a_amb * (state.ambient_temp - tf);
  double removed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ChillerUnit& c = next.chillers[i];
    if (!c.enabled) continue;
    info.heat_removed[i] = config.a_cool * std::max(0.0, tf - c.supply_water_temp);
    removed += info.heat_removed[i];
  }
  next.facility_temp = tf + info.heat_in - removed;

  // (4) power at the new facility temperature.
  next.total_power = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ChillerUnit& c = next.chillers[i];
    if (!c.enabled) {
      c.power = 0.0;
      continue;
    }
    const double lift = std::max(0.0, next.facility_temp - c.supply_water_temp);
    c.power = config.p_idle +
              config.k_w * lift * (1.0 + config.k_sp * (config.setpoint_max - c.setpoint));
    if (c.steps_since_on <= config.startup_steps) {
      c.power += config.p_start;
      info.startup_surcharge_applied[i] = true;
    }
    next.total_power += c.power;
  }

  // (5) clock and the disturbances for the next step.
  next.t = state.t + 1;
  next.ambient_temp = weather_at(next, config, next.t);
  next.load_velocity = load_at(config, next.t);
  return out;
}

double scale_temperature(double temp, const SimConfig& config) {
  return (temp - config.hard_lower) / (config.hard_upper - config.hard_lower);
}

std::size_t observation_size(const SimConfig& config) {
  return 6 + 4 * static_cast<std::size_t>(config.n_tot);
}

std::vector<double> observation_vector(const PlantState& state,
                                       const SimConfig& config) {
  std::vector<double> obs;
  obs.reserve(observation_size(config));
  const double horizon = static_cast<double>(config.episode_steps);
  obs.push_back(static_cast<double>(state.t) / horizon);
  obs.push_back(scale_temperature(state.facility_temp, config));
  obs.push_back(scale_temperature(state.ambient_temp, config));
  obs.push_back(state.load_velocity);
  obs.push_back(state.total_power / 1000.0);
  obs.push_back(balance_entropy(state.on_steps()));
  const double span = config.setpoint_max - config.setpoint_min;
  for (const auto& c : state.chillers) {
    obs.push_back(c.enabled ? 1.0 : 0.0);
    obs.push_back((c.setpoint - config.setpoint_min) / span);
    obs.push_back(static_cast<double>(c.steps_since_on) / horizon);
    obs.push_back(static_cast<double>(c.cumulative_on_steps) /
                  static_cast<double>(state.t + 1));
  }
  return obs;
}

}  // namespace chiller
