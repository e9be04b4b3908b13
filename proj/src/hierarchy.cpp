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

#include "chiller/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chiller/errors.hpp"

namespace chiller {
namespace {

// Owns the plant state for one episode and appends one trace entry per
// environment step.
class EpisodeDriver {
 public:
  EpisodeDriver(const SimConfig& sim, std::uint64_t seed, const RewardParams& params)
      : sim_(sim), params_(params), state_(new_episode(sim, seed)) {
    trace_.seed = seed;
    trace_.weather_amplitude = state_.weather_amplitude_drawn;
    trace_.entries.reserve(static_cast<std::size_t>(sim.episode_steps));
    for (const auto& c : state_.chillers) setpoints_.push_back(c.setpoint);
  }

  const PlantState& state() const { return state_; }
  bool done() const { return state_.done(sim_); }
  HierTrace& trace() { return trace_; }
  const SimConfig& sim() const { return sim_; }

  std::vector<bool> enables() const {
    std::vector<bool> out;
    for (const auto& c : state_.chillers) out.push_back(c.enabled);
    return out;
  }

  // Remembers setpoints for enabled chillers only.
  void command_setpoints(const std::vector<double>& setpoints,
                         const std::vector<bool>& enables) {
    if (setpoints.size() != setpoints_.size()) {
      throw ContractError("low-level policy must emit one setpoint per chiller");
    }
    for (std::size_t i = 0; i < setpoints.size(); ++i) {
      if (enables[i]) {
        setpoints_[i] = std::clamp(setpoints[i], sim_.setpoint_min, sim_.setpoint_max);
      }
    }
  }

  Action compose(const std::vector<bool>& enables) const {
    if (enables.size() != setpoints_.size()) {
      throw ContractError("enable vector must have n_tot entries");
    }
    Action a;
    for (std::size_t i = 0; i < enables.size(); ++i) {
      a.commands.push_back({enables[i], setpoints_[i]});
    }
    return a;
  }

  const RewardBreakdown& advance(const Action& action, ActingAgent agent,
                                 int option_id) {
    TraceEntry e;
    e.t = state_.t;
    e.agent = agent;
    e.ambient_applied = state_.ambient_temp;
    e.load_applied = state_.load_velocity;
    StepResult r = step(state_, action, sim_);
    state_ = std::move(r.state);
    // Record what the plant actually ran (setpoints clamped).
    e.action.commands.reserve(state_.chillers.size());
    for (std::size_t i = 0; i < state_.chillers.size(); ++i) {
      const ChillerUnit& c = state_.chillers[i];
      e.action.commands.push_back({c.enabled, c.setpoint});
      setpoints_[i] = c.setpoint;
    }
    e.reward = compute(state_, params_, sim_);
    e.state = state_;
    e.option_id = option_id;
    trace_.entries.push_back(std::move(e));
    return trace_.entries.back().reward;
  }

 private:
  const SimConfig& sim_;
  const RewardParams& params_;
  PlantState state_;
  HierTrace trace_;
  std::vector<double> setpoints_;
};

double plain_sum(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

void finish_option(OptionExecution& opt, double gamma) {
  opt.steps_executed = static_cast<int>(opt.per_step_hla_rewards.size());
  opt.terminated_early = opt.steps_executed < opt.step_goal;
  opt.discounted_sum = discounted_sum(opt.per_step_hla_rewards, gamma);
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ContractError("discount must lie in (0, 1]");
  }
}

}  // namespace

bool GoalMenu::contains(int k) const {
  return std::find(goals.begin(), goals.end(), k) != goals.end();
}

int GoalMenu::max_goal() const {
  return goals.empty() ? 1 : *std::max_element(goals.begin(), goals.end());
}

void GoalMenu::validate() const {
  if (goals.empty()) throw ConfigError("goal_menu", "violates nonempty");
  for (std::size_t i = 0; i < goals.size(); ++i) {
    if (goals[i] < 1 || goals[i] > 48) {
      throw ConfigError("goal_menu", "violates 1 <= goal <= 48");
    }
    if (i > 0 && goals[i] <= goals[i - 1]) {
      throw ConfigError("goal_menu", "violates strictly increasing");
    }
  }
}

std::string_view agent_name(ActingAgent agent) {
  switch (agent) {
    case ActingAgent::kHla:
      return "HLA";
    case ActingAgent::kLla:
      return "LLA";
    case ActingAgent::kEnv:
      return "ENV";
  }
  return "ENV";
}

ActingAgent parse_agent_name(std::string_view name) {
  if (name == "HLA") return ActingAgent::kHla;
  if (name == "LLA") return ActingAgent::kLla;
  if (name == "ENV") return ActingAgent::kEnv;
  throw SchemaError("unknown acting agent '" + std::string(name) + "'");
}

double discounted_sum(std::span<const double> rewards, double gamma) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    sum += std::pow(gamma, static_cast<double>(i)) * rewards[i];
  }
  return sum;
}

std::size_t lla_observation_size(const SimConfig& sim) {
  return observation_size(sim) + static_cast<std::size_t>(sim.n_tot) + 2;
}

std::vector<double> lla_observation(const PlantState& state, const SimConfig& sim,
                                    const std::vector<bool>& enables, int step_goal,
                                    int steps_remaining, int goal_scale) {
  std::vector<double> obs = observation_vector(state, sim);
  for (bool e : enables) obs.push_back(e ? 1.0 : 0.0);
  const double scale = static_cast<double>(std::max(goal_scale, 1));
  obs.push_back(static_cast<double>(step_goal) / scale);
  obs.push_back(static_cast<double>(steps_remaining) / scale);
  return obs;
}

HierTrace run_hrl_episode(HlaPolicy& hla, LlaPolicy& lla, const SimConfig& sim,
                          std::uint64_t seed, const RewardParams& params,
                          double gamma, const GoalMenu& menu, ExperienceSink* sink) {
  check_gamma(gamma);
  EpisodeDriver env(sim, seed, params);
  HierTrace& trace = env.trace();
  hla.begin_episode(seed);
  lla.begin_episode(seed);
  const int goal_scale = menu.max_goal();

  while (!env.done()) {
    const int start_t = env.state().t;
    const std::vector<double> obs = observation_vector(env.state(), sim);
    const HlaAction choice = hla.act(env.state(), obs);

    if (const auto* set = std::get_if<SetEnables>(&choice)) {
      const RewardBreakdown& r =
          env.advance(env.compose(set->enables), ActingAgent::kHla, -1);
      const double reward = r.hla_total;
      trace.hla_credits.push_back({start_t, 1, reward, reward});
      if (sink != nullptr) {
        const std::vector<double> next = observation_vector(env.state(), sim);
        sink->on_hla(obs, choice, reward, next, 1, env.done());
        sink->after_env_step();
      }
      continue;
    }

    const int k = std::get<InvokeLla>(choice).step_goal;
    if (!menu.contains(k)) {
      throw ContractError("step goal " + std::to_string(k) + " is not in the goal menu");
    }
    const std::vector<bool> enables = env.enables();
    OptionExecution opt;
    opt.id = static_cast<int>(trace.options.size());
    opt.start_t = start_t;
    opt.step_goal = k;
    for (int i = 0; i < k && !env.done(); ++i) {
      const int t = env.state().t;
      const std::vector<double> lobs =
          lla_observation(env.state(), sim, enables, k, k - i, goal_scale);
      const std::vector<double> setpoints = lla.act(env.state(), lobs);
      env.command_setpoints(setpoints, enables);
      const RewardBreakdown& r =
          env.advance(env.compose(enables), ActingAgent::kLla, opt.id);
      opt.per_step_hla_rewards.push_back(r.hla_total);
      const double lla_reward = r.lla_total;
      trace.lla_credits.push_back({t, 1, lla_reward, lla_reward});
      if (sink != nullptr) {
        const std::vector<double> next =
            lla_observation(env.state(), sim, enables, k, k - i - 1, goal_scale);
        sink->on_lla(lobs, setpoints, lla_reward, next, env.done());
        sink->after_env_step();
      }
    }
    finish_option(opt, gamma);
    trace.hla_credits.push_back({opt.start_t, opt.steps_executed, opt.discounted_sum,
                                 plain_sum(opt.per_step_hla_rewards)});
    if (sink != nullptr) {
      const std::vector<double> next = observation_vector(env.state(), sim);
      sink->on_hla(obs, choice, opt.discounted_sum, next, opt.steps_executed,
                   env.done());
    }
    trace.options.push_back(std::move(opt));
  }
  return std::move(trace);
}

HierTrace run_marl_episode(HlaPolicy& hla, LlaPolicy& lla, const SimConfig& sim,
                           std::uint64_t seed, const RewardParams& params,
                           int period, double gamma, ExperienceSink* sink) {
  check_gamma(gamma);
  if (period < 1) throw ContractError("MARL period must be >= 1");
  EpisodeDriver env(sim, seed, params);
  HierTrace& trace = env.trace();
  hla.begin_episode(seed);
  lla.begin_episode(seed);

  while (!env.done()) {
    const std::vector<double> obs = observation_vector(env.state(), sim);
    const HlaAction choice = hla.act(env.state(), obs);
    const auto* set = std::get_if<SetEnables>(&choice);
    if (set == nullptr) {
      throw ContractError("fixed-period high-level agent may only set enables");
    }
    const std::vector<bool> enables = set->enables;
    OptionExecution period_run;
    period_run.id = static_cast<int>(trace.options.size());
    period_run.start_t = env.state().t;
    period_run.step_goal = period;

    const RewardBreakdown& first =
        env.advance(env.compose(enables), ActingAgent::kHla, -1);
    period_run.per_step_hla_rewards.push_back(first.hla_total);
    if (sink != nullptr) sink->after_env_step();

    for (int i = 1; i < period && !env.done(); ++i) {
      const int t = env.state().t;
      const std::vector<double> lobs =
          lla_observation(env.state(), sim, enables, period, period - i, period);
      const std::vector<double> setpoints = lla.act(env.state(), lobs);
      env.command_setpoints(setpoints, enables);
      const RewardBreakdown& r =
          env.advance(env.compose(enables), ActingAgent::kLla, period_run.id);
      period_run.per_step_hla_rewards.push_back(r.hla_total);
      const double lla_reward = r.lla_total;
      trace.lla_credits.push_back({t, 1, lla_reward, lla_reward});
      if (sink != nullptr) {
        const std::vector<double> next = lla_observation(
            env.state(), sim, enables, period, period - i - 1, period);
        sink->on_lla(lobs, setpoints, lla_reward, next, env.done());
        sink->after_env_step();
      }
    }
    finish_option(period_run, gamma);
    trace.hla_credits.push_back({period_run.start_t, period_run.steps_executed,
                                 period_run.discounted_sum,
                                 plain_sum(period_run.per_step_hla_rewards)});
    if (sink != nullptr) {
      const std::vector<double> next = observation_vector(env.state(), sim);
      sink->on_hla(obs, choice, period_run.discounted_sum, next,
                   period_run.steps_executed, env.done());
    }
    trace.options.push_back(std::move(period_run));
  }
  return std::move(trace);
}

HierTrace flat_episode(FlatPolicy& policy, const SimConfig& sim, std::uint64_t seed,
                       const RewardParams& params, ExperienceSink* sink) {
  EpisodeDriver env(sim, seed, params);
  HierTrace& trace = env.trace();
  policy.begin_episode(seed);
  while (!env.done()) {
    const int t = env.state().t;
    const std::vector<double> obs = observation_vector(env.state(), sim);
    const Action action = policy.act(env.state(), obs);
    const RewardBreakdown& r = env.advance(action, ActingAgent::kEnv, -1);
    const double reward = r.total;
    trace.flat_credits.push_back({t, 1, reward, reward});
    if (sink != nullptr) {
      const std::vector<double> next = observation_vector(env.state(), sim);
      sink->on_flat(obs, action, reward, next, env.done());
      sink->after_env_step();
    }
  }
  return std::move(trace);
}

}  // namespace chiller
