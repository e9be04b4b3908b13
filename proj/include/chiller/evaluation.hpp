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

// Evaluation metrics, greedy rollouts of every agent kind on shared seeds,
// and the comparison against the heuristic baseline.
//
// Metrics are always computed from trace rows quantized to the 6 decimal
// places of the CSV format, so recomputing them from an emitted CSV gives
// exactly the in-memory values.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chiller/config.hpp"
#include "chiller/hierarchy.hpp"
#include "chiller/training.hpp"

namespace chiller {

// One trace CSV row: state after the step plus the step's reward terms.
struct TraceRow {
  int t = 0;
  ActingAgent agent = ActingAgent::kEnv;
  double facility_temp = 0.0;
  double ambient_temp = 0.0;
  double load_velocity = 0.0;
  double total_power = 0.0;
  std::vector<bool> enabled;
  std::vector<double> setpoint;
  std::vector<double> power;
  double balance = 0.0;
  double on_count_penalty = 0.0;
  double power_reward = 0.0;
  double temperature = 0.0;
  double total = 0.0;
  double hla_total = 0.0;
  double lla_total = 0.0;
  int option_id = -1;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

// Rounds to 6 decimal places exactly as the CSV writer renders them.
double quantize(double value);
std::vector<TraceRow> trace_rows(const HierTrace& trace);

struct EpisodeMetrics {
  double episode_return = 0.0;
  double hla_return = 0.0;
  double lla_return = 0.0;
  int violation_steps = 0;
  // Lengths of off intervals that end in a turn-on, minutes.
  std::vector<double> off_intervals_minutes;
  // Per chiller: off at the end of the episode, so its last off run never
  // ended in a turn-on.
  std::vector<bool> never_re_enabled;
  double mean_power_kw = 0.0;
  int toggles = 0;
  double final_balance_entropy = 0.0;
  int steps = 0;
};

// Violations use the hard bounds [hard_lower, hard_upper], strictly outside.
// Toggles count enable changes between consecutive steps.
EpisodeMetrics episode_metrics(const std::vector<TraceRow>& rows, const SimConfig& sim);

struct AgentMetrics {
  std::string agent;
  int episodes = 0;
  int episode_steps = 0;
  double mean_return = 0.0;
  double mean_hla_return = 0.0;
  double mean_lla_return = 0.0;
  double temp_violation_steps = 0.0;
  // Mean over every terminated off interval of every episode; absent when
  // no chiller was ever switched back on.
  std::optional<double> avg_chiller_off_time;
  int off_interval_count = 0;
  // Per chiller: number of episodes it ended switched off.
  std::vector<int> never_re_enabled;
  double mean_power_kw = 0.0;
  double toggle_count = 0.0;
  double balance_entropy_final = 0.0;
  std::vector<double> episode_returns;
};

AgentMetrics aggregate_metrics(const std::string& agent,
                               const std::vector<EpisodeMetrics>& episodes,
                               const SimConfig& sim);

// A rule-based roster entry or a trained agent, ready to roll out.
struct AgentBundle {
  std::string name;
  AgentSpec spec;
  std::optional<TrainedAgent> trained;
};

// Throws ContractError when a learned kind has no trained agent.
HierTrace run_agent_episode(const AgentBundle& bundle, const ExperimentConfig& config,
                            std::uint64_t seed);

struct EvalResult {
  AgentMetrics metrics;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<TraceRow>> traces;
};

// Greedy rollouts on config.eval_seeds.
EvalResult evaluate(const AgentBundle& bundle, const ExperimentConfig& config);

struct CompareThresholds {
  double max_violation_fraction = 0.05;
  double min_off_minutes = 60.0;
};

struct AgentFlags {
  std::string agent;
  bool violations_ok = false;
  bool off_time_ok = false;
  bool power_ok = false;
  bool gold_box() const { return violations_ok && off_time_ok && power_ok; }
};

struct Comparison {
  double hbp_power_kw = 0.0;
  CompareThresholds thresholds;
  std::vector<AgentMetrics> metrics;
  std::vector<AgentFlags> flags;
};

// Throws ContractError when no metrics are named "hbp".
Comparison compare(const std::vector<AgentMetrics>& metrics,
                   const CompareThresholds& thresholds = {});

}  // namespace chiller
