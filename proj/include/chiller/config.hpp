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

// Experiment configuration: every sub-config plus the agent roster and the
// shared evaluation seeds, loaded from versioned JSON.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chiller/baselines.hpp"
#include "chiller/learner.hpp"
#include "chiller/plant_sim.hpp"
#include "chiller/rewards.hpp"

namespace chiller {

inline constexpr int kConfigVersion = 1;

// One entry of the agent roster. `kind` is flat, hrl, marl, hbp, random or
// constant; only constant uses `enables` and `setpoint`.
struct AgentSpec {
  std::string kind;
  std::vector<bool> enables;
  double setpoint = 0.0;

  bool learned() const { return kind == "flat" || kind == "hrl" || kind == "marl"; }
  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct ExperimentConfig {
  int config_version = kConfigVersion;
  SimConfig sim;
  RewardParams reward;
  HbpConfig hbp;
  TrainConfig train;
  std::vector<AgentSpec> agents;
  int eval_episodes = 20;
  std::vector<std::uint64_t> eval_seeds;
  std::string output_dir = "out";

  // Throws ConfigError with the dotted path of the first violation.
  void validate() const;
  // First roster entry of the given kind, or nullptr.
  const AgentSpec* find_agent(std::string_view kind) const;
};

// Defaults with the roster {flat, hrl, marl, hbp, random, constant} and
// evaluation seeds 1000 .. 1019.
ExperimentConfig default_experiment_config();

// Keys missing from the JSON keep their defaults. Throws ParseError for
// malformed JSON and ConfigError for unknown keys, wrong types or failed
// validation.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Serializes every field, so parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& config);

}  // namespace chiller
