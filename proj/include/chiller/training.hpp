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

// Training loops for the flat, hierarchical and fixed-period agents, and
// the checkpoint format.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "chiller/hierarchy.hpp"
#include "chiller/learner.hpp"
#include "chiller/rewards.hpp"

namespace chiller {

enum class AgentKind { kFlat, kHrl, kMarl };

std::string_view kind_name(AgentKind kind);
// Throws ConfigError for anything but flat, hrl or marl.
AgentKind parse_kind(std::string_view name);

struct LearningCurveRow {
  int episode = 0;
  double episode_return = 0.0;
  double hla_return = 0.0;
  double lla_return = 0.0;
  double epsilon = 0.0;
};

struct TrainedAgent {
  AgentKind kind = AgentKind::kFlat;
  SimConfig sim;
  TrainConfig train;
  FlatCatalog flat_catalog;
  HlaCatalog hla_catalog;
  LlaCatalog lla_catalog;
  // flat uses flat_net; hrl and marl use hla_net and lla_net.
  ValueNet flat_net;
  ValueNet hla_net;
  ValueNet lla_net;
  long long train_steps = 0;
  std::vector<LearningCurveRow> curve;
};

// Builds catalogs and freshly initialized networks without training.
TrainedAgent make_untrained_agent(AgentKind kind, const SimConfig& sim,
                                  const TrainConfig& train);

// Episode i runs on environment seed training_seed(train.seed, i).
// NumericalFailure is rethrown with the failing episode index.
TrainedAgent train_agent(AgentKind kind, const SimConfig& sim, const RewardParams& reward,
                         const TrainConfig& train, int episodes,
                         const std::function<void(const LearningCurveRow&)>& progress = {});

std::uint64_t training_seed(std::uint64_t base, int episode);

// One greedy (epsilon = 0) episode with the matching runner.
HierTrace run_greedy_episode(const TrainedAgent& agent, std::uint64_t seed,
                             const RewardParams& reward);

// Checkpoints: one JSON file per network. Flat agents write "flat.json";
// hierarchical and fixed-period agents write "hla.json" and "lla.json".
struct Checkpoint {
  int format_version = 1;
  AgentKind kind = AgentKind::kFlat;
  std::string role;  // "flat", "hla" or "lla"
  int n_tot = 2;
  std::vector<double> setpoint_grid;
  std::vector<int> goal_menu;
  int marl_period = 12;
  long long train_steps = 0;
  ValueNet net;
};

std::vector<std::filesystem::path> save_checkpoints(const TrainedAgent& agent,
                                                    const std::filesystem::path& dir);
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Throws SchemaError for malformed files.
Checkpoint load_checkpoint(const std::filesystem::path& path);
// Reassembles an agent from its checkpoint(s). Throws ConfigError when a
// role is missing or the files disagree on kind.
TrainedAgent assemble_agent(const std::vector<Checkpoint>& checkpoints,
                            const SimConfig& sim, const TrainConfig& train);

}  // namespace chiller
