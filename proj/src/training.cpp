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

#include "chiller/training.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "chiller/errors.hpp"

namespace chiller {
namespace {

using nlohmann::json;

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum Salt : std::uint64_t { kFlatNet = 11, kHlaNet = 12, kLlaNet = 13, kReplay = 20, kPolicy = 30 };

// Owns one network's training state.
struct RoleLearner {
  RoleLearner(const ValueNet& init, const TrainConfig& cfg, std::uint64_t seed)
      : net(init),
        target(init),
        optimizer(init.parameters().size(), cfg.learning_rate),
        replay(static_cast<std::size_t>(cfg.replay_capacity)),
        rng(seed) {}

  void push(std::span<const double> obs, std::size_t index, double reward,
            std::span<const double> next, int exponent, bool terminal) {
    replay.push(Transition{{obs.begin(), obs.end()}, index, reward,
                           {next.begin(), next.end()}, exponent, terminal});
  }

  void train(const TrainConfig& cfg) {
    if (replay.size() < static_cast<std::size_t>(cfg.min_replay)) return;
    for (int g = 0; g < cfg.gradient_steps_per_env_step; ++g) {
      const auto batch = replay.sample(static_cast<std::size_t>(cfg.batch_size), rng);
      train_batch(net, target, batch, cfg.gamma, optimizer);
      ++updates;
      if (updates % cfg.target_sync_period == 0) target = net;
    }
  }

  ValueNet net;
  ValueNet target;
  AdamOptimizer optimizer;
  ReplayBuffer replay;
  std::mt19937_64 rng;
  long long updates = 0;
};

template <typename T>
std::size_t require_index(const ActionCatalog<T>& catalog, const T& action,
                          const char* role) {
  const std::size_t i = catalog.index_of(action);
  if (i == catalog.size()) {
    throw ContractError(std::string(role) + " action is not in its catalog");
  }
  return i;
}

class TrainingSink final : public ExperienceSink {
 public:
  TrainingSink(const TrainedAgent& agent, const TrainConfig& cfg, RoleLearner* flat,
               RoleLearner* hla, RoleLearner* lla)
      : agent_(agent), cfg_(cfg), flat_(flat), hla_(hla), lla_(lla) {}

  void on_flat(std::span<const double> obs, const Action& action, double reward,
               std::span<const double> next, bool terminal) override {
    flat_->push(obs, require_index(agent_.flat_catalog, action, "flat"),
                reward * cfg_.reward_scale, next, 1, terminal);
  }
  void on_hla(std::span<const double> obs, const HlaAction& action, double reward,
              std::span<const double> next, int exponent, bool terminal) override {
    hla_->push(obs, require_index(agent_.hla_catalog, action, "high-level"),
               reward * cfg_.reward_scale, next, exponent, terminal);
  }
  void on_lla(std::span<const double> obs, const std::vector<double>& setpoints,
              double reward, std::span<const double> next, bool terminal) override {
    lla_->push(obs, require_index(agent_.lla_catalog, setpoints, "low-level"),
               reward * cfg_.reward_scale, next, 1, terminal);
  }
  void after_env_step() override {
    ++env_steps_;
    for (RoleLearner* r : {flat_, hla_, lla_}) {
      if (r != nullptr) r->train(cfg_);
    }
  }

  long long env_steps() const { return env_steps_; }

 private:
  const TrainedAgent& agent_;
  const TrainConfig& cfg_;
  RoleLearner* flat_;
  RoleLearner* hla_;
  RoleLearner* lla_;
  long long env_steps_ = 0;
};

LearningCurveRow summarize(int episode, const HierTrace& trace, double epsilon) {
  LearningCurveRow row;
  row.episode = episode;
  row.epsilon = epsilon;
  for (const auto& e : trace.entries) {
    row.episode_return += e.reward.total;
    row.hla_return += e.reward.hla_total;
    row.lla_return += e.reward.lla_total;
  }
  return row;
}

json catalog_json(const Checkpoint& c) {
  json j;
  j["kind"] = c.role;
  j["n_tot"] = c.n_tot;
  j["setpoint_grid"] = c.setpoint_grid;
  j["goal_menu"] = c.goal_menu;
  j["marl_period"] = c.marl_period;
  j["size"] = c.net.output_size();
  return j;
}

Checkpoint make_checkpoint(const TrainedAgent& agent, const std::string& role,
                           const ValueNet& net) {
  Checkpoint c;
  c.kind = agent.kind;
  c.role = role;
  c.n_tot = agent.sim.n_tot;
  c.setpoint_grid = agent.train.setpoint_grid;
  c.goal_menu = agent.kind == AgentKind::kHrl ? agent.train.goal_menu : std::vector<int>{};
  c.marl_period = agent.train.marl_period;
  c.train_steps = agent.train_steps;
  c.net = net;
  return c;
}

}  // namespace

std::string_view kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kFlat:
      return "flat";
    case AgentKind::kHrl:
      return "hrl";
    case AgentKind::kMarl:
      return "marl";
  }
  return "flat";
}

AgentKind parse_kind(std::string_view name) {
  if (name == "flat") return AgentKind::kFlat;
  if (name == "hrl") return AgentKind::kHrl;
  if (name == "marl") return AgentKind::kMarl;
  throw ConfigError("agent", "unknown learned agent kind '" + std::string(name) + "'");
}

std::uint64_t training_seed(std::uint64_t base, int episode) {
  return mix(base, 1000 + static_cast<std::uint64_t>(episode));
}

TrainedAgent make_untrained_agent(AgentKind kind, const SimConfig& sim,
                                  const TrainConfig& train) {
  sim.validate();
  train.validate(sim);
  TrainedAgent a;
  a.kind = kind;
  a.sim = sim;
  a.train = train;
  const auto width = static_cast<std::size_t>(train.hidden_width);
  const auto depth = static_cast<std::size_t>(train.hidden_layers);
  if (kind == AgentKind::kFlat) {
    a.flat_catalog = make_flat_catalog(sim.n_tot, train.setpoint_grid);
    a.flat_net = ValueNet(observation_size(sim), width, depth, a.flat_catalog.size(),
                          mix(train.seed, kFlatNet));
  } else {
    a.hla_catalog = make_hla_catalog(
        sim.n_tot, kind == AgentKind::kHrl ? train.goal_menu : std::vector<int>{});
    a.lla_catalog = make_lla_catalog(sim.n_tot, train.setpoint_grid);
    a.hla_net = ValueNet(observation_size(sim), width, depth, a.hla_catalog.size(),
                         mix(train.seed, kHlaNet));
    a.lla_net = ValueNet(lla_observation_size(sim), width, depth, a.lla_catalog.size(),
                         mix(train.seed, kLlaNet));
  }
  return a;
}

TrainedAgent train_agent(AgentKind kind, const SimConfig& sim, const RewardParams& reward,
                         const TrainConfig& train, int episodes,
                         const std::function<void(const LearningCurveRow&)>& progress) {
  reward.validate(sim);
  TrainedAgent agent = make_untrained_agent(kind, sim, train);
  if (episodes <= 0) return agent;

  std::unique_ptr<RoleLearner> flat, hla, lla;
  if (kind == AgentKind::kFlat) {
    flat = std::make_unique<RoleLearner>(agent.flat_net, train, mix(train.seed, kReplay));
  } else {
    hla = std::make_unique<RoleLearner>(agent.hla_net, train, mix(train.seed, kReplay + 1));
    lla = std::make_unique<RoleLearner>(agent.lla_net, train, mix(train.seed, kReplay + 2));
  }
  TrainingSink sink(agent, train, flat.get(), hla.get(), lla.get());
  const GoalMenu menu{train.goal_menu};

  std::optional<NetFlatPolicy> flat_policy;
  std::optional<NetHlaPolicy> hla_policy;
  std::optional<NetLlaPolicy> lla_policy;
  if (flat) {
    flat_policy.emplace(flat->net, agent.flat_catalog, 1.0, mix(train.seed, kPolicy));
  } else {
    hla_policy.emplace(hla->net, agent.hla_catalog, 1.0, mix(train.seed, kPolicy + 1));
    lla_policy.emplace(lla->net, agent.lla_catalog, 1.0, mix(train.seed, kPolicy + 2));
  }

  for (int ep = 0; ep < episodes; ++ep) {
    const double eps = train.epsilon_at(sink.env_steps());
    const std::uint64_t seed = training_seed(train.seed, ep);
    HierTrace trace;
    try {
      switch (kind) {
        case AgentKind::kFlat:
          flat_policy->set_epsilon(eps);
          trace = flat_episode(*flat_policy, sim, seed, reward, &sink);
          break;
        case AgentKind::kHrl:
          hla_policy->set_epsilon(eps);
          lla_policy->set_epsilon(eps);
          trace = run_hrl_episode(*hla_policy, *lla_policy, sim, seed, reward,
                                  train.gamma, menu, &sink);
          break;
        case AgentKind::kMarl:
          hla_policy->set_epsilon(eps);
          lla_policy->set_epsilon(eps);
          trace = run_marl_episode(*hla_policy, *lla_policy, sim, seed, reward,
                                   train.marl_period, train.gamma, &sink);
          break;
      }
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("training episode " + std::to_string(ep) + ": " + e.what());
    }
    agent.curve.push_back(summarize(ep, trace, eps));
    if (progress) progress(agent.curve.back());
  }

  if (flat) {
    agent.flat_net = flat->net;
  } else {
    agent.hla_net = hla->net;
    agent.lla_net = lla->net;
  }
  agent.train_steps = sink.env_steps();
  return agent;
}

HierTrace run_greedy_episode(const TrainedAgent& agent, std::uint64_t seed,
                             const RewardParams& reward) {
  switch (agent.kind) {
    case AgentKind::kFlat: {
      NetFlatPolicy p(agent.flat_net, agent.flat_catalog);
      return flat_episode(p, agent.sim, seed, reward);
    }
    case AgentKind::kHrl: {
      NetHlaPolicy h(agent.hla_net, agent.hla_catalog);
      NetLlaPolicy l(agent.lla_net, agent.lla_catalog);
      return run_hrl_episode(h, l, agent.sim, seed, reward, agent.train.gamma,
                             GoalMenu{agent.train.goal_menu});
    }
    case AgentKind::kMarl: {
      NetHlaPolicy h(agent.hla_net, agent.hla_catalog);
      NetLlaPolicy l(agent.lla_net, agent.lla_catalog);
      return run_marl_episode(h, l, agent.sim, seed, reward, agent.train.marl_period,
                              agent.train.gamma);
    }
  }
  throw ContractError("unknown agent kind");
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  json j;
  j["format_version"] = c.format_version;
  j["agent_kind"] = std::string(kind_name(c.kind));
  j["role"] = c.role;
  j["catalog"] = catalog_json(c);
  j["layer_shapes"] = c.net.layer_sizes();
  json weights = json::array();
  for (std::size_t l = 0; l < c.net.layer_count(); ++l) {
    std::vector<double> flat(c.net.weights(l).begin(), c.net.weights(l).end());
    flat.insert(flat.end(), c.net.bias(l).begin(), c.net.bias(l).end());
    weights.push_back(flat);
  }
  j["weights"] = std::move(weights);
  j["train_step_count"] = c.train_steps;
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write checkpoint " + path.string());
  out << j.dump(1) << '\n';
}

std::vector<std::filesystem::path> save_checkpoints(const TrainedAgent& agent,
                                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  const auto write = [&](const std::string& role, const ValueNet& net) {
    const auto path = dir / (role + ".json");
    save_checkpoint(make_checkpoint(agent, role, net), path);
    paths.push_back(path);
  };
  if (agent.kind == AgentKind::kFlat) {
    write("flat", agent.flat_net);
  } else {
    write("hla", agent.hla_net);
    write("lla", agent.lla_net);
  }
  return paths;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open checkpoint " + path.string());
  json j;
  try {
    j = json::parse(in);
    Checkpoint c;
    c.format_version = j.at("format_version").get<int>();
    if (c.format_version != 1) {
      throw SchemaError("unsupported checkpoint format_version " +
                        std::to_string(c.format_version));
    }
    c.kind = parse_kind(j.at("agent_kind").get<std::string>());
    c.role = j.at("role").get<std::string>();
    const json& cat = j.at("catalog");
    c.n_tot = cat.at("n_tot").get<int>();
    c.setpoint_grid = cat.at("setpoint_grid").get<std::vector<double>>();
    c.goal_menu = cat.at("goal_menu").get<std::vector<int>>();
    c.marl_period = cat.at("marl_period").get<int>();
    c.train_steps = j.at("train_step_count").get<long long>();
    const auto shapes = j.at("layer_shapes").get<std::vector<std::size_t>>();
    std::vector<double> params;
    for (const auto& layer : j.at("weights")) {
      const auto values = layer.get<std::vector<double>>();
      params.insert(params.end(), values.begin(), values.end());
    }
    c.net = ValueNet(shapes, std::move(params));
    if (cat.at("size").get<std::size_t>() != c.net.output_size()) {
      throw SchemaError("catalog size does not match network output");
    }
    return c;
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

TrainedAgent assemble_agent(const std::vector<Checkpoint>& checkpoints,
                            const SimConfig& sim, const TrainConfig& train) {
  if (checkpoints.empty()) throw ConfigError("checkpoint", "no checkpoints given");
  const AgentKind kind = checkpoints.front().kind;
  TrainConfig t = train;
  t.setpoint_grid = checkpoints.front().setpoint_grid;
  if (kind == AgentKind::kHrl) {
    for (const auto& c : checkpoints) {
      if (c.role == "hla") t.goal_menu = c.goal_menu;
    }
  }
  t.marl_period = checkpoints.front().marl_period;
  TrainedAgent agent = make_untrained_agent(kind, sim, t);
  const auto take = [&](const std::string& role, ValueNet& slot) {
    for (const auto& c : checkpoints) {
      if (c.kind != kind) {
        throw ConfigError("checkpoint", "checkpoints mix agent kinds");
      }
      if (c.role == role) {
        if (c.net.layer_sizes() != slot.layer_sizes()) {
          throw ConfigError("checkpoint", role + " network shape does not match config");
        }
        slot = c.net;
        agent.train_steps = c.train_steps;
        return;
      }
    }
    throw ConfigError("checkpoint", std::string(kind_name(kind)) + " agent is missing its " +
                                        role + " checkpoint");
  };
  if (kind == AgentKind::kFlat) {
    take("flat", agent.flat_net);
  } else {
    take("hla", agent.hla_net);
    take("lla", agent.lla_net);
  }
  return agent;
}

}  // namespace chiller
