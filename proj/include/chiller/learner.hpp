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

// Discrete-action temporal-difference learner: a tanh MLP value network,
// uniform replay, a periodically synced target network and Adam updates.
// Transitions carry a discount exponent so option-level (semi-MDP)
// transitions bootstrap with gamma^k.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "chiller/hierarchy.hpp"
#include "chiller/plant_sim.hpp"
#include "chiller/policy.hpp"

namespace chiller {

// Ordered, immutable list of the concrete actions a network indexes.
template <typename T>
class ActionCatalog {
 public:
  ActionCatalog() = default;
  explicit ActionCatalog(std::vector<T> actions) : actions_(std::move(actions)) {}

  std::size_t size() const { return actions_.size(); }
  const T& at(std::size_t i) const { return actions_.at(i); }
  const std::vector<T>& actions() const { return actions_; }

  // Returns size() when `action` is not in the catalog.
  std::size_t index_of(const T& action) const {
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      if (actions_[i] == action) return i;
    }
    return actions_.size();
  }

 private:
  std::vector<T> actions_;
};

using FlatCatalog = ActionCatalog<Action>;
using HlaCatalog = ActionCatalog<HlaAction>;
using LlaCatalog = ActionCatalog<std::vector<double>>;

// All enable masks (bit i = chiller i, mask 0 first) crossed with every
// setpoint combination (chiller 0 varies slowest).
FlatCatalog make_flat_catalog(int n_tot, const std::vector<double>& grid);
// Every enable mask as SetEnables, followed by each goal as InvokeLla.
// An empty goal list gives the fixed-period agent's catalog.
HlaCatalog make_hla_catalog(int n_tot, const std::vector<int>& goals);
LlaCatalog make_lla_catalog(int n_tot, const std::vector<double>& grid);

struct TrainConfig {
  double gamma = 0.99;
  double learning_rate = 1e-3;
  int batch_size = 64;
  int replay_capacity = 100000;
  int min_replay = 1000;
  int target_sync_period = 500;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_steps = 50000;
  int gradient_steps_per_env_step = 1;
  std::uint64_t seed = 1;

  int hidden_width = 64;
  int hidden_layers = 2;
  // Multiplies every reward before it reaches the replay buffer.
  double reward_scale = 0.01;
  std::vector<double> setpoint_grid{38.0, 40.0, 42.0, 44.0, 46.0};
  std::vector<int> goal_menu{1, 3, 6, 12, 24, 48};
  int marl_period = 12;

  void validate(const SimConfig& sim) const;
  double epsilon_at(long long env_step) const;
};

// Feed-forward network: tanh hidden layers, linear output. Parameters live
// in one contiguous buffer, layer by layer, each as a row-major
// (out x in) weight block followed by its bias.
class ValueNet {
 public:
  ValueNet() = default;
  // Weights ~ U[-r, r], r = fan_in^-1/2; biases zero.
  ValueNet(std::size_t input, std::size_t hidden_width, std::size_t hidden_layers,
           std::size_t output, std::uint64_t seed);
  ValueNet(std::vector<std::size_t> layer_sizes, std::vector<double> params);

  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t layer_count() const { return sizes_.size() - 1; }

  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }

  std::span<const double> weights(std::size_t layer) const;
  std::span<double> weights(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);

  std::vector<double> forward(std::span<const double> x) const;

  // Activations of every layer (index 0 = input) for a later backward().
  struct Tape {
    std::vector<std::vector<double>> activations;
  };
  void forward(std::span<const double> x, Tape& tape) const;
  // Adds d(loss)/d(params) to `grad` given d(loss)/d(output).
  void backward(const Tape& tape, std::span<const double> output_grad,
                std::span<double> grad) const;

  bool finite() const;

 private:
  std::size_t offset(std::size_t layer) const { return offsets_[layer]; }

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

struct Transition {
  std::vector<double> obs;
  std::size_t action_index = 0;
  double reward = 0.0;
  std::vector<double> next_obs;
  int discount_exponent = 1;
  bool terminal = false;
};

// Fixed-capacity ring; the oldest transition is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  // Uniform with replacement.
  std::vector<const Transition*> sample(std::size_t batch, std::mt19937_64& rng) const;
  // Insertion order, oldest first.
  const Transition& oldest(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> items_;
};

class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t parameter_count, double learning_rate,
                double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);
  void apply(std::span<double> params, std::span<const double> grads);
  long long steps() const { return steps_; }

 private:
  double learning_rate_, beta1_, beta2_, epsilon_;
  long long steps_ = 0;
  std::vector<double> m_, v_;
};

// Epsilon-greedy. Greedy ties break to the lowest index. Throws
// ContractError when obs does not match the network input.
std::size_t act(const ValueNet& net, std::span<const double> obs, double epsilon,
                std::mt19937_64& rng);

std::size_t argmax(std::span<const double> values);

// One TD update on `net`. Target y = r + gamma^k * max_a target(next)
// (r alone for terminal transitions); loss = mean (Q(obs, a) - y)^2.
// Returns the loss before the update. Throws NumericalFailure when the
// loss or the gradient is not finite.
double train_batch(ValueNet& net, const ValueNet& target,
                   std::span<const Transition* const> batch, double gamma,
                   AdamOptimizer& optimizer);

// Max relative error between the backpropagated gradient of
// (Q(obs, a) - target)^2 and central differences, over `coordinates`
// randomly chosen parameters.
double gradient_check(const ValueNet& net, std::span<const double> obs,
                      std::size_t action_index, double target,
                      std::uint64_t seed = 0, double fd_step = 1e-6,
                      std::size_t coordinates = 256);

// Backpropagated gradient of (Q(obs, a) - target)^2 over every parameter.
std::vector<double> squared_error_gradient(const ValueNet& net,
                                           std::span<const double> obs,
                                           std::size_t action_index, double target);

// Greedy or epsilon-greedy adapters from a network to the policy interfaces.
class NetFlatPolicy final : public FlatPolicy {
 public:
  NetFlatPolicy(const ValueNet& net, const FlatCatalog& catalog, double epsilon = 0.0,
                std::uint64_t seed = 0);
  void begin_episode(std::uint64_t seed) override;
  Action act(const PlantState& state, std::span<const double> obs) override;
  void set_epsilon(double e) { epsilon_ = e; }

 private:
  const ValueNet& net_;
  const FlatCatalog& catalog_;
  double epsilon_;
  std::uint64_t salt_;
  std::mt19937_64 rng_;
};

class NetHlaPolicy final : public HlaPolicy {
 public:
  NetHlaPolicy(const ValueNet& net, const HlaCatalog& catalog, double epsilon = 0.0,
               std::uint64_t seed = 0);
  void begin_episode(std::uint64_t seed) override;
  HlaAction act(const PlantState& state, std::span<const double> obs) override;
  void set_epsilon(double e) { epsilon_ = e; }

 private:
  const ValueNet& net_;
  const HlaCatalog& catalog_;
  double epsilon_;
  std::uint64_t salt_;
  std::mt19937_64 rng_;
};

class NetLlaPolicy final : public LlaPolicy {
 public:
  NetLlaPolicy(const ValueNet& net, const LlaCatalog& catalog, double epsilon = 0.0,
               std::uint64_t seed = 0);
  void begin_episode(std::uint64_t seed) override;
  std::vector<double> act(const PlantState& state, std::span<const double> obs) override;
  void set_epsilon(double e) { epsilon_ = e; }

 private:
  const ValueNet& net_;
  const LlaCatalog& catalog_;
  double epsilon_;
  std::uint64_t salt_;
  std::mt19937_64 rng_;
};

}  // namespace chiller
