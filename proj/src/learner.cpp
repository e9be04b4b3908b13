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

#include "chiller/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chiller/errors.hpp"
#include "chiller/simd/kernels.hpp"

namespace chiller {
namespace {

std::vector<bool> mask_to_enables(unsigned mask, int n_tot) {
  std::vector<bool> e(static_cast<std::size_t>(n_tot));
  for (int i = 0; i < n_tot; ++i) e[static_cast<std::size_t>(i)] = ((mask >> i) & 1U) != 0;
  return e;
}

// Cartesian power of the grid, first coordinate varying slowest.
std::vector<std::vector<double>> grid_product(int n_tot, const std::vector<double>& grid) {
  std::vector<std::vector<double>> out{{}};
  for (int i = 0; i < n_tot; ++i) {
    std::vector<std::vector<double>> next;
    next.reserve(out.size() * grid.size());
    for (const auto& prefix : out) {
      for (double g : grid) {
        auto row = prefix;
        row.push_back(g);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t epsilon_greedy(const ValueNet& net, std::span<const double> obs,
                           double epsilon, std::mt19937_64& rng) {
  return act(net, obs, epsilon, rng);
}

}  // namespace

FlatCatalog make_flat_catalog(int n_tot, const std::vector<double>& grid) {
  std::vector<Action> actions;
  const auto combos = grid_product(n_tot, grid);
  for (unsigned mask = 0; mask < (1U << n_tot); ++mask) {
    const auto enables = mask_to_enables(mask, n_tot);
    for (const auto& sp : combos) {
      Action a;
      for (int i = 0; i < n_tot; ++i) {
        a.commands.push_back({enables[static_cast<std::size_t>(i)],
                              sp[static_cast<std::size_t>(i)]});
      }
      actions.push_back(std::move(a));
    }
  }
  return FlatCatalog(std::move(actions));
}

HlaCatalog make_hla_catalog(int n_tot, const std::vector<int>& goals) {
  std::vector<HlaAction> actions;
  for (unsigned mask = 0; mask < (1U << n_tot); ++mask) {
    actions.emplace_back(SetEnables{mask_to_enables(mask, n_tot)});
  }
  for (int k : goals) actions.emplace_back(InvokeLla{k});
  return HlaCatalog(std::move(actions));
}

LlaCatalog make_lla_catalog(int n_tot, const std::vector<double>& grid) {
  return LlaCatalog(grid_product(n_tot, grid));
}

void TrainConfig::validate(const SimConfig& sim) const {
  const auto require = [](bool ok, const char* field, const char* constraint) {
    if (!ok) throw ConfigError(field, std::string("violates ") + constraint);
  };
  require(gamma > 0.0 && gamma <= 1.0, "gamma", "0 < gamma <= 1");
  require(learning_rate > 0.0, "learning_rate", "learning_rate > 0");
  require(batch_size > 0, "batch_size", "batch_size > 0");
  require(replay_capacity > 0, "replay_capacity", "replay_capacity > 0");
  require(min_replay > 0, "min_replay", "min_replay > 0");
  require(target_sync_period > 0, "target_sync_period", "target_sync_period > 0");
  require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "epsilon_start",
          "0 <= epsilon <= 1");
  require(epsilon_end >= 0.0 && epsilon_end <= 1.0, "epsilon_end", "0 <= epsilon <= 1");
  require(epsilon_decay_steps > 0, "epsilon_decay_steps", "epsilon_decay_steps > 0");
  require(gradient_steps_per_env_step > 0, "gradient_steps_per_env_step",
          "gradient_steps_per_env_step > 0");
  require(hidden_width > 0, "hidden_width", "hidden_width > 0");
  require(hidden_layers > 0, "hidden_layers", "hidden_layers > 0");
  require(reward_scale > 0.0, "reward_scale", "reward_scale > 0");
  require(!setpoint_grid.empty(), "setpoint_grid", "nonempty");
  for (double g : setpoint_grid) {
    require(g >= sim.setpoint_min && g <= sim.setpoint_max, "setpoint_grid",
            "grid inside [setpoint_min, setpoint_max]");
  }
  require(marl_period > 0, "marl_period", "marl_period > 0");
  GoalMenu{goal_menu}.validate();
}

double TrainConfig::epsilon_at(long long env_step) const {
  const double frac = std::min(1.0, static_cast<double>(env_step) /
                                        static_cast<double>(epsilon_decay_steps));
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

ValueNet::ValueNet(std::size_t input, std::size_t hidden_width, std::size_t hidden_layers,
                   std::size_t output, std::uint64_t seed) {
  sizes_.push_back(input);
  for (std::size_t i = 0; i < hidden_layers; ++i) sizes_.push_back(hidden_width);
  sizes_.push_back(output);
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double r = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> u(-r, r);
    for (double& w : weights(l)) w = u(rng);
  }
}

ValueNet::ValueNet(std::vector<std::size_t> layer_sizes, std::vector<double> params)
    : sizes_(std::move(layer_sizes)), params_(std::move(params)) {
  if (sizes_.size() < 2) throw SchemaError("network needs at least two layer sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  if (total != params_.size()) {
    throw SchemaError("parameter count " + std::to_string(params_.size()) +
                      " does not match layer shapes (" + std::to_string(total) + ")");
  }
}

std::span<const double> ValueNet::weights(std::size_t layer) const {
  return {params_.data() + offset(layer), sizes_[layer] * sizes_[layer + 1]};
}
std::span<double> ValueNet::weights(std::size_t layer) {
  return {params_.data() + offset(layer), sizes_[layer] * sizes_[layer + 1]};
}
std::span<const double> ValueNet::bias(std::size_t layer) const {
  return {params_.data() + offset(layer) + sizes_[layer] * sizes_[layer + 1],
          sizes_[layer + 1]};
}
std::span<double> ValueNet::bias(std::size_t layer) {
  return {params_.data() + offset(layer) + sizes_[layer] * sizes_[layer + 1],
          sizes_[layer + 1]};
}

void ValueNet::forward(std::span<const double> x, Tape& tape) const {
  if (x.size() != input_size()) {
    throw ContractError("observation length " + std::to_string(x.size()) +
                        " does not match network input " + std::to_string(input_size()));
  }
  const auto& k = simd::kernels();
  tape.activations.resize(sizes_.size());
  tape.activations[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layer_count(); ++l) {
    auto& out = tape.activations[l + 1];
    out.resize(sizes_[l + 1]);
    k.gemv(weights(l).data(), bias(l).data(), tape.activations[l].data(), out.data(),
           sizes_[l + 1], sizes_[l]);
    if (l + 1 < layer_count()) {
      for (double& v : out) v = std::tanh(v);
    }
  }
}

std::vector<double> ValueNet::forward(std::span<const double> x) const {
  Tape tape;
  forward(x, tape);
  return std::move(tape.activations.back());
}

void ValueNet::backward(const Tape& tape, std::span<const double> output_grad,
                        std::span<double> grad) const {
  const auto& k = simd::kernels();
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  std::vector<double> prev;
  for (std::size_t l = layer_count(); l-- > 0;) {
    const std::size_t rows = sizes_[l + 1];
    const std::size_t cols = sizes_[l];
    const auto& input = tape.activations[l];
    double* gw = grad.data() + offset(l);
    double* gb = gw + rows * cols;
    const double* w = weights(l).data();
    if (l > 0) prev.assign(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = delta[r];
      if (d == 0.0) continue;
      gb[r] += d;
      k.axpy(d, input.data(), gw + r * cols, cols);
      if (l > 0) k.axpy(d, w + r * cols, prev.data(), cols);
    }
    if (l > 0) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double a = input[c];
        prev[c] *= 1.0 - a * a;
      }
      delta.swap(prev);
    }
  }
}

bool ValueNet::finite() const {
  return std::all_of(params_.begin(), params_.end(),
                     [](double v) { return std::isfinite(v); });
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ContractError("replay capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1U << 16));
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    return;
  }
  items_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch,
                                                    std::mt19937_64& rng) const {
  if (items_.empty()) throw ContractError("cannot sample an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  std::vector<const Transition*> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) out.push_back(&items_[pick(rng)]);
  return out;
}

const Transition& ReplayBuffer::oldest(std::size_t i) const {
  if (i >= items_.size()) throw ContractError("replay index out of range");
  return items_[(head_ + i) % items_.size()];
}

AdamOptimizer::AdamOptimizer(std::size_t parameter_count, double learning_rate,
                             double beta1, double beta2, double epsilon)
    : learning_rate_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon),
      m_(parameter_count, 0.0),
      v_(parameter_count, 0.0) {}

void AdamOptimizer::apply(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ContractError("optimizer and parameter sizes differ");
  }
  ++steps_;
  const simd::AdamCoefficients c{
      learning_rate_,
      beta1_,
      beta2_,
      epsilon_,
      1.0 - std::pow(beta1_, static_cast<double>(steps_)),
      1.0 - std::pow(beta2_, static_cast<double>(steps_)),
  };
  simd::kernels().adam(params.data(), grads.data(), m_.data(), v_.data(), params.size(), c);
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t act(const ValueNet& net, std::span<const double> obs, double epsilon,
                std::mt19937_64& rng) {
  if (obs.size() != net.input_size()) {
    throw ContractError("observation length does not match network input");
  }
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, net.output_size() - 1);
      return pick(rng);
    }
  }
  const std::vector<double> q = net.forward(obs);
  return argmax(q);
}

double train_batch(ValueNet& net, const ValueNet& target,
                   std::span<const Transition* const> batch, double gamma,
                   AdamOptimizer& optimizer) {
  if (batch.empty()) throw ContractError("training batch is empty");
  if (net.layer_sizes() != target.layer_sizes()) {
    throw ContractError("online and target networks are shaped differently");
  }
  std::vector<double> grad(net.parameters().size(), 0.0);
  std::vector<double> out_grad(net.output_size(), 0.0);
  ValueNet::Tape tape;
  const double n = static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Transition* tr : batch) {
    double y = tr->reward;
    if (!tr->terminal) {
      const std::vector<double> next_q = target.forward(tr->next_obs);
      y += std::pow(gamma, static_cast<double>(tr->discount_exponent)) *
           next_q[argmax(next_q)];
    }
    net.forward(tr->obs, tape);
    const double err = tape.activations.back().at(tr->action_index) - y;
    loss += err * err;
    std::fill(out_grad.begin(), out_grad.end(), 0.0);
    out_grad[tr->action_index] = 2.0 * err / n;
    net.backward(tape, out_grad, grad);
  }
  loss /= n;
  if (!std::isfinite(loss)) {
    throw NumericalFailure("non-finite TD loss");
  }
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericalFailure("non-finite gradient");
  }
  optimizer.apply(net.parameters(), grad);
  return loss;
}

std::vector<double> squared_error_gradient(const ValueNet& net,
                                           std::span<const double> obs,
                                           std::size_t action_index, double target) {
  ValueNet::Tape tape;
  net.forward(obs, tape);
  std::vector<double> out_grad(net.output_size(), 0.0);
  out_grad.at(action_index) = 2.0 * (tape.activations.back()[action_index] - target);
  std::vector<double> grad(net.parameters().size(), 0.0);
  net.backward(tape, out_grad, grad);
  return grad;
}

double gradient_check(const ValueNet& net, std::span<const double> obs,
                      std::size_t action_index, double target, std::uint64_t seed,
                      double fd_step, std::size_t coordinates) {
  const std::vector<double> analytic =
      squared_error_gradient(net, obs, action_index, target);
  ValueNet probe = net;
  std::vector<std::size_t> order(analytic.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::min(coordinates, order.size()));

  double worst = 0.0;
  for (std::size_t idx : order) {
    double& w = probe.parameters()[idx];
    const double saved = w;
    w = saved + fd_step;
    const double q_up = probe.forward(obs)[action_index];
    w = saved - fd_step;
    const double q_down = probe.forward(obs)[action_index];
    w = saved;
    // e_up^2 - e_down^2 factored as (q_up - q_down)(e_up + e_down): the same
    // central difference of the squared error, without subtracting two
    // nearly equal squared losses.
    const double numeric =
        (q_up - q_down) * ((q_up - target) + (q_down - target)) / (2.0 * fd_step);
    const double a = analytic[idx];
    const double scale = std::max({std::abs(a), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(a - numeric) / scale);
  }
  return worst;
}

NetFlatPolicy::NetFlatPolicy(const ValueNet& net, const FlatCatalog& catalog,
                             double epsilon, std::uint64_t seed)
    : net_(net), catalog_(catalog), epsilon_(epsilon), salt_(seed), rng_(seed) {
  if (net.output_size() != catalog.size()) {
    throw ContractError("flat network output does not match its catalog");
  }
}
void NetFlatPolicy::begin_episode(std::uint64_t seed) { rng_.seed(mix(seed, salt_)); }
Action NetFlatPolicy::act(const PlantState&, std::span<const double> obs) {
  return catalog_.at(epsilon_greedy(net_, obs, epsilon_, rng_));
}

NetHlaPolicy::NetHlaPolicy(const ValueNet& net, const HlaCatalog& catalog,
                           double epsilon, std::uint64_t seed)
    : net_(net), catalog_(catalog), epsilon_(epsilon), salt_(seed), rng_(seed) {
  if (net.output_size() != catalog.size()) {
    throw ContractError("high-level network output does not match its catalog");
  }
}
void NetHlaPolicy::begin_episode(std::uint64_t seed) { rng_.seed(mix(seed, salt_ + 1)); }
HlaAction NetHlaPolicy::act(const PlantState&, std::span<const double> obs) {
  return catalog_.at(epsilon_greedy(net_, obs, epsilon_, rng_));
}

NetLlaPolicy::NetLlaPolicy(const ValueNet& net, const LlaCatalog& catalog,
                           double epsilon, std::uint64_t seed)
    : net_(net), catalog_(catalog), epsilon_(epsilon), salt_(seed), rng_(seed) {
  if (net.output_size() != catalog.size()) {
    throw ContractError("low-level network output does not match its catalog");
  }
}
void NetLlaPolicy::begin_episode(std::uint64_t seed) { rng_.seed(mix(seed, salt_ + 2)); }
std::vector<double> NetLlaPolicy::act(const PlantState&, std::span<const double> obs) {
  return catalog_.at(epsilon_greedy(net_, obs, epsilon_, rng_));
}

}  // namespace chiller
