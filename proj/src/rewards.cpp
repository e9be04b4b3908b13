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

#include "chiller/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "chiller/errors.hpp"

namespace chiller {

void RewardParams::validate(const SimConfig& sim) const {
  const auto positive = [](double v, const char* field) {
    if (!(v > 0.0)) throw ConfigError(field, "violates alpha > 0");
  };
  const auto at_least_one = [](double v, const char* field) {
    if (!(v >= 1.0)) throw ConfigError(field, "violates lambda >= 1");
  };
  positive(alpha_h, "alpha_h");
  positive(alpha_o, "alpha_o");
  positive(alpha_p, "alpha_p");
  positive(alpha_c, "alpha_c");
  at_least_one(lambda_h, "lambda_h");
  at_least_one(lambda_p, "lambda_p");
  at_least_one(lambda_c, "lambda_c");
  if (!(soft_lower < soft_upper)) {
    throw ConfigError("soft_lower", "violates soft_lower < soft_upper");
  }
  if (soft_lower < sim.hard_lower) {
    throw ConfigError("soft_lower", "violates soft_lower >= hard_lower");
  }
  if (soft_upper > sim.hard_upper) {
    throw ConfigError("soft_upper", "violates soft_upper <= hard_upper");
  }
}

double balance_entropy(std::span<const int> on_steps) {
  if (on_steps.size() < 2) {
    throw DomainError("balance_entropy needs at least two chillers");
  }
  double sum = 0.0;
  for (int on : on_steps) {
    if (on < 0) throw DomainError("on-step counts must be non-negative");
    sum += static_cast<double>(on);
  }
  if (sum == 0.0) return 0.0;
  double h = 0.0;
  for (int on : on_steps) {
    if (on == 0) continue;
    const double p = static_cast<double>(on) / sum;
    h -= p * std::log(p);
  }
  // Clamp rounding noise at the uniform distribution.
  return std::clamp(h / std::log(static_cast<double>(on_steps.size())), 0.0, 1.0);
}

double power_reward(double power_kw) {
  if (!(power_kw >= 0.0)) throw DomainError("power must be non-negative");
  return 1.0 / (power_kw / 1000.0 + 1.0);
}

double temp_violation(double temp, const RewardParams& params) {
  const double upper = std::max(0.0, temp - params.soft_upper);
  const double lower = std::max(0.0, params.soft_lower - temp);
  return std::max(upper, lower);
}

RewardBreakdown compute(const PlantState& state, const RewardParams& params,
                        const SimConfig& config) {
  RewardBreakdown r;
  const std::vector<int> on = state.on_steps();
  r.balance = params.alpha_h * std::pow(balance_entropy(on), params.lambda_h);
  r.on_count_penalty = state.enabled_count() != config.n_d ? -params.alpha_o : 0.0;
  r.power = params.alpha_p *
            std::pow(power_reward(state.total_power), params.lambda_p);
  r.temperature = -params.alpha_c *
                  std::pow(temp_violation(state.facility_temp, params), params.lambda_c);
  r.total = r.balance + r.on_count_penalty + r.power + r.temperature;
  r.hla_total = r.balance + r.on_count_penalty + r.power;
  r.lla_total = r.power + r.temperature;
  return r;
}

}  // namespace chiller
