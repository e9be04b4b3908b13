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

// Reward terms for chiller-plant control and their composition for a flat
// agent, the high-level (enables) agent and the low-level (setpoint) agent.

#include <span>

#include "chiller/plant_sim.hpp"

namespace chiller {

struct RewardParams {
  double alpha_h = 30.0;
  double lambda_h = 5.0;
  double alpha_o = 25.0;
  double alpha_p = 4.0;
  double lambda_p = 2.0;
  double alpha_c = 2.0;
  double lambda_c = 2.0;
  // Band the temperature term penalizes leaving, °F.
  double soft_lower = 53.0;
  double soft_upper = 57.0;

  // Throws ConfigError. The soft band must sit inside the hard band.
  void validate(const SimConfig& sim) const;
};

struct RewardBreakdown {
  double balance = 0.0;           // alpha_h * h^lambda_h
  double on_count_penalty = 0.0;  // -alpha_o or 0
  double power = 0.0;             // alpha_p * p^lambda_p
  double temperature = 0.0;       // -alpha_c * c^lambda_c
  double total = 0.0;
  double hla_total = 0.0;
  double lla_total = 0.0;
};

// Normalized entropy of the on-time shares. 0 when nothing has run yet,
// 1 for perfectly equal usage. Throws DomainError for fewer than two
// chillers or negative counts.
double balance_entropy(std::span<const int> on_steps);

// (w / 1000 + 1)^-1 for plant power w in kW. Throws DomainError for w < 0.
double power_reward(double power_kw);

// Distance of `temp` outside [soft_lower, soft_upper]; 0 inside.
double temp_violation(double temp, const RewardParams& params);

RewardBreakdown compute(const PlantState& state, const RewardParams& params,
                        const SimConfig& config);

}  // namespace chiller
