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

#include "chiller/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "chiller/baselines.hpp"
#include "chiller/errors.hpp"

namespace chiller {
namespace {

constexpr std::uint64_t kRandomPolicySalt = 0x5EED;

double mean(double sum, int count) {
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace

double quantize(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return std::strtod(buf, nullptr);
}

std::vector<TraceRow> trace_rows(const HierTrace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.entries.size());
  for (const auto& e : trace.entries) {
    TraceRow r;
    r.t = e.t;
    r.agent = e.agent;
    r.facility_temp = quantize(e.state.facility_temp);
    r.ambient_temp = quantize(e.ambient_applied);
    r.load_velocity = quantize(e.load_applied);
    r.total_power = quantize(e.state.total_power);
    for (const auto& c : e.state.chillers) {
      r.enabled.push_back(c.enabled);
      r.setpoint.push_back(quantize(c.setpoint));
      r.power.push_back(quantize(c.power));
    }
    r.balance = quantize(e.reward.balance);
    r.on_count_penalty = quantize(e.reward.on_count_penalty);
    r.power_reward = quantize(e.reward.power);
    r.temperature = quantize(e.reward.temperature);
    r.total = quantize(e.reward.total);
    r.hla_total = quantize(e.reward.hla_total);
    r.lla_total = quantize(e.reward.lla_total);
    r.option_id = e.option_id;
    rows.push_back(std::move(r));
  }
  return rows;
}

EpisodeMetrics episode_metrics(const std::vector<TraceRow>& rows, const SimConfig& sim) {
  EpisodeMetrics m;
  m.steps = static_cast<int>(rows.size());
  if (rows.empty()) return m;
  const std::size_t n = rows.front().enabled.size();
  std::vector<int> off_run(n, 0);
  std::vector<int> on_steps(n, 0);
  double power_sum = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const TraceRow& r = rows[k];
    if (r.enabled.size() != n) throw SchemaError("trace rows disagree on chiller count");
    m.episode_return += r.total;
    m.hla_return += r.hla_total;
    m.lla_return += r.lla_total;
    power_sum += r.total_power;
    if (r.facility_temp < sim.hard_lower || r.facility_temp > sim.hard_upper) {
      ++m.violation_steps;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (k > 0 && r.enabled[i] != rows[k - 1].enabled[i]) ++m.toggles;
      if (r.enabled[i]) {
        ++on_steps[i];
        if (off_run[i] > 0) {
          m.off_intervals_minutes.push_back(
              static_cast<double>(off_run[i] * sim.step_minutes));
        }
        off_run[i] = 0;
      } else {
        ++off_run[i];
      }
    }
  }
  m.mean_power_kw = mean(power_sum, m.steps);
  for (std::size_t i = 0; i < n; ++i) m.never_re_enabled.push_back(off_run[i] > 0);
  m.final_balance_entropy = n >= 2 ? balance_entropy(on_steps) : 0.0;
  return m;
}

AgentMetrics aggregate_metrics(const std::string& agent,
                               const std::vector<EpisodeMetrics>& episodes,
                               const SimConfig& sim) {
  AgentMetrics a;
  a.agent = agent;
  a.episodes = static_cast<int>(episodes.size());
  a.episode_steps = sim.episode_steps;
  a.never_re_enabled.assign(static_cast<std::size_t>(sim.n_tot), 0);
  double ret = 0.0, hla = 0.0, lla = 0.0, viol = 0.0, power = 0.0, toggles = 0.0,
         entropy = 0.0, off_sum = 0.0;
  for (const auto& e : episodes) {
    ret += e.episode_return;
    hla += e.hla_return;
    lla += e.lla_return;
    viol += e.violation_steps;
    power += e.mean_power_kw;
    toggles += e.toggles;
    entropy += e.final_balance_entropy;
    for (double off : e.off_intervals_minutes) off_sum += off;
    a.off_interval_count += static_cast<int>(e.off_intervals_minutes.size());
    for (std::size_t i = 0; i < e.never_re_enabled.size() && i < a.never_re_enabled.size();
         ++i) {
      if (e.never_re_enabled[i]) ++a.never_re_enabled[i];
    }
    a.episode_returns.push_back(e.episode_return);
  }
  a.mean_return = mean(ret, a.episodes);
  a.mean_hla_return = mean(hla, a.episodes);
  a.mean_lla_return = mean(lla, a.episodes);
  a.temp_violation_steps = mean(viol, a.episodes);
  a.mean_power_kw = mean(power, a.episodes);
  a.toggle_count = mean(toggles, a.episodes);
  a.balance_entropy_final = mean(entropy, a.episodes);
  if (a.off_interval_count > 0) a.avg_chiller_off_time = off_sum / a.off_interval_count;
  return a;
}

HierTrace run_agent_episode(const AgentBundle& bundle, const ExperimentConfig& config,
                            std::uint64_t seed) {
  const AgentSpec& spec = bundle.spec;
  if (spec.learned()) {
    if (!bundle.trained) {
      throw ContractError("agent '" + bundle.name + "' needs a trained checkpoint");
    }
    return run_greedy_episode(*bundle.trained, seed, config.reward);
  }
  if (spec.kind == "hbp") {
    HbpPolicy policy(config.hbp, config.sim);
    return flat_episode(policy, config.sim, seed, config.reward);
  }
  if (spec.kind == "random") {
    RandomPolicy policy(
        make_flat_catalog(config.sim.n_tot, config.train.setpoint_grid).actions(),
        kRandomPolicySalt);
    return flat_episode(policy, config.sim, seed, config.reward);
  }
  if (spec.kind == "constant") {
    auto policy = constant_policy(spec.enables, spec.setpoint);
    return flat_episode(*policy, config.sim, seed, config.reward);
  }
  throw ContractError("unknown agent kind '" + spec.kind + "'");
}

EvalResult evaluate(const AgentBundle& bundle, const ExperimentConfig& config) {
  EvalResult result;
  std::vector<EpisodeMetrics> episodes;
  for (std::uint64_t seed : config.eval_seeds) {
    std::vector<TraceRow> rows = trace_rows(run_agent_episode(bundle, config, seed));
    episodes.push_back(episode_metrics(rows, config.sim));
    result.seeds.push_back(seed);
    result.traces.push_back(std::move(rows));
  }
  result.metrics = aggregate_metrics(bundle.name, episodes, config.sim);
  return result;
}

Comparison compare(const std::vector<AgentMetrics>& metrics,
                   const CompareThresholds& thresholds) {
  const auto hbp = std::find_if(metrics.begin(), metrics.end(),
                                [](const AgentMetrics& m) { return m.agent == "hbp"; });
  if (hbp == metrics.end()) {
    throw ContractError("comparison needs metrics for the hbp baseline");
  }
  Comparison c;
  c.hbp_power_kw = hbp->mean_power_kw;
  c.thresholds = thresholds;
  c.metrics = metrics;
  for (const auto& m : metrics) {
    AgentFlags f;
    f.agent = m.agent;
    f.violations_ok =
        m.temp_violation_steps <= thresholds.max_violation_fraction * m.episode_steps;
    f.off_time_ok =
        m.avg_chiller_off_time.has_value() && *m.avg_chiller_off_time >= thresholds.min_off_minutes;
    f.power_ok = m.mean_power_kw < c.hbp_power_kw;
    c.flags.push_back(f);
  }
  return c;
}

}  // namespace chiller
