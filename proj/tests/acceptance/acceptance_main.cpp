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

// Acceptance suite: prints one PASS/FAIL line per criterion with the
// measured values, then a completion line. Stochastic criteria train real
// agents, so a full run takes several minutes on one core.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chiller/artifacts.hpp"
#include "chiller/baselines.hpp"
#include "chiller/config.hpp"
#include "chiller/evaluation.hpp"
#include "chiller/hierarchy.hpp"
#include "chiller/learner.hpp"
#include "chiller/rewards.hpp"
#include "chiller/training.hpp"
#include "oracles.hpp"

namespace chiller {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- 1

Outcome reward_exactness() {
  const SimConfig sim;
  const RewardParams params;
  double worst = 0.0;
  const auto check = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  check(balance_entropy(std::vector<int>{144, 0}), 0.0);
  check(balance_entropy(std::vector<int>{72, 72}), 1.0);
  check(power_reward(0.0), 1.0);
  check(power_reward(1000.0), 0.5);
  check(power_reward(3000.0), 0.25);
  check(temp_violation(55.0, params), 0.0);
  check(temp_violation(59.0, params), 2.0);
  check(temp_violation(50.0, params), 3.0);

  const auto state = [](std::vector<int> on, int enabled, double power, double temp) {
    PlantState s;
    s.facility_temp = temp;
    s.total_power = power;
    for (std::size_t i = 0; i < on.size(); ++i) {
      ChillerUnit c;
      c.cumulative_on_steps = on[i];
      c.enabled = static_cast<int>(i) < enabled;
      s.chillers.push_back(c);
    }
    return s;
  };
  check(compute(state({72, 72}, 1, 1000.0, 55.0), params, sim).total, 31.0);
  check(compute(state({144, 0}, 0, 0.0, 59.0), params, sim).total, -29.0);
  const double h = balance_entropy(std::vector<int>{108, 36});
  // 0.8113 is the four-digit rendering of -(3/4 ln 3/4 + 1/4 ln 1/4) / ln 2.
  const bool h_ok = std::abs(h - 0.8112781244591328) <= 1e-6 &&
                    std::abs(h - testing::entropy_oracle({108, 36})) <= 1e-9;
  return {worst <= 1e-9 && h_ok,
          "max abs error " + fmt("%.3g", worst) + ", h([108,36]) = " + fmt("%.10f", h)};
}

// ---------------------------------------------------------------- 2

Outcome simulator_calibration() {
  const SimConfig sim;
  int worst_first = -1;
  bool a_ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PlantState s = new_episode(sim, seed);
    int first = -1;
    while (!s.done(sim) && first < 0) {
      s = step(s, testing::uniform_action({false, false}, 42.0), sim).state;
      if (s.facility_temp > sim.hard_upper) first = s.t;
    }
    a_ok = a_ok && first > 0 && first < sim.episode_steps;
    worst_first = std::max(worst_first, first);
  }

  SimConfig hot = sim;
  hot.weather_amp_min = hot.weather_amp_max = 10.0;
  double lo = 1e9, hi = -1e9;
  bool b_ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto temps = testing::greedy_setpoint_rollout(hot, seed, {true, false}, 55.0);
    b_ok = b_ok && temps.size() == static_cast<std::size_t>(hot.episode_steps);
    for (double t : temps) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  b_ok = b_ok && lo >= 53.0 && hi <= 57.0;
  return {a_ok && b_ok, "A: all-off crosses 60 by step " + std::to_string(worst_first) +
                            " (worst of 20 seeds); B: greedy one-chiller T_f in [" +
                            fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "] over 20 seeds"};
}

// ---------------------------------------------------------------- 3

Outcome hbp_conformance() {
  const SimConfig sim;
  const HbpConfig cfg;
  const auto replay = [&](const std::vector<double>& temps) {
    PlantState s;
    for (int i = 0; i < 2; ++i) {
      ChillerUnit c;
      c.enabled = i == 0;
      s.chillers.push_back(c);
    }
    HbpState h;
    std::vector<std::vector<bool>> out;
    for (double t : temps) {
      s.facility_temp = t;
      auto [a, next] = hbp_act(s, h, cfg, sim);
      h = next;
      for (std::size_t i = 0; i < 2; ++i) s.chillers[i].enabled = a.commands[i].enable;
      out.push_back(a.enables());
    }
    return out;
  };
  using E = std::vector<std::vector<bool>>;
  const bool on = replay({61, 61}) == E{{true, false}, {true, true}};
  const bool off = replay({49, 49, 49}) == E{{true, false}, {true, false}, {false, false}};
  const bool reset =
      replay({61, 55, 61, 61}) == E{{true, false}, {true, false}, {true, false}, {true, true}};
  const bool reset_low = replay({49, 49, 55, 49, 49, 49}).back() == std::vector<bool>{false, false} &&
                         replay({49, 49, 55, 49, 49})[4] == std::vector<bool>{true, false};
  return {on && off && reset && reset_low,
          std::string("enable at 10 min: ") + (on ? "yes" : "no") +
              ", disable at 15 min: " + (off ? "yes" : "no") +
              ", in-band reset: " + (reset && reset_low ? "yes" : "no")};
}

// ---------------------------------------------------------------- 4

Outcome option_semantics() {
  const SimConfig sim;
  const RewardParams params;
  const GoalMenu menu;
  const double gamma = 0.99;
  const std::vector<double> grid{38, 40, 42, 44, 46};
  long long options = 0, mismatches = 0;
  for (std::uint64_t ep = 0; ep < 1000; ++ep) {
    testing::RandomHla hla(sim.n_tot, menu.goals, 7000 + ep);
    testing::RandomLla lla(sim.n_tot, grid, 9000 + ep);
    const HierTrace trace = run_hrl_episode(hla, lla, sim, ep, params, gamma, menu);
    std::map<int, const TraceEntry*> by_t;
    for (const auto& e : trace.entries) by_t[e.t] = &e;
    for (const auto& o : trace.options) {
      ++options;
      double brute = 0.0;
      for (std::size_t i = 0; i < o.per_step_hla_rewards.size(); ++i) {
        brute += std::pow(gamma, static_cast<double>(i)) *
                 by_t.at(o.start_t + static_cast<int>(i))->reward.hla_total;
      }
      const int remaining = sim.episode_steps - o.start_t;
      int logged = 0;
      for (int t = o.start_t; t < o.start_t + o.steps_executed; ++t) {
        const auto it = by_t.find(t);
        if (it != by_t.end() && it->second->agent == ActingAgent::kLla &&
            it->second->option_id == o.id) {
          ++logged;
        }
      }
      const bool ok = o.discounted_sum == brute &&
                      o.steps_executed == std::min(o.step_goal, remaining) &&
                      logged == o.steps_executed &&
                      o.per_step_hla_rewards.size() == static_cast<std::size_t>(logged);
      if (!ok) ++mismatches;
    }
  }
  return {mismatches == 0 && options > 0, std::to_string(options) +
                                              " options over 1000 episodes, " +
                                              std::to_string(mismatches) + " mismatches"};
}

// ---------------------------------------------------------------- 5

Outcome reward_conservation() {
  const SimConfig sim;
  const RewardParams params;
  const GoalMenu menu;
  const std::vector<double> grid{38, 40, 42, 44, 46};
  int episodes = 0, failures = 0;
  std::string first_failure;
  const auto note = [&](const std::string& what) {
    ++failures;
    if (first_failure.empty()) first_failure = what;
  };
  const auto totals_exact = [&](const HierTrace& trace) {
    // Left side: the logged per-step totals; right side: each step's terms
    // summed afresh. Both sides are correctly rounded sums over steps.
    std::vector<double> totals, recomputed;
    for (const auto& e : trace.entries) {
      const RewardBreakdown& r = e.reward;
      if (r.total != r.balance + r.on_count_penalty + r.power + r.temperature ||
          r.hla_total != r.balance + r.on_count_penalty + r.power ||
          r.lla_total != r.power + r.temperature) {
        return false;
      }
      totals.push_back(r.total);
      recomputed.push_back(r.balance + r.on_count_penalty + r.power + r.temperature);
    }
    return testing::exact_sum(totals) == testing::exact_sum(recomputed);
  };
  for (std::uint64_t ep = 0; ep < 100; ++ep) {
    testing::RandomHla hla(sim.n_tot, menu.goals, 100 + ep);
    testing::RandomLla lla(sim.n_tot, grid, 200 + ep);
    const HierTrace hrl = run_hrl_episode(hla, lla, sim, ep, params, 0.99, menu);
    testing::RandomHla enables(sim.n_tot, {}, 300 + ep);
    const HierTrace marl = run_marl_episode(enables, lla, sim, ep, params, 12, 0.99);
    RandomPolicy random(make_flat_catalog(sim.n_tot, grid).actions(), 400 + ep);
    const HierTrace flat = flat_episode(random, sim, ep, params);
    episodes += 3;
    for (const HierTrace* t : {&hrl, &marl, &flat}) {
      if (!totals_exact(*t)) note("per-step total identity, seed " + std::to_string(ep));
    }
    if (std::string e = testing::check_reward_split(hrl, false); !e.empty()) note("hrl: " + e);
    if (std::string e = testing::check_reward_split(marl, true); !e.empty()) note("marl: " + e);
    std::vector<double> credited, totals;
    for (const auto& c : flat.flat_credits) credited.push_back(c.undiscounted);
    for (const auto& e : flat.entries) totals.push_back(e.reward.total);
    if (credited != totals) note("flat credits differ from step totals");
  }
  return {failures == 0,
          std::to_string(episodes) + " episodes (hrl, fixed-period, flat), " +
              std::to_string(failures) + " failures" +
              (first_failure.empty() ? "" : "; first: " + first_failure)};
}

// ---------------------------------------------------------------- 6

Outcome learner_numerics() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  const std::pair<std::size_t, std::size_t> shapes[] = {{14, 100}, {14, 10}, {18, 25}, {14, 4}};
  for (auto [in, out] : shapes) {
    for (int trial = 0; trial < 5; ++trial) {
      const ValueNet net(in, 64, 2, out, rng());
      std::vector<double> obs(in);
      for (double& x : obs) x = u(rng);
      const std::size_t a = rng() % out;
      const double target = 4.0 * u(rng);
      worst = std::max(worst, gradient_check(net, obs, a, target, rng(), 1e-6, 256));
    }
  }

  ValueNet net(14, 64, 2, 100, 5);
  const ValueNet target = net;
  std::vector<Transition> data;
  for (int i = 0; i < 64; ++i) {
    Transition t;
    t.obs.resize(14);
    t.next_obs.resize(14);
    for (double& x : t.obs) x = u(rng);
    for (double& x : t.next_obs) x = u(rng);
    t.action_index = rng() % 100;
    t.reward = 0.3 * u(rng);
    t.terminal = i % 8 == 0;
    data.push_back(std::move(t));
  }
  std::vector<const Transition*> batch;
  for (const auto& t : data) batch.push_back(&t);
  AdamOptimizer opt(net.parameters().size(), 1e-3);
  const double first = train_batch(net, target, batch, 0.99, opt);
  double last = first;
  for (int i = 1; i < 200; ++i) last = train_batch(net, target, batch, 0.99, opt);
  return {worst <= 1e-4 && last < first,
          "max gradient relative error " + fmt("%.3g", worst) + " over 20 nets; loss " +
              fmt("%.6g", first) + " -> " + fmt("%.6g", last) + " after 200 updates"};
}

// ---------------------------------------------------------------- 7-9

struct Trained {
  std::uint64_t seed = 0;
  AgentMetrics metrics;
};

struct StochasticRun {
  std::vector<Trained> flat, hrl;
  AgentMetrics random, hbp;
  // Byte artifacts for the reproducibility check, keyed by name.
  std::map<std::string, std::string> artifacts;
  double flat_seconds = 0.0;
  double total_seconds = 0.0;
};

StochasticRun run_stochastic(const ExperimentConfig& config, int episodes,
                             const std::vector<std::uint64_t>& seeds,
                             const std::string& label) {
  StochasticRun run;
  const auto start = Clock::now();
  const auto record = [&](const std::string& name, const EvalResult& r) {
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
      run.artifacts[name + "/trace_seed" + std::to_string(r.seeds[i]) + ".csv"] =
          trace_csv(r.traces[i], config.sim.n_tot);
    }
  };
  const auto rule_based = [&](const std::string& kind) {
    const EvalResult r = evaluate({kind, {kind, {}, 0.0}, std::nullopt}, config);
    record(kind, r);
    return r.metrics;
  };
  run.random = rule_based("random");
  run.hbp = rule_based("hbp");

  for (AgentKind kind : {AgentKind::kFlat, AgentKind::kHrl}) {
    const std::string name(kind_name(kind));
    for (std::uint64_t seed : seeds) {
      const auto t0 = Clock::now();
      std::fprintf(stderr, "[%s] training %s seed %llu (%d episodes)\n", label.c_str(),
                   name.c_str(), static_cast<unsigned long long>(seed), episodes);
      TrainConfig train = config.train;
      train.seed = seed;
      TrainedAgent agent = train_agent(kind, config.sim, config.reward, train, episodes);
      const std::string key = name + "_seed" + std::to_string(seed);
      run.artifacts[key + "/learning_curve.csv"] = learning_curve_csv(agent.curve);
      const EvalResult r = evaluate({name, {name, {}, 0.0}, std::move(agent)}, config);
      record(key, r);
      (kind == AgentKind::kFlat ? run.flat : run.hrl).push_back({seed, r.metrics});
      if (kind == AgentKind::kFlat) run.flat_seconds += seconds_since(t0);
    }
  }
  run.total_seconds = seconds_since(start);
  return run;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Outcome training_smoke(const StochasticRun& run) {
  int passing = 0;
  std::ostringstream detail;
  detail << "random mean return " << fmt("%.1f", run.random.mean_return) << ";";
  for (const auto& f : run.flat) {
    // Paired over the shared evaluation seeds.
    std::vector<double> diff;
    for (std::size_t i = 0; i < f.metrics.episode_returns.size(); ++i) {
      diff.push_back(f.metrics.episode_returns[i] - run.random.episode_returns[i]);
    }
    const double gap = mean(diff);
    double ss = 0.0;
    for (double d : diff) ss += (d - gap) * (d - gap);
    const double se = std::sqrt(ss / static_cast<double>(diff.size() - 1)) /
                      std::sqrt(static_cast<double>(diff.size()));
    const bool ok = gap > 0.0 && gap >= 0.2 * se;
    passing += ok ? 1 : 0;
    detail << " seed " << f.seed << ": flat " << fmt("%.1f", f.metrics.mean_return) << ", gap "
           << fmt("%.1f", gap) << " vs 0.2*SE " << fmt("%.1f", 0.2 * se) << (ok ? " ok" : " no")
           << ";";
  }
  const bool time_ok = run.flat_seconds <= 15 * 60;
  detail << " flat training+eval " << fmt("%.0f", run.flat_seconds) << " s";
  return {passing * 2 > static_cast<int>(run.flat.size()) && time_ok, detail.str()};
}

Outcome behavioral(const StochasticRun& run) {
  const double max_violations = 0.05 * run.hbp.episode_steps;
  int passing = 0;
  std::ostringstream detail;
  detail << "HBP power " << fmt("%.1f", run.hbp.mean_power_kw) << " kW;";
  for (std::size_t i = 0; i < run.hrl.size(); ++i) {
    const AgentMetrics& h = run.hrl[i].metrics;
    const AgentMetrics& f = run.flat[i].metrics;
    const bool toggles = h.toggle_count <= f.toggle_count;
    const bool off = h.avg_chiller_off_time.has_value() && *h.avg_chiller_off_time >= 60.0;
    const bool viol = h.temp_violation_steps <= max_violations;
    const bool entropy = h.balance_entropy_final >= 0.8;
    const bool power = h.mean_power_kw < run.hbp.mean_power_kw;
    const bool ok = toggles && off && viol && entropy && power;
    passing += ok ? 1 : 0;
    const auto mark = [](bool b) { return b ? "" : "(x)"; };
    detail << " seed " << run.hrl[i].seed << ": toggles " << fmt("%.1f", h.toggle_count)
           << "<=" << fmt("%.1f", f.toggle_count) << mark(toggles) << ", off "
           << (h.avg_chiller_off_time ? fmt("%.1f", *h.avg_chiller_off_time) : "absent")
           << " min" << mark(off) << ", violations " << fmt("%.2f", h.temp_violation_steps)
           << "<=" << fmt("%.1f", max_violations) << mark(viol) << ", entropy "
           << fmt("%.3f", h.balance_entropy_final) << mark(entropy) << ", power "
           << fmt("%.1f", h.mean_power_kw) << " kW" << mark(power) << (ok ? " ok" : " no")
           << ";";
  }
  const bool time_ok = run.total_seconds <= 45 * 60;
  detail << " suite " << fmt("%.0f", run.total_seconds) << " s";
  return {passing * 2 > static_cast<int>(run.hrl.size()) && time_ok, detail.str()};
}

Outcome reproducibility(const StochasticRun& a, const StochasticRun& b) {
  int differing = 0;
  std::string first;
  for (const auto& [name, text] : a.artifacts) {
    const auto it = b.artifacts.find(name);
    if (it == b.artifacts.end() || it->second != text) {
      ++differing;
      if (first.empty()) first = name;
    }
  }
  const bool same_keys = a.artifacts.size() == b.artifacts.size();
  return {differing == 0 && same_keys,
          std::to_string(a.artifacts.size()) + " trace/learning-curve files compared, " +
              std::to_string(differing) + " differ" + (first.empty() ? "" : " (first: " + first + ")")};
}

}  // namespace
}  // namespace chiller

int main(int argc, char** argv) {
  using namespace chiller;
  CLI::App app{"Acceptance suite: one PASS/FAIL line per criterion"};
  int episodes = 300;
  std::string report;
  std::vector<int> only;
  app.add_option("--episodes", episodes, "Training episodes per agent for criteria 7-9")
      ->check(CLI::PositiveNumber);
  app.add_option("--report", report, "Also write the result lines to this file");
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected(only.begin(), only.end());
  const auto wanted = [&](int n) { return selected.empty() || selected.contains(n); };

  std::vector<std::string> lines;
  int passed = 0, ran = 0;
  const auto emit = [&](int n, const char* name, const Outcome& o, double secs) {
    char head[96];
    std::snprintf(head, sizeof head, "CRITERION %d %-22s %s (%.1f s) ", n, name,
                  o.pass ? "PASS" : "FAIL", secs);
    lines.push_back(head + o.detail);
    std::printf("%s\n", lines.back().c_str());
    std::fflush(stdout);
    ++ran;
    passed += o.pass ? 1 : 0;
  };
  const auto timed = [&](int n, const char* name, const std::function<Outcome()>& fn,
                         double limit_seconds) {
    if (!wanted(n)) return;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = seconds_since(start);
    if (secs > limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", limit_seconds) + " s budget";
    }
    emit(n, name, o, secs);
  };

  timed(1, "reward-exactness", reward_exactness, 1.0);
  timed(2, "simulator-calibration", simulator_calibration, 2.0);
  timed(3, "hbp-rules", hbp_conformance, 1.0);
  timed(4, "option-semantics", option_semantics, 30.0);
  timed(5, "reward-conservation", reward_conservation, 30.0);
  timed(6, "learner-numerics", learner_numerics, 30.0);

  if (wanted(7) || wanted(8) || wanted(9)) {
    const ExperimentConfig config = default_experiment_config();
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    try {
      const StochasticRun run = run_stochastic(config, episodes, seeds, "run 1");
      if (wanted(7)) emit(7, "flat-training-smoke", training_smoke(run), run.flat_seconds);
      if (wanted(8)) emit(8, "hrl-behaviour", behavioral(run), run.total_seconds);
      if (wanted(9)) {
        const StochasticRun again = run_stochastic(config, episodes, seeds, "run 2");
        emit(9, "reproducibility", reproducibility(run, again), again.total_seconds);
      }
    } catch (const std::exception& e) {
      for (int n : {7, 8, 9}) {
        if (wanted(n)) emit(n, "stochastic", {false, std::string("error: ") + e.what()}, 0.0);
      }
    }
  }

  const std::string summary = "ACCEPTANCE COMPLETE: " + std::to_string(passed) + "/" +
                              std::to_string(ran) + " criteria passed";
  lines.push_back(summary);
  std::printf("%s\n", summary.c_str());
  if (!report.empty()) {
    std::ofstream out(report);
    for (const auto& l : lines) out << l << '\n';
  }
  return 0;
}
