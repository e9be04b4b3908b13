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

#include <filesystem>
#include <map>

#include <gtest/gtest.h>

#include "chiller/artifacts.hpp"
#include "chiller/config.hpp"
#include "chiller/errors.hpp"
#include "chiller/evaluation.hpp"
#include "oracles.hpp"

namespace chiller {
namespace {

// Rows with chiller 1 always on and chiller 0 following `on0`.
std::vector<TraceRow> synthetic_rows(const std::vector<bool>& on0, double temp = 55.0) {
  std::vector<TraceRow> rows;
  for (std::size_t t = 0; t < on0.size(); ++t) {
    TraceRow r;
    r.t = static_cast<int>(t);
    r.facility_temp = temp;
    r.total_power = 300.0;
    r.enabled = {on0[t], true};
    r.setpoint = {41.0, 41.0};
    r.power = {on0[t] ? 150.0 : 0.0, 150.0};
    r.total = 1.0;
    rows.push_back(r);
  }
  return rows;
}

TEST(Config, ShippedDefaultMatchesBuiltInDefaults) {
  const ExperimentConfig shipped =
      load_config(std::filesystem::path(CHILLER_SOURCE_DIR) / "configs" / "default.json");
  EXPECT_EQ(dump_config(shipped), dump_config(default_experiment_config()));
  EXPECT_EQ(shipped.eval_seeds.size(), 20u);
  EXPECT_EQ(shipped.eval_seeds.front(), 1000u);
  ASSERT_NE(shipped.find_agent("constant"), nullptr);
  EXPECT_EQ(shipped.find_agent("constant")->enables, (std::vector<bool>{true, false}));
}

TEST(Config, DumpRoundTrips) {
  ExperimentConfig c = default_experiment_config();
  c.sim.setpoint_min = 37.0;
  c.train.goal_menu = {1, 6};
  c.agents = {{"hbp", {}, 0.0}, {"constant", {false, true}, 40.0}};
  c.eval_seeds = {5, 9};
  c.eval_episodes = 2;
  const std::string text = dump_config(c);
  EXPECT_EQ(dump_config(parse_config(text)), text);
}

TEST(Config, MissingKeysKeepDefaults) {
  const ExperimentConfig c = parse_config(R"({"eval_episodes": 3})");
  EXPECT_EQ(c.eval_seeds, (std::vector<std::uint64_t>{1000, 1001, 1002}));
  EXPECT_EQ(c.sim.n_tot, SimConfig{}.n_tot);
}

TEST(Config, ValidationErrorsNameTheField) {
  const auto field_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  EXPECT_EQ(field_of(R"({"sim": {"setpoint_min": 50, "setpoint_max": 46}})"),
            "sim.setpoint_min");
  EXPECT_EQ(field_of(R"({"reward": {"alpha_x": 1}})"), "reward.alpha_x");
  EXPECT_EQ(field_of(R"({"sim": {"n_tot": "two"}})"), "sim.n_tot");
  EXPECT_EQ(field_of(R"({"config_version": 2})"), "config_version");
  EXPECT_EQ(field_of(R"({"agents": ["hbp", "oracle"]})"), "agents[1]");
}

TEST(Config, MalformedJsonReportsPosition) {
  try {
    parse_config("{\n  \"sim\": {\n    \"n_tot\": 2,,\n  }\n}");
    FAIL() << "malformed JSON accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_GT(e.column(), 1);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Metrics, OffIntervalEndingInTurnOnIsMeasuredInMinutes) {
  std::vector<bool> on0(40, true);
  for (int t = 10; t <= 21; ++t) on0[t] = false;
  const EpisodeMetrics m = episode_metrics(synthetic_rows(on0), SimConfig{});
  EXPECT_EQ(m.off_intervals_minutes, (std::vector<double>{60.0}));
  EXPECT_EQ(m.toggles, 2);
  EXPECT_EQ(m.never_re_enabled, (std::vector<bool>{false, false}));
  EXPECT_EQ(m.violation_steps, 0);
  EXPECT_NEAR(m.final_balance_entropy, testing::entropy_oracle({28, 40}), 1e-12);
}

TEST(Metrics, NoTurnOnMeansNoIntervals) {
  const SimConfig sim;
  std::vector<bool> on0(40, true);
  for (int t = 30; t < 40; ++t) on0[t] = false;
  const EpisodeMetrics m = episode_metrics(synthetic_rows(on0), sim);
  EXPECT_TRUE(m.off_intervals_minutes.empty());
  EXPECT_EQ(m.never_re_enabled, (std::vector<bool>{true, false}));
  const AgentMetrics agg = aggregate_metrics("x", {m, m}, sim);
  EXPECT_FALSE(agg.avg_chiller_off_time.has_value());
  EXPECT_EQ(agg.never_re_enabled, (std::vector<int>{2, 0}));
  EXPECT_EQ(agg.toggle_count, 1.0);
}

TEST(Metrics, InitialOffRunCountsWhenItEndsInTurnOn) {
  std::vector<bool> on0(20, true);
  for (int t = 0; t < 3; ++t) on0[t] = false;
  const EpisodeMetrics m = episode_metrics(synthetic_rows(on0), SimConfig{});
  EXPECT_EQ(m.off_intervals_minutes, (std::vector<double>{15.0}));
}

TEST(Metrics, ViolationsAreStrictlyOutsideHardBand) {
  const SimConfig sim;
  std::vector<TraceRow> rows = synthetic_rows(std::vector<bool>(6, true));
  const double temps[] = {50.0, 60.0, 49.999999, 60.000001, 55.0, 61.0};
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].facility_temp = temps[i];
  EXPECT_EQ(episode_metrics(rows, sim).violation_steps, 3);
}

TEST(Metrics, ConstantSingleChillerPolicy) {
  ExperimentConfig config = default_experiment_config();
  config.eval_seeds = {1000, 1001, 1002};
  const AgentBundle bundle{"constant", {"constant", {true, false}, 42.0}, std::nullopt};
  const EvalResult r = evaluate(bundle, config);
  EXPECT_EQ(r.metrics.episodes, 3);
  EXPECT_EQ(r.metrics.toggle_count, 0.0);
  EXPECT_FALSE(r.metrics.avg_chiller_off_time.has_value());
  EXPECT_EQ(r.metrics.never_re_enabled, (std::vector<int>{0, 3}));
}

TEST(Metrics, AllOffPolicyViolates) {
  ExperimentConfig config = default_experiment_config();
  config.eval_seeds = {1000};
  const AgentBundle bundle{"constant", {"constant", {false, false}, 42.0}, std::nullopt};
  EXPECT_GT(evaluate(bundle, config).metrics.temp_violation_steps, 0.0);
}

TEST(Metrics, LearnedKindWithoutCheckpointIsContractError) {
  const ExperimentConfig config = default_experiment_config();
  const AgentBundle bundle{"flat", {"flat", {}, 0.0}, std::nullopt};
  EXPECT_THROW(run_agent_episode(bundle, config, 1000), ContractError);
}

TEST(TraceCsv, RoundTripRecomputesMetricsExactly) {
  ExperimentConfig config = default_experiment_config();
  config.eval_seeds = {1000, 1001};
  for (const char* kind : {"hbp", "random"}) {
    const EvalResult r = evaluate({kind, {kind, {}, 0.0}, std::nullopt}, config);
    std::vector<EpisodeMetrics> again;
    for (const auto& rows : r.traces) {
      const std::string csv = trace_csv(rows, config.sim.n_tot);
      const auto parsed = parse_trace_csv(csv);
      EXPECT_EQ(parsed, rows);
      EXPECT_EQ(trace_csv(parsed, config.sim.n_tot), csv);
      again.push_back(episode_metrics(parsed, config.sim));
    }
    EXPECT_EQ(metrics_json(aggregate_metrics(kind, again, config.sim)),
              metrics_json(r.metrics));
  }
}

TEST(TraceCsv, HeaderAndRowCount) {
  ExperimentConfig config = default_experiment_config();
  config.eval_seeds = {1000};
  const EvalResult r = evaluate({"hbp", {"hbp", {}, 0.0}, std::nullopt}, config);
  const std::string csv = trace_csv(r.traces[0], 2);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 145);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t,acting_agent,T_f,T_ambient,load_velocity,total_power_kw,enabled_0,setpoint_0,"
            "power_0,enabled_1,setpoint_1,power_1,balance,on_count_penalty,power_reward,"
            "temperature,total,hla_total,lla_total,option_id");
}

TEST(TraceCsv, MalformedRowIsNamed) {
  ExperimentConfig config = default_experiment_config();
  config.eval_seeds = {1000};
  const EvalResult r = evaluate({"hbp", {"hbp", {}, 0.0}, std::nullopt}, config);
  std::string csv = trace_csv(r.traces[0], 2);
  // Break the third data row (file row 4).
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) pos = csv.find('\n', pos) + 1;
  csv.insert(pos, "x");
  try {
    parse_trace_csv(csv);
    FAIL() << "malformed row accepted";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("row 4"), std::string::npos) << e.what();
  }
}

TEST(LearningCurveCsv, RoundTrips) {
  const std::vector<LearningCurveRow> curve{{0, 12.5, 10.0, 2.5, 1.0}, {1, -3.25, -1.0, -2.25, 0.9}};
  const std::string csv = learning_curve_csv(curve);
  const auto back = parse_learning_curve_csv(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].episode_return, -3.25);
  EXPECT_EQ(learning_curve_csv(back), csv);
}

AgentMetrics named(const std::string& agent, double power, double violations,
                   std::optional<double> off) {
  AgentMetrics m;
  m.agent = agent;
  m.episodes = 20;
  m.episode_steps = 144;
  m.mean_power_kw = power;
  m.temp_violation_steps = violations;
  m.avg_chiller_off_time = off;
  return m;
}

TEST(Compare, HeuristicAgainstItselfIsNotBetterOnPower) {
  const AgentMetrics hbp = named("hbp", 470.0, 22.0, 90.0);
  const Comparison c = compare({hbp});
  ASSERT_EQ(c.flags.size(), 1u);
  EXPECT_FALSE(c.flags[0].power_ok);
  EXPECT_FALSE(c.flags[0].gold_box());
  EXPECT_EQ(c.hbp_power_kw, 470.0);
}

TEST(Compare, GoldBoxRequiresAllThree) {
  const Comparison c = compare({named("hbp", 470.0, 22.0, 90.0),
                                named("good", 400.0, 7.2, 60.0),
                                named("hot", 400.0, 7.3, 90.0),
                                named("short", 400.0, 0.0, 59.9),
                                named("never", 400.0, 0.0, std::nullopt),
                                named("costly", 470.0, 0.0, 90.0)});
  std::map<std::string, bool> gold;
  for (const auto& f : c.flags) gold[f.agent] = f.gold_box();
  EXPECT_TRUE(gold["good"]);
  EXPECT_FALSE(gold["hot"]);
  EXPECT_FALSE(gold["short"]);
  EXPECT_FALSE(gold["never"]);
  EXPECT_FALSE(gold["costly"]);
  EXPECT_THROW(compare({named("flat", 1.0, 0.0, 90.0)}), ContractError);
}

TEST(Compare, MetricsJsonRoundTripsIncludingAbsentOffTime) {
  const std::vector<AgentMetrics> ms{named("hbp", 470.0, 22.0, 90.0),
                                     named("never", 400.0, 0.0, std::nullopt)};
  const std::string text = metrics_array_json(ms);
  const auto back = parse_metrics_json(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_FALSE(back[1].avg_chiller_off_time.has_value());
  EXPECT_EQ(metrics_array_json(back), text);
  const std::string scatter = scatter_csv(compare(back));
  EXPECT_NE(scatter.find("never,0.000000,,400.000000"), std::string::npos) << scatter;
}

TEST(Plots, TemperatureGuideLinesAtHardBounds) {
  ExperimentConfig config = default_experiment_config();
  config.eval_seeds = {1000};
  const EvalResult r = evaluate({"hbp", {"hbp", {}, 0.0}, std::nullopt}, config);
  const std::string csv = trace_csv(r.traces[0], 2);
  const std::string svg = plot_svg(csv, PlotKind::kTemperature);
  EXPECT_NE(svg.find(R"(class="guide" data-y="50.000000")"), std::string::npos);
  EXPECT_NE(svg.find(R"(class="guide" data-y="60.000000")"), std::string::npos);
  EXPECT_EQ(plot_svg(csv, PlotKind::kTemperature), svg);
  for (PlotKind k : {PlotKind::kPower, PlotKind::kEnables}) {
    const std::string other = plot_svg(csv, k);
    EXPECT_NE(other.find("<svg"), std::string::npos);
    EXPECT_NE(other.find("</svg>"), std::string::npos);
  }
}

TEST(Plots, EmptyOrMalformedInputIsSchemaError) {
  const std::string header = trace_csv({}, 2);
  try {
    plot_svg(header, PlotKind::kTemperature);
    FAIL() << "empty trace plotted";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("no data rows"), std::string::npos);
  }
  EXPECT_THROW(plot_svg("a,b\n1\n", PlotKind::kReturns), SchemaError);
  EXPECT_THROW(parse_plot_kind("pie"), ConfigError);
}

}  // namespace
}  // namespace chiller
