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

// chillerctl: simulate, train, evaluate and compare chiller-plant agents.
//
// Exit codes: 0 success, 1 usage error, 2 validation error (bad config,
// schema or missing inputs), 3 numerical failure during training.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chiller/artifacts.hpp"
#include "chiller/config.hpp"
#include "chiller/errors.hpp"
#include "chiller/evaluation.hpp"
#include "chiller/training.hpp"

namespace fs = std::filesystem;
using namespace chiller;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

constexpr int kFeasibilityEpisodes = 56;

ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? default_experiment_config() : load_config(path);
}

// Collects checkpoint files; a directory contributes every *.json in it.
std::vector<Checkpoint> load_checkpoints(const std::vector<std::string>& paths) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.path().extension() == ".json") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(p);
    }
  }
  std::vector<Checkpoint> out;
  for (const auto& f : files) out.push_back(load_checkpoint(f));
  return out;
}

AgentBundle bundle_for(const AgentSpec& spec, const ExperimentConfig& config,
                       const std::vector<Checkpoint>& checkpoints) {
  AgentBundle b{spec.kind, spec, std::nullopt};
  if (!spec.learned()) return b;
  const AgentKind kind = parse_kind(spec.kind);
  std::vector<Checkpoint> mine;
  for (const auto& c : checkpoints) {
    if (c.kind == kind) mine.push_back(c);
  }
  if (mine.empty()) {
    throw ConfigError("checkpoint", "no checkpoint given for learned agent '" + spec.kind + "'");
  }
  b.trained = assemble_agent(mine, config.sim, config.train);
  return b;
}

void write_trace_artifacts(const fs::path& dir, const std::string& stem,
                           const std::vector<TraceRow>& rows, const SimConfig& sim) {
  const std::string csv = trace_csv(rows, sim.n_tot);
  write_text(dir / (stem + ".csv"), csv);
  write_text(dir / (stem + "_temperature.svg"),
             plot_svg(csv, PlotKind::kTemperature, sim.hard_lower, sim.hard_upper));
  write_text(dir / (stem + "_power.svg"), plot_svg(csv, PlotKind::kPower));
  write_text(dir / (stem + "_enables.svg"), plot_svg(csv, PlotKind::kEnables));
}

int run_simulate(const std::string& config_path, const std::string& agent,
                 std::optional<std::uint64_t> seed, const std::vector<std::string>& ckpts,
                 const fs::path& out) {
  const ExperimentConfig config = config_from(config_path);
  AgentSpec spec{agent, {}, 0.0};
  if (agent == "constant") {
    const AgentSpec* listed = config.find_agent("constant");
    if (listed == nullptr) {
      throw ConfigError("agents", "simulate --agent constant needs a constant entry in agents");
    }
    spec = *listed;
  } else if (agent != "hbp" && agent != "random" && !spec.learned()) {
    throw ConfigError("agent", "unknown agent '" + agent + "'");
  }
  const AgentBundle bundle = bundle_for(spec, config, load_checkpoints(ckpts));
  const std::uint64_t s = seed.value_or(config.eval_seeds.front());
  const auto rows = trace_rows(run_agent_episode(bundle, config, s));
  write_trace_artifacts(out, "trace", rows, config.sim);
  const AgentMetrics m = aggregate_metrics(agent, {episode_metrics(rows, config.sim)}, config.sim);
  write_text(out / "metrics.json", metrics_json(m));
  std::cout << agent << " seed " << s << ": " << rows.size() << " steps, return "
            << m.mean_return << ", mean power " << m.mean_power_kw << " kW, "
            << m.temp_violation_steps << " violation steps\n";
  return kExitOk;
}

int run_train(const std::string& config_path, const std::string& agent, int episodes,
              std::optional<std::uint64_t> seed, const fs::path& out) {
  ExperimentConfig config = config_from(config_path);
  if (seed) config.train.seed = *seed;
  if (episodes < 0) throw ConfigError("episodes", "violates episodes >= 0");
  const AgentKind kind = parse_kind(agent);
  const TrainedAgent trained =
      train_agent(kind, config.sim, config.reward, config.train, episodes,
                  [](const LearningCurveRow& row) {
                    if ((row.episode + 1) % 25 == 0) {
                      std::cerr << "episode " << row.episode + 1 << " return "
                                << row.episode_return << " epsilon " << row.epsilon << '\n';
                    }
                  });
  const auto files = save_checkpoints(trained, out);
  const std::string curve = learning_curve_csv(trained.curve);
  write_text(out / "learning_curve.csv", curve);
  if (!trained.curve.empty()) write_text(out / "returns.svg", plot_svg(curve, PlotKind::kReturns));
  std::cout << agent << ": " << episodes << " episodes, " << trained.train_steps
            << " environment steps; wrote";
  for (const auto& f : files) std::cout << ' ' << f.string();
  std::cout << '\n';
  return kExitOk;
}

int run_evaluate(const std::string& config_path, const std::vector<std::string>& ckpts,
                 const fs::path& out) {
  const ExperimentConfig config = config_from(config_path);
  const std::vector<Checkpoint> checkpoints = load_checkpoints(ckpts);
  // Resolve every bundle first so a missing checkpoint fails before any work.
  std::vector<AgentBundle> bundles;
  for (const auto& spec : config.agents) bundles.push_back(bundle_for(spec, config, checkpoints));

  std::vector<AgentMetrics> all;
  for (const auto& bundle : bundles) {
    const EvalResult r = evaluate(bundle, config);
    const fs::path dir = out / bundle.name;
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
      const std::string stem = "trace_seed" + std::to_string(r.seeds[i]);
      if (i == 0) {
        write_trace_artifacts(dir, stem, r.traces[i], config.sim);
      } else {
        write_text(dir / (stem + ".csv"), trace_csv(r.traces[i], config.sim.n_tot));
      }
    }
    write_text(dir / "metrics.json", metrics_json(r.metrics));
    all.push_back(r.metrics);
    std::cout << bundle.name << ": return " << r.metrics.mean_return << ", power "
              << r.metrics.mean_power_kw << " kW, toggles " << r.metrics.toggle_count << '\n';
  }
  write_text(out / "metrics.json", metrics_array_json(all));
  return kExitOk;
}

int run_compare(const std::string& config_path, const std::vector<std::string>& metrics_paths,
                const fs::path& out) {
  const ExperimentConfig config = config_from(config_path);
  (void)config;
  std::vector<AgentMetrics> metrics;
  for (const auto& p : metrics_paths) {
    for (auto& m : parse_metrics_json(read_text(p))) metrics.push_back(std::move(m));
  }
  const Comparison c = compare(metrics);
  write_text(out / "comparison.json", comparison_json(c));
  const std::string table = comparison_table(c);
  write_text(out / "comparison.txt", table);
  const std::string scatter = scatter_csv(c);
  write_text(out / "scatter.csv", scatter);
  write_text(out / "scatter.svg", plot_svg(scatter, PlotKind::kScatter));
  std::cout << table;
  return kExitOk;
}

int run_plot(const std::string& config_path, const std::string& csv, const std::string& kind,
             const fs::path& out) {
  const ExperimentConfig config = config_from(config_path);
  write_text(out, plot_svg(read_text(csv), parse_plot_kind(kind), config.sim.hard_lower,
                           config.sim.hard_upper));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chiller-plant control experiments"};
  app.require_subcommand(1);

  std::string config_path, agent, out, preset, csv, kind;
  std::optional<std::uint64_t> seed;
  int episodes = 300;
  std::vector<std::string> checkpoints, metrics;

  auto* sim = app.add_subcommand("simulate", "Roll out one episode and write its trace");
  sim->add_option("--config", config_path, "Experiment config JSON")->check(CLI::ExistingFile);
  sim->add_option("--agent", agent, "hbp, random, constant, flat, hrl or marl")->required();
  sim->add_option("--seed", seed, "Episode seed (default: first eval seed)");
  sim->add_option("--checkpoint", checkpoints, "Checkpoint files for learned agents");
  sim->add_option("--out", out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train a learned agent");
  train->add_option("--config", config_path, "Experiment config JSON")->check(CLI::ExistingFile);
  train->add_option("--agent", agent, "flat, hrl or marl")
      ->required()
      ->check(CLI::IsMember({"flat", "hrl", "marl"}));
  auto* episodes_opt = train->add_option("--episodes", episodes, "Training episodes");
  train->add_option("--seed", seed, "Training seed (overrides train.seed)");
  train->add_option("--preset", preset, "feasibility: 56 episodes (28 simulated days)")
      ->check(CLI::IsMember({"feasibility"}))
      ->excludes(episodes_opt);
  train->add_option("--out", out, "Output directory")->required();

  auto* eval = app.add_subcommand("evaluate", "Greedy evaluation of every configured agent");
  eval->add_option("--config", config_path, "Experiment config JSON")->check(CLI::ExistingFile);
  eval->add_option("--checkpoint", checkpoints, "Checkpoint files or directories");
  eval->add_option("--out", out, "Output directory")->required();

  auto* cmp = app.add_subcommand("compare", "Compare metrics against the heuristic baseline");
  cmp->add_option("--config", config_path, "Experiment config JSON")->check(CLI::ExistingFile);
  cmp->add_option("--metrics", metrics, "Metrics JSON files")->required();
  cmp->add_option("--out", out, "Output directory")->required();

  auto* plot = app.add_subcommand("plot", "Render a CSV artifact as SVG");
  plot->add_option("--config", config_path, "Experiment config JSON")->check(CLI::ExistingFile);
  plot->add_option("--csv", csv, "Trace, learning-curve or scatter CSV")->required();
  plot->add_option("--kind", kind, "temperature, power, enables, returns or scatter")
      ->required();
  plot->add_option("--out", out, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) return run_simulate(config_path, agent, seed, checkpoints, out);
    if (*train) {
      if (preset == "feasibility") episodes = kFeasibilityEpisodes;
      return run_train(config_path, agent, episodes, seed, out);
    }
    if (*eval) return run_evaluate(config_path, checkpoints, out);
    if (*cmp) return run_compare(config_path, metrics, out);
    if (*plot) return run_plot(config_path, csv, kind, out);
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ParseError& e) {
    std::cerr << "config parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ContractError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
