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

#include "chiller/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chiller/errors.hpp"

namespace chiller {
namespace {

using nlohmann::json;

// Every config struct lists its fields once; the same list drives parsing
// and dumping.
template <typename V>
void visit(V& v, SimConfig& c) {
  v("n_tot", c.n_tot);
  v("n_d", c.n_d);
  v("step_minutes", c.step_minutes);
  v("episode_steps", c.episode_steps);
  v("setpoint_min", c.setpoint_min);
  v("setpoint_max", c.setpoint_max);
  v("hard_lower", c.hard_lower);
  v("hard_upper", c.hard_upper);
  v("load_mean", c.load_mean);
  v("load_amplitude", c.load_amplitude);
  v("load_period_minutes", c.load_period_minutes);
  v("weather_mean", c.weather_mean);
  v("weather_amp_min", c.weather_amp_min);
  v("weather_amp_max", c.weather_amp_max);
  v("weather_period_minutes", c.weather_period_minutes);
  v("a_load", c.a_load);
  v("a_amb", c.a_amb);
  v("a_cool", c.a_cool);
  v("beta_on", c.beta_on);
  v("beta_off", c.beta_off);
  v("p_idle", c.p_idle);
  v("k_w", c.k_w);
  v("k_sp", c.k_sp);
  v("p_start", c.p_start);
  v("startup_steps", c.startup_steps);
  v("initial_facility_temp", c.initial_facility_temp);
  v("seed", c.seed);
}

template <typename V>
void visit(V& v, RewardParams& c) {
  v("alpha_h", c.alpha_h);
  v("lambda_h", c.lambda_h);
  v("alpha_o", c.alpha_o);
  v("alpha_p", c.alpha_p);
  v("lambda_p", c.lambda_p);
  v("alpha_c", c.alpha_c);
  v("lambda_c", c.lambda_c);
  v("soft_lower", c.soft_lower);
  v("soft_upper", c.soft_upper);
}

template <typename V>
void visit(V& v, HbpConfig& c) {
  v("fixed_setpoint", c.fixed_setpoint);
  v("on_trigger_minutes", c.on_trigger_minutes);
  v("off_trigger_minutes", c.off_trigger_minutes);
  v("trigger_upper", c.trigger_upper);
  v("trigger_lower", c.trigger_lower);
}

template <typename V>
void visit(V& v, TrainConfig& c) {
  v("gamma", c.gamma);
  v("learning_rate", c.learning_rate);
  v("batch_size", c.batch_size);
  v("replay_capacity", c.replay_capacity);
  v("min_replay", c.min_replay);
  v("target_sync_period", c.target_sync_period);
  v("epsilon_start", c.epsilon_start);
  v("epsilon_end", c.epsilon_end);
  v("epsilon_decay_steps", c.epsilon_decay_steps);
  v("gradient_steps_per_env_step", c.gradient_steps_per_env_step);
  v("seed", c.seed);
  v("hidden_width", c.hidden_width);
  v("hidden_layers", c.hidden_layers);
  v("reward_scale", c.reward_scale);
  v("setpoint_grid", c.setpoint_grid);
  v("goal_menu", c.goal_menu);
  v("marl_period", c.marl_period);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const char* type_label(const json& j) { return j.type_name(); }

void read_value(const json& j, const std::string& path, int& out) {
  if (!j.is_number_integer()) {
    throw ConfigError(path, std::string("expected integer, got ") + type_label(j));
  }
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(path, "integer out of range");
  }
  out = static_cast<int>(v);
}

void read_value(const json& j, const std::string& path, std::uint64_t& out) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<long long>() < 0)) {
    throw ConfigError(path, "expected non-negative integer");
  }
  out = j.get<std::uint64_t>();
}

void read_value(const json& j, const std::string& path, double& out) {
  if (!j.is_number()) {
    throw ConfigError(path, std::string("expected number, got ") + type_label(j));
  }
  out = j.get<double>();
}

void read_value(const json& j, const std::string& path, bool& out) {
  if (!j.is_boolean()) {
    throw ConfigError(path, std::string("expected boolean, got ") + type_label(j));
  }
  out = j.get<bool>();
}

void read_value(const json& j, const std::string& path, std::string& out) {
  if (!j.is_string()) {
    throw ConfigError(path, std::string("expected string, got ") + type_label(j));
  }
  out = j.get<std::string>();
}

template <typename T>
void read_value(const json& j, const std::string& path, std::vector<T>& out) {
  if (!j.is_array()) {
    throw ConfigError(path, std::string("expected array, got ") + type_label(j));
  }
  std::vector<T> values(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    read_value(j[i], path + "[" + std::to_string(i) + "]", values[i]);
  }
  out = std::move(values);
}

void read_value(const json& j, const std::string& path, std::vector<bool>& out) {
  if (!j.is_array()) {
    throw ConfigError(path, std::string("expected array, got ") + type_label(j));
  }
  out.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    bool b = false;
    read_value(j[i], path + "[" + std::to_string(i) + "]", b);
    out.push_back(b);
  }
}

// Copies the keys it is asked for and rejects whatever is left over.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) {
      throw ConfigError(path_, std::string("expected object, got ") + type_label(object_));
    }
  }

  template <typename T>
  void operator()(const char* key, T& field) {
    seen_.insert(key);
    const auto it = object_.find(key);
    if (it != object_.end()) read_value(*it, join(path_, key), field);
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  void reject_unknown() const {
    for (const auto& item : object_.items()) {
      if (seen_.count(item.key()) == 0) {
        throw ConfigError(join(path_, item.key()), "unknown key");
      }
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

class ObjectWriter {
 public:
  template <typename T>
  void operator()(const char* key, T& field) {
    out[key] = field;
  }
  json out = json::object();
};

template <typename T>
void read_section(ObjectReader& parent, const char* key, T& section) {
  if (const json* j = parent.child(key)) {
    ObjectReader r(*j, key);
    visit(r, section);
    r.reject_unknown();
  }
}

template <typename T>
json write_section(T section) {
  ObjectWriter w;
  visit(w, section);
  return w.out;
}

AgentSpec read_agent(const json& j, const std::string& path) {
  static const char* kNames[] = {"flat", "hrl", "marl", "hbp", "random"};
  AgentSpec spec;
  if (j.is_string()) {
    spec.kind = j.get<std::string>();
    if (spec.kind == "constant") {
      throw ConfigError(path, "constant needs {\"constant\": {\"enables\", \"setpoint\"}}");
    }
    if (std::find(std::begin(kNames), std::end(kNames), spec.kind) == std::end(kNames)) {
      throw ConfigError(path, "unknown agent '" + spec.kind + "'");
    }
    return spec;
  }
  if (!j.is_object() || j.size() != 1 || !j.contains("constant")) {
    throw ConfigError(path, "expected an agent name or {\"constant\": {...}}");
  }
  spec.kind = "constant";
  ObjectReader r(j.at("constant"), path + ".constant");
  r("enables", spec.enables);
  r("setpoint", spec.setpoint);
  r.reject_unknown();
  return spec;
}

json write_agent(const AgentSpec& a) {
  if (a.kind != "constant") return a.kind;
  json enables = json::array();
  for (bool e : a.enables) enables.push_back(e);
  return json{{"constant", {{"enables", enables}, {"setpoint", a.setpoint}}}};
}

// Prefixes the section name onto errors raised by a sub-config's validate().
template <typename F>
void validate_section(const char* section, F&& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    const std::string field = e.field();
    const std::string message = std::string(e.what()).substr(field.empty() ? 0 : field.size() + 2);
    throw ConfigError(join(section, field), message);
  }
}

// 1-based line and column of a byte offset into `text`.
std::pair<int, int> line_column(std::string_view text, std::size_t offset) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (config_version != kConfigVersion) {
    throw ConfigError("config_version",
                      "unsupported version " + std::to_string(config_version));
  }
  validate_section("sim", [&] { sim.validate(); });
  validate_section("reward", [&] { reward.validate(sim); });
  validate_section("hbp", [&] { hbp.validate(sim); });
  validate_section("train", [&] { train.validate(sim); });
  if (agents.empty()) throw ConfigError("agents", "violates nonempty");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const AgentSpec& a = agents[i];
    if (a.kind != "constant") continue;
    const std::string path = "agents[" + std::to_string(i) + "].constant";
    if (a.enables.size() != static_cast<std::size_t>(sim.n_tot)) {
      throw ConfigError(path + ".enables", "violates length = n_tot");
    }
    if (a.setpoint < sim.setpoint_min || a.setpoint > sim.setpoint_max) {
      throw ConfigError(path + ".setpoint",
                        "violates setpoint_min <= setpoint <= setpoint_max");
    }
  }
  if (eval_episodes < 1) throw ConfigError("eval_episodes", "violates eval_episodes >= 1");
  if (eval_seeds.size() != static_cast<std::size_t>(eval_episodes)) {
    throw ConfigError("eval_seeds", "violates length = eval_episodes");
  }
  if (output_dir.empty()) throw ConfigError("output_dir", "violates nonempty");
}

const AgentSpec* ExperimentConfig::find_agent(std::string_view kind) const {
  for (const auto& a : agents) {
    if (a.kind == kind) return &a;
  }
  return nullptr;
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig c;
  c.agents = {{"flat", {}, 0.0}, {"hrl", {}, 0.0},    {"marl", {}, 0.0},
              {"hbp", {}, 0.0},  {"random", {}, 0.0}, {"constant", {true, false}, 42.0}};
  for (int i = 0; i < c.eval_episodes; ++i) c.eval_seeds.push_back(1000 + i);
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte == 0 ? 0 : e.byte - 1;
    const auto [line, column] = line_column(text, at);
    std::string what = e.what();
    // Drop the library's own "[json.exception.parse_error.101] ..." prefix.
    if (const auto colon = what.find(": "); colon != std::string::npos) {
      what = what.substr(colon + 2);
    }
    throw ParseError(line, column, what);
  }

  ExperimentConfig c = default_experiment_config();
  ObjectReader r(root, "");
  r("config_version", c.config_version);
  read_section(r, "sim", c.sim);
  read_section(r, "reward", c.reward);
  read_section(r, "hbp", c.hbp);
  read_section(r, "train", c.train);
  if (const json* agents = r.child("agents")) {
    if (!agents->is_array()) throw ConfigError("agents", "expected array");
    c.agents.clear();
    for (std::size_t i = 0; i < agents->size(); ++i) {
      c.agents.push_back(read_agent((*agents)[i], "agents[" + std::to_string(i) + "]"));
    }
  }
  const bool episodes_given = root.contains("eval_episodes");
  r("eval_episodes", c.eval_episodes);
  if (root.contains("eval_seeds")) {
    r("eval_seeds", c.eval_seeds);
  } else {
    r.child("eval_seeds");
    if (episodes_given) {
      c.eval_seeds.clear();
      for (int i = 0; i < c.eval_episodes; ++i) c.eval_seeds.push_back(1000 + i);
    }
  }
  r("output_dir", c.output_dir);
  r.reject_unknown();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dump_config(const ExperimentConfig& c) {
  json root;
  root["config_version"] = c.config_version;
  root["sim"] = write_section(c.sim);
  root["reward"] = write_section(c.reward);
  root["hbp"] = write_section(c.hbp);
  root["train"] = write_section(c.train);
  json agents = json::array();
  for (const auto& a : c.agents) agents.push_back(write_agent(a));
  root["agents"] = agents;
  root["eval_episodes"] = c.eval_episodes;
  root["eval_seeds"] = c.eval_seeds;
  root["output_dir"] = c.output_dir;
  return root.dump(2) + "\n";
}

}  // namespace chiller
