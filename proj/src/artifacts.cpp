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

#include "chiller/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "chiller/errors.hpp"

namespace chiller {
namespace {

using nlohmann::json;

std::string fixed6(double v) {
  char buf[64];
  // Adding +0.0 turns -0.0 into +0.0 so zero always renders unsigned.
  std::snprintf(buf, sizeof(buf), "%.6f", v + 0.0);
  return buf;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  // Avoid "-0.00" so that output does not depend on the sign of zero.
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("row 1: missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw SchemaError("row " + std::to_string(row) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw SchemaError("row 1: missing header");
  return table;
}

double parse_number(const std::string& field, int row, const std::string& column) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(v)) {
    throw SchemaError("row " + std::to_string(row) + ": column '" + column +
                      "' is not a number: '" + field + "'");
  }
  return v;
}

int parse_int(const std::string& field, int row, const std::string& column) {
  const double v = parse_number(field, row, column);
  if (v != std::floor(v)) {
    throw SchemaError("row " + std::to_string(row) + ": column '" + column +
                      "' is not an integer: '" + field + "'");
  }
  return static_cast<int>(v);
}

std::vector<std::string> trace_header(int n_tot) {
  std::vector<std::string> h{"t", "acting_agent", "T_f", "T_ambient", "load_velocity",
                             "total_power_kw"};
  for (int i = 0; i < n_tot; ++i) {
    const std::string s = std::to_string(i);
    h.push_back("enabled_" + s);
    h.push_back("setpoint_" + s);
    h.push_back("power_" + s);
  }
  for (const char* c : {"balance", "on_count_penalty", "power_reward", "temperature", "total",
                        "hla_total", "lla_total", "option_id"}) {
    h.emplace_back(c);
  }
  return h;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json metrics_to_json(const AgentMetrics& m) {
  json j;
  j["agent"] = m.agent;
  j["episodes"] = m.episodes;
  j["episode_steps"] = m.episode_steps;
  j["mean_return"] = m.mean_return;
  j["mean_hla_return"] = m.mean_hla_return;
  j["mean_lla_return"] = m.mean_lla_return;
  j["temp_violation_steps"] = m.temp_violation_steps;
  j["avg_chiller_off_time"] = optional_number(m.avg_chiller_off_time);
  j["off_interval_count"] = m.off_interval_count;
  j["never_re_enabled"] = m.never_re_enabled;
  j["mean_power_kw"] = m.mean_power_kw;
  j["toggle_count"] = m.toggle_count;
  j["balance_entropy_final"] = m.balance_entropy_final;
  j["episode_returns"] = m.episode_returns;
  return j;
}

AgentMetrics metrics_from_json(const json& j) {
  try {
    AgentMetrics m;
    m.agent = j.at("agent").get<std::string>();
    m.episodes = j.at("episodes").get<int>();
    m.episode_steps = j.at("episode_steps").get<int>();
    m.mean_return = j.at("mean_return").get<double>();
    m.mean_hla_return = j.at("mean_hla_return").get<double>();
    m.mean_lla_return = j.at("mean_lla_return").get<double>();
    m.temp_violation_steps = j.at("temp_violation_steps").get<double>();
    if (!j.at("avg_chiller_off_time").is_null()) {
      m.avg_chiller_off_time = j.at("avg_chiller_off_time").get<double>();
    }
    m.off_interval_count = j.at("off_interval_count").get<int>();
    m.never_re_enabled = j.at("never_re_enabled").get<std::vector<int>>();
    m.mean_power_kw = j.at("mean_power_kw").get<double>();
    m.toggle_count = j.at("toggle_count").get<double>();
    m.balance_entropy_final = j.at("balance_entropy_final").get<double>();
    m.episode_returns = j.at("episode_returns").get<std::vector<double>>();
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("metrics: ") + e.what());
  }
}

// ---- SVG ----------------------------------------------------------------

constexpr double kWidth = 800.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool step = false;
};

struct Guide {
  double y;
  std::string label;
};

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void widen() {
    if (hi - lo < 1e-9) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(std::string title, std::string x_label, std::string y_label, Range x, Range y)
      : x_(x), y_(y) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(kWidth)
         << "\" height=\"" << fixed2(kHeight) << "\" viewBox=\"0 0 " << fixed2(kWidth) << ' '
         << fixed2(kHeight) << "\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         << "<text x=\"" << fixed2(kWidth / 2) << "\" y=\"24.00\" text-anchor=\"middle\" "
         << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title) << "</text>\n";
    axes(x_label, y_label);
  }

  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * plot_w(); }
  double py(double y) const {
    return kTop + plot_h() - (y - y_.lo) / (y_.hi - y_.lo) * plot_h();
  }

  void guide(const Guide& g) {
    out_ << "<line class=\"guide\" data-y=\"" << fixed6(g.y) << "\" x1=\"" << fixed2(kLeft)
         << "\" y1=\"" << fixed2(py(g.y)) << "\" x2=\"" << fixed2(kLeft + plot_w())
         << "\" y2=\"" << fixed2(py(g.y))
         << "\" stroke=\"#444444\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n"
         << "<text x=\"" << fixed2(kLeft + plot_w() + 4) << "\" y=\"" << fixed2(py(g.y) + 4)
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(g.label)
         << "</text>\n";
  }

  void line(const Series& s, std::size_t color) {
    out_ << "<polyline class=\"series\" fill=\"none\" stroke=\"" << kPalette[color % 8]
         << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i > 0) out_ << ' ';
      if (s.step && i > 0) out_ << fixed2(px(s.x[i])) << ',' << fixed2(py(s.y[i - 1])) << ' ';
      out_ << fixed2(px(s.x[i])) << ',' << fixed2(py(s.y[i]));
    }
    out_ << "\"/>\n";
    legend(s.name, color);
  }

  void point(double x, double y, double radius, std::size_t color, const std::string& label) {
    out_ << "<circle class=\"point\" cx=\"" << fixed2(px(x)) << "\" cy=\"" << fixed2(py(y))
         << "\" r=\"" << fixed2(radius) << "\" fill=\"" << kPalette[color % 8]
         << "\" fill-opacity=\"0.7\"/>\n"
         << "<text x=\"" << fixed2(px(x) + radius + 3) << "\" y=\"" << fixed2(py(y) + 4)
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(label)
         << "</text>\n";
  }

  void note(const std::string& text) {
    out_ << "<text x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kHeight - 6)
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(text) << "</text>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  static double plot_w() { return kWidth - kLeft - kRight; }
  static double plot_h() { return kHeight - kTop - kBottom; }

  void axes(const std::string& x_label, const std::string& y_label) {
    out_ << "<rect x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kTop) << "\" width=\""
         << fixed2(plot_w()) << "\" height=\"" << fixed2(plot_h())
         << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = x_.lo + (x_.hi - x_.lo) * i / 4.0;
      const double yv = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      out_ << "<text x=\"" << fixed2(px(xv)) << "\" y=\"" << fixed2(kTop + plot_h() + 16)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << fixed2(xv) << "</text>\n";
      out_ << "<text x=\"" << fixed2(kLeft - 6) << "\" y=\"" << fixed2(py(yv) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << fixed2(yv) << "</text>\n";
    }
    out_ << "<text x=\"" << fixed2(kLeft + plot_w() / 2) << "\" y=\"" << fixed2(kHeight - 18)
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
         << escape_xml(x_label) << "</text>\n";
    out_ << "<text x=\"16.00\" y=\"" << fixed2(kTop + plot_h() / 2)
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         << "transform=\"rotate(-90 16.00 " << fixed2(kTop + plot_h() / 2) << ")\">"
         << escape_xml(y_label) << "</text>\n";
  }

  void legend(const std::string& name, std::size_t color) {
    const double y = kTop + 14.0 * static_cast<double>(legend_rows_++);
    const double x = kLeft + plot_w() + 10;
    out_ << "<line x1=\"" << fixed2(x) << "\" y1=\"" << fixed2(y + 10) << "\" x2=\""
         << fixed2(x + 16) << "\" y2=\"" << fixed2(y + 10) << "\" stroke=\""
         << kPalette[color % 8] << "\" stroke-width=\"2\"/>\n"
         << "<text x=\"" << fixed2(x + 20) << "\" y=\"" << fixed2(y + 14)
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(name) << "</text>\n";
  }

  Range x_, y_;
  int legend_rows_ = 0;
  std::ostringstream out_;
};

Range range_of(const std::vector<Series>& series, const std::vector<Guide>& guides, bool x) {
  Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& s : series) {
    for (double v : x ? s.x : s.y) {
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
    }
  }
  if (!x) {
    for (const auto& g : guides) {
      r.lo = std::min(r.lo, g.y);
      r.hi = std::max(r.hi, g.y);
    }
  }
  r.widen();
  return r;
}

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       const std::vector<Guide>& guides) {
  Canvas canvas(title, x_label, y_label, range_of(series, guides, true),
                range_of(series, guides, false));
  for (const auto& g : guides) canvas.guide(g);
  for (std::size_t i = 0; i < series.size(); ++i) canvas.line(series[i], i);
  return canvas.finish();
}

std::vector<double> numeric_column(const CsvTable& table, const std::string& name) {
  const std::size_t c = table.column(name);
  std::vector<double> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out.push_back(parse_number(table.rows[r][c], static_cast<int>(r) + 2, name));
  }
  return out;
}

int chiller_columns(const CsvTable& table) {
  int n = 0;
  while (std::find(table.header.begin(), table.header.end(),
                   "enabled_" + std::to_string(n)) != table.header.end()) {
    ++n;
  }
  return n;
}

}  // namespace

std::string trace_csv(const std::vector<TraceRow>& rows, int n_tot) {
  std::ostringstream out;
  const auto header = trace_header(n_tot);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    if (r.enabled.size() != static_cast<std::size_t>(n_tot)) {
      throw ContractError("trace row does not match n_tot");
    }
    out << r.t << ',' << agent_name(r.agent) << ',' << fixed6(r.facility_temp) << ','
        << fixed6(r.ambient_temp) << ',' << fixed6(r.load_velocity) << ','
        << fixed6(r.total_power);
    for (std::size_t i = 0; i < r.enabled.size(); ++i) {
      out << ',' << (r.enabled[i] ? 1 : 0) << ',' << fixed6(r.setpoint[i]) << ','
          << fixed6(r.power[i]);
    }
    out << ',' << fixed6(r.balance) << ',' << fixed6(r.on_count_penalty) << ','
        << fixed6(r.power_reward) << ',' << fixed6(r.temperature) << ',' << fixed6(r.total)
        << ',' << fixed6(r.hla_total) << ',' << fixed6(r.lla_total) << ',' << r.option_id
        << '\n';
  }
  return out.str();
}

std::vector<TraceRow> parse_trace_csv(const std::string& text) {
  const CsvTable table = parse_csv(text);
  const int n = chiller_columns(table);
  if (table.header != trace_header(n)) {
    throw SchemaError("row 1: header does not match the trace schema");
  }
  std::vector<TraceRow> rows;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& f = table.rows[k];
    const int row = static_cast<int>(k) + 2;
    const auto& h = table.header;
    TraceRow r;
    std::size_t c = 0;
    r.t = parse_int(f[c], row, h[c]);
    ++c;
    try {
      r.agent = parse_agent_name(f[c]);
    } catch (const SchemaError& e) {
      throw SchemaError("row " + std::to_string(row) + ": " + e.what());
    }
    ++c;
    r.facility_temp = parse_number(f[c], row, h[c]); ++c;
    r.ambient_temp = parse_number(f[c], row, h[c]); ++c;
    r.load_velocity = parse_number(f[c], row, h[c]); ++c;
    r.total_power = parse_number(f[c], row, h[c]); ++c;
    for (int i = 0; i < n; ++i) {
      const int e = parse_int(f[c], row, h[c]);
      if (e != 0 && e != 1) {
        throw SchemaError("row " + std::to_string(row) + ": column '" + h[c] +
                          "' must be 0 or 1");
      }
      r.enabled.push_back(e == 1); ++c;
      r.setpoint.push_back(parse_number(f[c], row, h[c])); ++c;
      r.power.push_back(parse_number(f[c], row, h[c])); ++c;
    }
    r.balance = parse_number(f[c], row, h[c]); ++c;
    r.on_count_penalty = parse_number(f[c], row, h[c]); ++c;
    r.power_reward = parse_number(f[c], row, h[c]); ++c;
    r.temperature = parse_number(f[c], row, h[c]); ++c;
    r.total = parse_number(f[c], row, h[c]); ++c;
    r.hla_total = parse_number(f[c], row, h[c]); ++c;
    r.lla_total = parse_number(f[c], row, h[c]); ++c;
    r.option_id = parse_int(f[c], row, h[c]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string learning_curve_csv(const std::vector<LearningCurveRow>& curve) {
  std::ostringstream out;
  out << "episode,return,hla_return,lla_return,epsilon\n";
  for (const auto& r : curve) {
    out << r.episode << ',' << fixed6(r.episode_return) << ',' << fixed6(r.hla_return) << ','
        << fixed6(r.lla_return) << ',' << fixed6(r.epsilon) << '\n';
  }
  return out.str();
}

std::vector<LearningCurveRow> parse_learning_curve_csv(const std::string& text) {
  const CsvTable table = parse_csv(text);
  const std::vector<std::string> expected{"episode", "return", "hla_return", "lla_return",
                                          "epsilon"};
  if (table.header != expected) {
    throw SchemaError("row 1: header does not match the learning-curve schema");
  }
  std::vector<LearningCurveRow> curve;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& f = table.rows[k];
    const int row = static_cast<int>(k) + 2;
    curve.push_back({parse_int(f[0], row, "episode"), parse_number(f[1], row, "return"),
                     parse_number(f[2], row, "hla_return"),
                     parse_number(f[3], row, "lla_return"),
                     parse_number(f[4], row, "epsilon")});
  }
  return curve;
}

std::string metrics_json(const AgentMetrics& metrics) {
  return metrics_to_json(metrics).dump(2) + "\n";
}

std::string metrics_array_json(const std::vector<AgentMetrics>& metrics) {
  json arr = json::array();
  for (const auto& m : metrics) arr.push_back(metrics_to_json(m));
  return arr.dump(2) + "\n";
}

std::vector<AgentMetrics> parse_metrics_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("metrics: ") + e.what());
  }
  std::vector<AgentMetrics> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(metrics_from_json(item));
  } else {
    out.push_back(metrics_from_json(j));
  }
  return out;
}

std::string comparison_json(const Comparison& c) {
  json j;
  j["hbp_mean_power_kw"] = c.hbp_power_kw;
  j["thresholds"] = {{"max_violation_fraction", c.thresholds.max_violation_fraction},
                     {"min_off_minutes", c.thresholds.min_off_minutes}};
  json agents = json::array();
  for (std::size_t i = 0; i < c.metrics.size(); ++i) {
    const AgentMetrics& m = c.metrics[i];
    const AgentFlags& f = c.flags[i];
    agents.push_back({{"agent", m.agent},
                      {"temp_violation_steps", m.temp_violation_steps},
                      {"avg_chiller_off_time", optional_number(m.avg_chiller_off_time)},
                      {"mean_power_kw", m.mean_power_kw},
                      {"toggle_count", m.toggle_count},
                      {"violations_ok", f.violations_ok},
                      {"off_time_ok", f.off_time_ok},
                      {"power_below_hbp", f.power_ok},
                      {"gold_box", f.gold_box()}});
  }
  j["agents"] = agents;
  return j.dump(2) + "\n";
}

std::string comparison_table(const Comparison& c) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %12s %14s %12s %10s  %-5s %-5s %-5s %-4s\n", "agent",
                "violations", "off_time_min", "power_kw", "toggles", "viol", "off", "power",
                "gold");
  out << line;
  for (std::size_t i = 0; i < c.metrics.size(); ++i) {
    const AgentMetrics& m = c.metrics[i];
    const AgentFlags& f = c.flags[i];
    const std::string off = m.avg_chiller_off_time ? fixed2(*m.avg_chiller_off_time) : "absent";
    std::snprintf(line, sizeof(line), "%-10s %12.2f %14s %12.2f %10.2f  %-5s %-5s %-5s %-4s\n",
                  m.agent.c_str(), m.temp_violation_steps, off.c_str(), m.mean_power_kw,
                  m.toggle_count, f.violations_ok ? "yes" : "no", f.off_time_ok ? "yes" : "no",
                  f.power_ok ? "yes" : "no", f.gold_box() ? "yes" : "no");
    out << line;
  }
  std::snprintf(line, sizeof(line),
                "thresholds: violations <= %.0f%% of steps, off time >= %.0f min, power < "
                "hbp (%.2f kW)\n",
                100.0 * c.thresholds.max_violation_fraction, c.thresholds.min_off_minutes,
                c.hbp_power_kw);
  out << line;
  return out.str();
}

std::string scatter_csv(const Comparison& c) {
  std::ostringstream out;
  out << "agent,temp_violation_steps,avg_chiller_off_time,mean_power_kw\n";
  for (const auto& m : c.metrics) {
    out << m.agent << ',' << fixed6(m.temp_violation_steps) << ','
        << (m.avg_chiller_off_time ? fixed6(*m.avg_chiller_off_time) : "") << ','
        << fixed6(m.mean_power_kw) << '\n';
  }
  return out.str();
}

PlotKind parse_plot_kind(const std::string& name) {
  static const std::map<std::string, PlotKind> kinds{{"temperature", PlotKind::kTemperature},
                                                     {"power", PlotKind::kPower},
                                                     {"enables", PlotKind::kEnables},
                                                     {"returns", PlotKind::kReturns},
                                                     {"scatter", PlotKind::kScatter}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) throw ConfigError("kind", "unknown plot kind '" + name + "'");
  return it->second;
}

std::string plot_svg(const std::string& csv_text, PlotKind kind, double hard_lower,
                     double hard_upper) {
  const CsvTable table = parse_csv(csv_text);
  if (table.rows.empty()) throw SchemaError("row 2: no data rows to plot");

  switch (kind) {
    case PlotKind::kTemperature: {
      const auto t = numeric_column(table, "t");
      return line_chart("Facility temperature", "step", "temperature (F)",
                        {{"T_f", t, numeric_column(table, "T_f"), false}},
                        {{hard_lower, "lower " + fixed2(hard_lower)},
                         {hard_upper, "upper " + fixed2(hard_upper)}});
    }
    case PlotKind::kPower: {
      const auto t = numeric_column(table, "t");
      std::vector<Series> series{{"total", t, numeric_column(table, "total_power_kw"), false}};
      for (int i = 0; i < chiller_columns(table); ++i) {
        const std::string name = "power_" + std::to_string(i);
        series.push_back({name, t, numeric_column(table, name), false});
      }
      return line_chart("Plant power", "step", "power (kW)", series, {});
    }
    case PlotKind::kEnables: {
      const auto t = numeric_column(table, "t");
      std::vector<Series> series;
      for (int i = 0; i < chiller_columns(table); ++i) {
        const std::string name = "enabled_" + std::to_string(i);
        auto y = numeric_column(table, name);
        // Stack the on/off traces so they do not overlap.
        for (double& v : y) v += 1.5 * i;
        series.push_back({"chiller " + std::to_string(i), t, y, true});
      }
      return line_chart("Chiller enables", "step", "enabled (stacked)", series, {});
    }
    case PlotKind::kReturns: {
      const auto ep = numeric_column(table, "episode");
      return line_chart("Learning curve", "episode", "episode return",
                        {{"return", ep, numeric_column(table, "return"), false},
                         {"hla_return", ep, numeric_column(table, "hla_return"), false},
                         {"lla_return", ep, numeric_column(table, "lla_return"), false}},
                        {});
    }
    case PlotKind::kScatter: {
      const std::size_t agent_c = table.column("agent");
      const auto viol = numeric_column(table, "temp_violation_steps");
      const auto power = numeric_column(table, "mean_power_kw");
      const std::size_t off_c = table.column("avg_chiller_off_time");
      std::vector<std::string> absent;
      Series points{"agents", {}, {}, false};
      std::vector<std::pair<std::size_t, double>> drawn;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& off = table.rows[r][off_c];
        if (off.empty()) {
          absent.push_back(table.rows[r][agent_c]);
          continue;
        }
        points.x.push_back(power[r]);
        points.y.push_back(parse_number(off, static_cast<int>(r) + 2, "avg_chiller_off_time"));
        drawn.emplace_back(r, viol[r]);
      }
      if (points.x.empty()) points = {"agents", power, std::vector<double>(power.size(), 0.0)};
      Canvas canvas("Violations / off time / power", "mean power (kW)",
                    "avg chiller off time (min)", range_of({points}, {}, true),
                    range_of({points}, {}, false));
      for (std::size_t i = 0; i < drawn.size(); ++i) {
        const auto [r, v] = drawn[i];
        // Marker area grows with the violation count.
        canvas.point(points.x[i], points.y[i], 4.0 + std::sqrt(v), i,
                     table.rows[r][agent_c] + " (" + fixed2(v) + " viol)");
      }
      if (!absent.empty()) {
        std::string text = "no terminated off interval:";
        for (const auto& a : absent) text += " " + a;
        canvas.note(text);
      }
      return canvas.finish();
    }
  }
  throw ContractError("unknown plot kind");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("out", "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("out", "failed writing '" + path.string() + "'");
}

}  // namespace chiller
