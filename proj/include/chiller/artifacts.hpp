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

// File artifacts: trace and learning-curve CSVs, metrics and comparison
// JSON, the comparison table and SVG charts. Every writer is
// byte-deterministic for identical input.

#include <filesystem>
#include <string>
#include <vector>

#include "chiller/evaluation.hpp"
#include "chiller/training.hpp"

namespace chiller {

// Header and rows, numeric fields with 6 decimal places.
std::string trace_csv(const std::vector<TraceRow>& rows, int n_tot);
// Throws SchemaError naming the offending row (1-based, header = row 1).
std::vector<TraceRow> parse_trace_csv(const std::string& text);

std::string learning_curve_csv(const std::vector<LearningCurveRow>& curve);
std::vector<LearningCurveRow> parse_learning_curve_csv(const std::string& text);

std::string metrics_json(const AgentMetrics& metrics);
// Accepts one metrics object or an array of them.
std::vector<AgentMetrics> parse_metrics_json(const std::string& text);
std::string metrics_array_json(const std::vector<AgentMetrics>& metrics);

std::string comparison_json(const Comparison& comparison);
std::string comparison_table(const Comparison& comparison);
// agent, temp_violation_steps, avg_chiller_off_time, mean_power_kw; an
// absent off time is an empty field.
std::string scatter_csv(const Comparison& comparison);

enum class PlotKind { kTemperature, kPower, kEnables, kReturns, kScatter };
PlotKind parse_plot_kind(const std::string& name);

// Renders a trace CSV (temperature, power, enables), a learning-curve CSV
// (returns) or a scatter CSV (scatter). Temperature plots carry guide-lines
// at the hard bounds. Throws SchemaError for malformed or empty input.
std::string plot_svg(const std::string& csv_text, PlotKind kind, double hard_lower = 50.0,
                     double hard_upper = 60.0);

std::string read_text(const std::filesystem::path& path);
// Creates parent directories as needed.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace chiller
