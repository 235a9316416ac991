// Copyright 2026 The macrocert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Report rows, scenario dispatch, parameter sweeps and repetition tables.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "macrocert/scenario.hpp"

namespace macrocert {

struct ReportRow {
  std::string scenario;
  std::string quantity;
  double value = 0.0;
  bool unbounded = false;          // value is +infinity; `value` is then 0
  std::optional<double> expected;  // set together with deviation
  std::optional<double> deviation;  // |value - expected| / |expected|
  std::string note;
  bool within_target = true;
};

/// Dispatches to the owning module. `seed` drives the random instance of
/// the general case when the scenario has no "seed" parameter.
std::vector<ReportRow> run_scenario(const Scenario& s, std::uint64_t seed = 1);

/// Rows whose target range was missed.
std::vector<ReportRow> failed_targets(const std::vector<ReportRow>& rows);

/// Shortest-round-trip-safe text for a double: printf "%.17g".
std::string format_real(double v);

/// RFC 4180 CSV with columns scenario,quantity,value,unbounded,expected,deviation,note.
void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows);
nlohmann::json rows_to_json(const std::vector<ReportRow>& rows);

/// Axis name -> values. Points are enumerated lexicographically in
/// (axis name, value index), the first axis varying slowest.
using ParameterGrid = std::map<std::string, std::vector<double>>;

struct SweepConfig {
  Scenario base;
  ParameterGrid grid;
};

/// Parses {"version":1, "name", "case", "parameters", "rf", "grid"}.
SweepConfig sweep_from_json(const nlohmann::json& j);

/// Quantity columns written for a case, in order.
const std::vector<std::string>& sweep_columns(ScenarioCase c);

/// One CSV row per grid point: axis values followed by sweep_columns. An
/// empty axis yields a header-only file. Points run on `threads` workers
/// and are written back in grid order. Throws DomainError above 1e6 points.
void run_sweep(const SweepConfig& config, std::ostream& out, unsigned threads = 0, std::uint64_t seed = 1);
void run_sweep(const SweepConfig& config, const std::string& path, unsigned threads = 0, std::uint64_t seed = 1);

/// For each t: the smallest n with (1 - t)^n <= p_err, and ln(1/p_err)/t.
std::vector<ReportRow> emit_repetition_table(const std::vector<double>& t_values, double p_err);

}  // namespace macrocert
