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

// Scenario configs: a versioned JSON document naming a case, its numeric
// parameters, an optional reference-frame spec and the expected outputs.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "macrocert/number_states.hpp"

namespace macrocert {

enum class ScenarioCase { photon, spin, position, jc, general, twocopy };

std::string to_string(ScenarioCase c);
/// Throws ValidationError(path, ...) for an unknown name.
ScenarioCase scenario_case_from_string(const std::string& name, const std::string& path = "case");

/// Expected quantity: the computed value must land in [lower, upper].
struct OutputTarget {
  std::string quantity;
  double expected = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct Scenario {
  int version = 1;
  std::string name;
  ScenarioCase kind = ScenarioCase::photon;
  std::map<std::string, double> parameters;
  std::optional<RFSpec> rf;
  std::vector<OutputTarget> targets;
  std::string note;
};

/// Parameter names accepted by each case.
const std::vector<std::string>& allowed_parameters(ScenarioCase c);

/// Checks parameter names and the owning module's preconditions. Throws
/// ValidationError with paths such as "parameters.N".
void validate(const Scenario& s);

nlohmann::json rf_to_json(const RFSpec& rf);
RFSpec rf_from_json(const nlohmann::json& j, const std::string& path = "rf");

nlohmann::json scenario_to_json(const Scenario& s);
/// Rejects unknown keys and any version other than 1.
Scenario scenario_from_json(const nlohmann::json& j);

/// Sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Scenario& s);

Scenario load_scenario_file(const std::string& path);

/// Names of the builtin scenarios, in a fixed order.
std::vector<std::string> builtin_scenario_names();
/// Throws NotFoundError for an unknown name.
Scenario builtin_scenario(const std::string& name);

}  // namespace macrocert
