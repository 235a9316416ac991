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

#include "macrocert/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <algorithm>

#include "macrocert/constants.hpp"
#include "macrocert/errors.hpp"

namespace macrocert {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ValidationError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(path.empty() ? key : path + "." + key, "missing required key");
  return *it;
}

double number_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ValidationError(path + "." + key, "expected a number");
  return v.get<double>();
}

std::int64_t integer_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) throw ValidationError(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::vector<double> numbers_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ValidationError(path + "." + key, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ValidationError(path + "." + key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

bool is_integer_valued(double v) {
  return std::isfinite(v) && std::floor(v) == v && std::abs(v) < 9.0e18;
}

class ParameterCheck {
 public:
  explicit ParameterCheck(const Scenario& s) : s_(s) {}

  bool has(const std::string& key) const { return s_.parameters.contains(key); }

  double get(const std::string& key) const {
    const auto it = s_.parameters.find(key);
    if (it == s_.parameters.end()) throw ValidationError(path(key), "missing required parameter");
    if (!std::isfinite(it->second)) throw ValidationError(path(key), "must be finite");
    return it->second;
  }

  void positive(const std::string& key) const {
    if (!(get(key) > 0.0)) throw ValidationError(path(key), "must be positive");
  }
  void non_negative(const std::string& key) const {
    if (!(get(key) >= 0.0)) throw ValidationError(path(key), "must be non-negative");
  }
  void integer_at_least(const std::string& key, double lo) const {
    const double v = get(key);
    if (!is_integer_valued(v)) throw ValidationError(path(key), "must be an integer");
    if (v < lo) throw ValidationError(path(key), "must be at least " + std::to_string(static_cast<long long>(lo)));
  }
  void at_most(const std::string& key, double hi) const {
    if (get(key) > hi) throw ValidationError(path(key), "exceeds the supported maximum");
  }

 private:
  static std::string path(const std::string& key) { return "parameters." + key; }
  const Scenario& s_;
};

}  // namespace

std::string to_string(ScenarioCase c) {
  switch (c) {
    case ScenarioCase::photon: return "photon";
    case ScenarioCase::spin: return "spin";
    case ScenarioCase::position: return "position";
    case ScenarioCase::jc: return "jc";
    case ScenarioCase::general: return "general";
    case ScenarioCase::twocopy: return "twocopy";
  }
  return "photon";
}

ScenarioCase scenario_case_from_string(const std::string& name, const std::string& path) {
  for (auto c : {ScenarioCase::photon, ScenarioCase::spin, ScenarioCase::position, ScenarioCase::jc,
                 ScenarioCase::general, ScenarioCase::twocopy}) {
    if (to_string(c) == name) return c;
  }
  throw ValidationError(path, "unknown case '" + name + "'");
}

const std::vector<std::string>& allowed_parameters(ScenarioCase c) {
  static const std::map<ScenarioCase, std::vector<std::string>> table = {
      {ScenarioCase::photon, {"N", "mean_photon"}},
      {ScenarioCase::spin, {"N", "M", "exponent", "m0"}},
      {ScenarioCase::position, {"L", "m", "m0", "sigma0", "K", "rf_mass", "exponent"}},
      {ScenarioCase::jc, {"N", "mean_photon", "cutoff"}},
      {ScenarioCase::general, {"N", "beta", "c", "seed", "random"}},
      {ScenarioCase::twocopy, {"N"}},
  };
  return table.at(c);
}

void validate(const Scenario& s) {
  if (s.version != 1) throw ValidationError("version", "only version 1 is supported");
  if (s.name.empty()) throw ValidationError("name", "must not be empty");
  const auto& allowed = allowed_parameters(s.kind);
  for (const auto& [key, value] : s.parameters) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("parameters." + key, "not a parameter of case " + to_string(s.kind));
    }
  }
  for (std::size_t i = 0; i < s.targets.size(); ++i) {
    const auto& t = s.targets[i];
    const std::string path = "targets[" + std::to_string(i) + "]";
    if (t.quantity.empty()) throw ValidationError(path + ".quantity", "must not be empty");
    if (!(t.lower <= t.upper)) throw ValidationError(path, "lower must not exceed upper");
  }

  const ParameterCheck p(s);
  switch (s.kind) {
    case ScenarioCase::photon:
      p.integer_at_least("N", 1);
      p.non_negative("mean_photon");
      break;
    case ScenarioCase::spin:
      p.positive("N");
      if (p.has("M")) {
        p.integer_at_least("M", 1);
        p.integer_at_least("N", 1);
      } else if (p.has("exponent")) {
        p.positive("exponent");
      } else {
        throw ValidationError("parameters", "spin case needs M or exponent");
      }
      if (p.has("m0")) p.positive("m0");
      break;
    case ScenarioCase::position:
      p.positive("m");
      p.positive("m0");
      p.positive("sigma0");
      if (p.has("K") && p.has("rf_mass")) throw ValidationError("parameters.rf_mass", "give K or rf_mass, not both");
      if (p.has("K")) p.positive("K");
      if (p.has("rf_mass")) p.positive("rf_mass");
      if (p.has("L")) p.positive("L");
      if (p.has("exponent")) p.positive("exponent");
      if (!p.has("L") && !p.has("K") && !p.has("rf_mass")) {
        throw ValidationError("parameters", "position case needs L, K or rf_mass");
      }
      break;
    case ScenarioCase::jc:
      p.integer_at_least("N", 1);
      p.positive("mean_photon");
      if (p.has("cutoff")) p.integer_at_least("cutoff", 1);
      break;
    case ScenarioCase::general:
      p.integer_at_least("N", 1);
      if (p.has("c")) p.non_negative("c");
      if (p.has("seed")) p.integer_at_least("seed", 0);
      if (p.has("random")) p.integer_at_least("random", 0);
      if (s.rf) {
        p.positive("beta");
        try {
          macrocert::validate(*s.rf);
        } catch (const DomainError& e) {
          throw ValidationError("rf", e.what());
        }
      } else if (!p.has("c")) {
        throw ValidationError("rf", "general case needs an rf or the parameter c");
      }
      break;
    case ScenarioCase::twocopy:
      p.integer_at_least("N", 1);
      p.at_most("N", 200);
      break;
  }
}

json rf_to_json(const RFSpec& rf) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RFSpec::Coherent>) {
          return {{"kind", "coherent"}, {"mean_photon", k.mean_photon}};
        } else if constexpr (std::is_same_v<K, RFSpec::SpinCoherent>) {
          return {{"kind", "spin_coherent"}, {"M", k.M}};
        } else if constexpr (std::is_same_v<K, RFSpec::Sine>) {
          return {{"kind", "sine"}, {"N", k.N}};
        } else if constexpr (std::is_same_v<K, RFSpec::GaussianGrid>) {
          return {{"kind", "gaussian_grid"},
                  {"sigma_over_step", k.sigma_over_step},
                  {"window_halfwidth", k.window_halfwidth}};
        } else if constexpr (std::is_same_v<K, RFSpec::Custom>) {
          const auto a = k.state.amplitudes();
          return {{"kind", "custom"}, {"offset", k.state.offset()}, {"amplitudes", std::vector<double>(a.begin(), a.end())}};
        } else {
          json comps = json::array();
          for (const auto& c : k.components) comps.push_back(rf_to_json(c));
          return {{"kind", "mixture"}, {"weights", k.weights}, {"components", comps}};
        }
      },
      rf.kind);
}

RFSpec rf_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  const json& kind_j = require(j, "kind", path);
  if (!kind_j.is_string()) throw ValidationError(path + ".kind", "expected a string");
  const auto kind = kind_j.get<std::string>();
  if (kind == "coherent") {
    reject_unknown_keys(j, {"kind", "mean_photon"}, path);
    return RFSpec{RFSpec::Coherent{number_at(j, "mean_photon", path)}};
  }
  if (kind == "spin_coherent") {
    reject_unknown_keys(j, {"kind", "M"}, path);
    return RFSpec{RFSpec::SpinCoherent{integer_at(j, "M", path)}};
  }
  if (kind == "sine") {
    reject_unknown_keys(j, {"kind", "N"}, path);
    return RFSpec{RFSpec::Sine{integer_at(j, "N", path)}};
  }
  if (kind == "gaussian_grid") {
    reject_unknown_keys(j, {"kind", "sigma_over_step", "window_halfwidth"}, path);
    return RFSpec{RFSpec::GaussianGrid{number_at(j, "sigma_over_step", path), integer_at(j, "window_halfwidth", path)}};
  }
  if (kind == "custom") {
    reject_unknown_keys(j, {"kind", "offset", "amplitudes"}, path);
    try {
      return RFSpec{RFSpec::Custom{NumberState::normalized(integer_at(j, "offset", path), numbers_at(j, "amplitudes", path))}};
    } catch (const DomainError& e) {
      throw ValidationError(path + ".amplitudes", e.what());
    }
  }
  if (kind == "mixture") {
    reject_unknown_keys(j, {"kind", "weights", "components"}, path);
    RFSpec::Mixture m;
    m.weights = numbers_at(j, "weights", path);
    const json& comps = require(j, "components", path);
    if (!comps.is_array()) throw ValidationError(path + ".components", "expected an array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
      m.components.push_back(rf_from_json(comps[i], path + ".components[" + std::to_string(i) + "]"));
    }
    return RFSpec{std::move(m)};
  }
  throw ValidationError(path + ".kind", "unknown RF kind '" + kind + "'");
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["version"] = s.version;
  j["name"] = s.name;
  j["case"] = to_string(s.kind);
  j["parameters"] = json::object();
  for (const auto& [k, v] : s.parameters) j["parameters"][k] = v;
  if (s.rf) j["rf"] = rf_to_json(*s.rf);
  j["targets"] = json::array();
  for (const auto& t : s.targets) {
    j["targets"].push_back({{"quantity", t.quantity}, {"expected", t.expected}, {"lower", t.lower}, {"upper", t.upper}});
  }
  j["note"] = s.note;
  return j;
}

Scenario scenario_from_json(const json& j) {
  reject_unknown_keys(j, {"version", "name", "case", "parameters", "rf", "targets", "note"}, "");
  Scenario s;
  const json& version = require(j, "version", "");
  if (!version.is_number_integer() || version.get<std::int64_t>() != 1) {
    throw ValidationError("version", "only version 1 is supported");
  }
  const json& name = require(j, "name", "");
  if (!name.is_string()) throw ValidationError("name", "expected a string");
  s.name = name.get<std::string>();
  const json& kind = require(j, "case", "");
  if (!kind.is_string()) throw ValidationError("case", "expected a string");
  s.kind = scenario_case_from_string(kind.get<std::string>());
  if (const auto it = j.find("parameters"); it != j.end()) {
    if (!it->is_object()) throw ValidationError("parameters", "expected an object");
    for (const auto& [key, value] : it->items()) {
      if (!value.is_number()) throw ValidationError("parameters." + key, "expected a number");
      s.parameters[key] = value.get<double>();
    }
  }
  if (const auto it = j.find("rf"); it != j.end()) s.rf = rf_from_json(*it, "rf");
  if (const auto it = j.find("targets"); it != j.end()) {
    if (!it->is_array()) throw ValidationError("targets", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "targets[" + std::to_string(i) + "]";
      const json& t = (*it)[i];
      reject_unknown_keys(t, {"quantity", "expected", "lower", "upper"}, path);
      const json& q = require(t, "quantity", path);
      if (!q.is_string()) throw ValidationError(path + ".quantity", "expected a string");
      s.targets.push_back({q.get<std::string>(), number_at(t, "expected", path), number_at(t, "lower", path),
                           number_at(t, "upper", path)});
    }
  }
  if (const auto it = j.find("note"); it != j.end()) {
    if (!it->is_string()) throw ValidationError("note", "expected a string");
    s.note = it->get<std::string>();
  }
  validate(s);
  return s;
}

std::string canonical_dump(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open scenario file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path, std::string("malformed JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

std::vector<std::string> builtin_scenario_names() {
  return {"cat", "molecule-1m", "gram-earth", "photon-n10", "spin-n4", "jc-qubit", "general-bound", "sine-scaling",
          "twocopy-n5"};
}

Scenario builtin_scenario(const std::string& name) {
  using namespace constants;
  Scenario s;
  s.name = name;
  if (name == "cat") {
    s.kind = ScenarioCase::spin;
    s.parameters = {{"N", 1e26}, {"exponent", 0.125}, {"m0", kWaterMoleculeMass}};
    s.targets = {{"rf_mass_over_earth", 50.0, 40.0, 60.0}};
    s.note = "spin cat of 1e26 molecules; reference of N^2 spins. N^2 m0 is about 3e26 kg, not 3e25 kg";
  } else if (name == "molecule-1m") {
    s.kind = ScenarioCase::position;
    s.parameters = {{"L", 1.0}, {"m", kWaterMoleculeMass}, {"m0", kWaterMoleculeMass}, {"sigma0", 1e-9}, {"exponent", 1.0}};
    s.targets = {{"rf_mass_ug", 3.0, 1.0, 10.0}};
    s.note = "one water molecule delocalized over 1 m";
  } else if (name == "gram-earth") {
    s.kind = ScenarioCase::position;
    s.parameters = {{"m", 1e-3}, {"m0", kWaterMoleculeMass}, {"sigma0", 1e-9}, {"rf_mass", kEarthMass}, {"exponent", 1.0}};
    s.targets = {{"max_L_um", 1.0, 0.5, 2.0}};
    s.note = "one gram against an Earth-mass reference";
  } else if (name == "photon-n10") {
    s.kind = ScenarioCase::photon;
    s.parameters = {{"N", 10}, {"mean_photon", 100}};
    s.targets = {{"asymptotic", 0.5 * std::exp(-0.125), 0.5 * std::exp(-0.125) - 1e-12, 0.5 * std::exp(-0.125) + 1e-12}};
  } else if (name == "spin-n4") {
    s.kind = ScenarioCase::spin;
    s.parameters = {{"N", 4}, {"M", 100}};
  } else if (name == "jc-qubit") {
    s.kind = ScenarioCase::jc;
    s.parameters = {{"N", 1}, {"mean_photon", 400}};
    s.targets = {{"infidelity_times_mu", 0.2167, 0.2167 * 0.95, 0.2167 * 1.05}};
  } else if (name == "general-bound") {
    s.kind = ScenarioCase::general;
    s.parameters = {{"N", 16}, {"beta", 1.0}};
    s.rf = RFSpec{RFSpec::Coherent{64.0}};
    s.note = "two-branch state (|0> + |N>)/sqrt(2) dephased at sigma = N^beta";
  } else if (name == "sine-scaling") {
    s.kind = ScenarioCase::general;
    s.parameters = {{"N", 64}, {"c", 2.0}};
    s.targets = {{"sine_t", 0.38, 0.3, 0.5}, {"coherent_t", 0.0, 0.0, 0.05}};
  } else if (name == "twocopy-n5") {
    s.kind = ScenarioCase::twocopy;
    s.parameters = {{"N", 5}};
    s.targets = {{"spin_t", 0.25, 0.25 - 1e-9, 0.25 + 1e-9}, {"photon_t_numeric", 0.25, 0.25 - 1e-12, 0.25 + 1e-12}};
  } else {
    throw NotFoundError("no builtin scenario named '" + name + "'");
  }
  validate(s);
  return s;
}

}  // namespace macrocert
