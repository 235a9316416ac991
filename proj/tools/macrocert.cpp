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

// Command-line front end. Every subcommand builds a scenario, runs it and
// prints the report rows as CSV or JSON.
//
// Exit codes: 0 success, 2 invalid input, 3 a self-check target was missed
// or a numeric failure occurred.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "macrocert/distinguish.hpp"
#include "macrocert/errors.hpp"
#include "macrocert/report.hpp"
#include "macrocert/scenario.hpp"

namespace {

using namespace macrocert;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

struct Output {
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 1;
};

void emit(const std::string& text, const Output& o) {
  if (o.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw ValidationError("--out", "cannot open '" + o.out_path + "' for writing");
  f << text;
  if (!f) throw ValidationError("--out", "write to '" + o.out_path + "' failed");
}

int emit_rows(const std::vector<ReportRow>& rows, const Output& o) {
  std::ostringstream text;
  if (o.format == "json") {
    text << nlohmann::json{{"rows", rows_to_json(rows)}}.dump(2) << "\n";
  } else {
    write_rows_csv(text, rows);
  }
  emit(text.str(), o);
  const auto failed = failed_targets(rows);
  for (const auto& r : failed) {
    std::cerr << "target missed: " << r.scenario << "." << r.quantity << " = " << format_real(r.value) << "\n";
  }
  return failed.empty() ? kExitOk : kExitNumeric;
}

// "coherent:64", "spin:100", "sine:128", "gaussian:5:60"
RFSpec parse_rf_shorthand(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  const auto need = [&](std::size_t n) {
    if (parts.size() != n) throw ValidationError("--rf", "expected " + std::to_string(n - 1) + " value(s) after '" + parts[0] + "'");
  };
  try {
    if (!parts.empty() && parts[0] == "coherent") {
      need(2);
      return RFSpec{RFSpec::Coherent{std::stod(parts[1])}};
    }
    if (!parts.empty() && parts[0] == "spin") {
      need(2);
      return RFSpec{RFSpec::SpinCoherent{std::stoll(parts[1])}};
    }
    if (!parts.empty() && parts[0] == "sine") {
      need(2);
      return RFSpec{RFSpec::Sine{std::stoll(parts[1])}};
    }
    if (!parts.empty() && parts[0] == "gaussian") {
      need(3);
      return RFSpec{RFSpec::GaussianGrid{std::stod(parts[1]), std::stoll(parts[2])}};
    }
  } catch (const std::logic_error&) {
    throw ValidationError("--rf", "malformed number in '" + text + "'");
  }
  if (!text.empty() && text.front() == '{') return rf_from_json(nlohmann::json::parse(text), "--rf");
  throw ValidationError("--rf", "unknown reference frame '" + text + "'");
}

// "N=1,2,5", "mean_photon=4:400:12:log", "N=1:20" (integer range)
std::pair<std::string, std::vector<double>> parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationError("--axis", "expected name=values");
  const std::string name = text.substr(0, eq);
  const std::string spec = text.substr(eq + 1);
  std::vector<double> values;
  try {
    if (spec.find(':') != std::string::npos) {
      std::vector<std::string> p;
      std::stringstream ss(spec);
      for (std::string s; std::getline(ss, s, ':');) p.push_back(s);
      const double lo = std::stod(p.at(0));
      const double hi = std::stod(p.at(1));
      if (p.size() == 2) {
        for (double v = lo; v <= hi; v += 1.0) values.push_back(v);
      } else {
        const auto n = std::stoll(p.at(2));
        const bool log = p.size() > 3 && p[3] == "log";
        for (long long i = 0; i < n; ++i) {
          const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
          values.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
        }
      }
    } else if (!spec.empty()) {
      std::stringstream ss(spec);
      for (std::string s; std::getline(ss, s, ',');) values.push_back(std::stod(s));
    }
  } catch (const std::logic_error&) {
    throw ValidationError("--axis", "malformed axis '" + text + "'");
  }
  return {name, values};
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path, std::string("malformed JSON: ") + e.what());
  }
}

Scenario resolve_scenario(const std::string& name_or_path) {
  const auto names = builtin_scenario_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_scenario(name_or_path);
  return load_scenario_file(name_or_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify macroscopic superpositions against finite reference frames"};
  app.require_subcommand(1);
  app.fallthrough();

  Output out;
  std::string config_path;
  app.add_option("--out", out.out_path, "Write the report to this file instead of stdout");
  app.add_option("--format", out.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", out.seed, "Seed for randomized instances");
  app.add_option("--config", config_path, "Scenario JSON (for sweep: sweep JSON) overriding subcommand flags");

  Scenario s;
  s.version = 1;

  double N = 0.0;
  double mu = 0.0;
  double M = 0.0;

  auto* photon = app.add_subcommand("photon", "Two-branch photon state against a coherent reference");
  photon->add_option("-N", N, "Branch separation")->required();
  photon->add_option("--mu", mu, "Mean photon number of the reference")->required();

  auto* spin = app.add_subcommand("spin", "GHZ-type spin state against a spin-coherent reference");
  spin->add_option("-N", N, "Number of system spins")->required();
  auto* spin_m = spin->add_option("-M", M, "Number of reference spins");
  double spin_exponent = 0.0;
  auto* spin_e = spin->add_option("--exponent", spin_exponent, "Target N^2/(8M); solves for M instead");
  double spin_m0 = 0.0;
  auto* spin_mass = spin->add_option("--m0", spin_m0, "Mass per reference spin (kg), for the mass report");
  spin_m->excludes(spin_e);

  auto* position = app.add_subcommand("position", "Delocalized mass against a K-particle position reference");
  double L = 0.0, m = 0.0, m0 = 0.0, sigma0 = 0.0, K = 0.0, rf_mass = 0.0, pos_exponent = 1.0;
  auto* opt_L = position->add_option("-L,--length", L, "Delocalization distance (m)");
  position->add_option("-m,--mass", m, "Delocalized mass (kg)")->required();
  position->add_option("--m0", m0, "Reference particle mass (kg)")->required();
  position->add_option("--sigma0", sigma0, "Reference particle width (m)")->required();
  auto* opt_K = position->add_option("-K,--particles", K, "Reference particle count");
  auto* opt_rf_mass = position->add_option("--rf-mass", rf_mass, "Total reference mass (kg)");
  position->add_option("--exponent", pos_exponent, "Target exponent for the sizing rows");
  opt_K->excludes(opt_rf_mass);

  auto* jc = app.add_subcommand("jc", "Jaynes-Cummings x-measurement of a spin-N/2 system");
  std::int64_t cutoff = 0;
  jc->add_option("-N", N, "Twice the spin")->required();
  jc->add_option("--mu", mu, "Mean photon number of the pulse")->required();
  auto* opt_cutoff = jc->add_option("--cutoff", cutoff, "Fock cutoff (raised to the default minimum if smaller)");

  auto* general = app.add_subcommand("general", "General state against its dephased counterpart");
  std::string rf_text;
  double beta = 1.0, c = 0.0;
  bool random = false;
  general->add_option("-N", N, "Branch spread (sigma = N^beta)")->required();
  auto* opt_rf = general->add_option("--rf", rf_text, "coherent:MU | spin:M | sine:N | gaussian:S:W | JSON");
  general->add_option("--beta", beta, "Dephasing exponent");
  auto* opt_c = general->add_option("-c", c, "Sine versus coherent scaling with mean excitation c N");
  general->add_flag("--random", random, "Use a seeded random state instead of the two-branch state");

  auto* twocopy = app.add_subcommand("twocopy", "Two copies as mutual reference frames");
  twocopy->add_option("-N", N, "Branch separation / spins per copy")->required();

  auto* scenario = app.add_subcommand("scenario", "Run a builtin scenario or a scenario JSON file");
  std::string scenario_name;
  bool print_config = false;
  scenario->add_option("name", scenario_name, "Builtin name or path; 'list' prints the builtins");
  scenario->add_flag("--print-config", print_config, "Print the canonical scenario JSON instead of running it");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  std::string sweep_case;
  std::vector<std::string> sweep_axes;
  std::vector<std::string> sweep_fixed;
  std::string sweep_rf;
  unsigned threads = 0;
  sweep->add_option("--case", sweep_case, "photon | spin | position | jc | general | twocopy");
  sweep->add_option("--axis", sweep_axes, "name=v1,v2,... | name=lo:hi | name=lo:hi:n[:log]");
  sweep->add_option("--set", sweep_fixed, "name=value fixed parameter");
  sweep->add_option("--rf", sweep_rf, "Reference frame for the general case");
  sweep->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

  auto* reps = app.add_subcommand("repetitions", "Repetition counts for given trace distances");
  std::vector<double> t_values;
  double p_err = 0.05;
  reps->add_option("-t", t_values, "Trace distances")->required();
  reps->add_option("-p", p_err, "Target error probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; every malformed command line is a validation failure.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty() && !sweep->parsed()) {
      return emit_rows(run_scenario(load_scenario_file(config_path), out.seed), out);
    }

    if (photon->parsed()) {
      s.name = "photon";
      s.kind = ScenarioCase::photon;
      s.parameters = {{"N", N}, {"mean_photon", mu}};
    } else if (spin->parsed()) {
      s.name = "spin";
      s.kind = ScenarioCase::spin;
      s.parameters = {{"N", N}};
      if (spin_m->count()) s.parameters["M"] = M;
      if (spin_e->count()) s.parameters["exponent"] = spin_exponent;
      if (spin_mass->count()) s.parameters["m0"] = spin_m0;
    } else if (position->parsed()) {
      s.name = "position";
      s.kind = ScenarioCase::position;
      s.parameters = {{"m", m}, {"m0", m0}, {"sigma0", sigma0}, {"exponent", pos_exponent}};
      if (opt_L->count()) s.parameters["L"] = L;
      if (opt_K->count()) s.parameters["K"] = K;
      if (opt_rf_mass->count()) s.parameters["rf_mass"] = rf_mass;
    } else if (jc->parsed()) {
      s.name = "jc";
      s.kind = ScenarioCase::jc;
      s.parameters = {{"N", N}, {"mean_photon", mu}};
      if (opt_cutoff->count()) s.parameters["cutoff"] = static_cast<double>(cutoff);
    } else if (general->parsed()) {
      s.name = "general";
      s.kind = ScenarioCase::general;
      s.parameters = {{"N", N}};
      if (opt_rf->count()) {
        s.rf = parse_rf_shorthand(rf_text);
        s.parameters["beta"] = beta;
      }
      if (opt_c->count()) s.parameters["c"] = c;
      if (random) {
        s.parameters["random"] = 1.0;
        s.parameters["seed"] = static_cast<double>(out.seed);
      }
    } else if (twocopy->parsed()) {
      s.name = "twocopy";
      s.kind = ScenarioCase::twocopy;
      s.parameters = {{"N", N}};
    } else if (scenario->parsed()) {
      if (scenario_name.empty() || scenario_name == "list") {
        std::ostringstream text;
        for (const auto& n : builtin_scenario_names()) text << n << "\n";
        emit(text.str(), out);
        return kExitOk;
      }
      s = resolve_scenario(scenario_name);
      if (print_config) {
        emit(canonical_dump(s), out);
        return kExitOk;
      }
      return emit_rows(run_scenario(s, out.seed), out);
    } else if (sweep->parsed()) {
      SweepConfig cfg;
      if (!config_path.empty()) {
        cfg = sweep_from_json(read_json_file(config_path));
      } else {
        if (sweep_case.empty()) throw ValidationError("--case", "required without --config");
        cfg.base.name = "sweep";
        cfg.base.kind = scenario_case_from_string(sweep_case, "--case");
        if (!sweep_rf.empty()) cfg.base.rf = parse_rf_shorthand(sweep_rf);
      }
      for (const auto& f : sweep_fixed) {
        auto [name, values] = parse_axis(f);
        if (values.size() != 1) throw ValidationError("--set", "expected exactly one value for '" + name + "'");
        cfg.base.parameters[name] = values.front();
      }
      for (const auto& a : sweep_axes) {
        auto [name, values] = parse_axis(a);
        cfg.grid[name] = std::move(values);
      }
      if (out.out_path.empty()) {
        run_sweep(cfg, std::cout, threads, out.seed);
      } else {
        run_sweep(cfg, out.out_path, threads, out.seed);
      }
      return kExitOk;
    } else if (reps->parsed()) {
      return emit_rows(emit_repetition_table(t_values, p_err), out);
    }
    return emit_rows(run_scenario(s, out.seed), out);
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const SizingError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NotFoundError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}
