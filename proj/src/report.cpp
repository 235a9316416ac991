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

#include "macrocert/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "macrocert/canonical_cases.hpp"
#include "macrocert/constants.hpp"
#include "macrocert/distinguish.hpp"
#include "macrocert/errors.hpp"
#include "macrocert/general_macro.hpp"
#include "macrocert/jc_measurement.hpp"
#include "macrocert/two_copy.hpp"

namespace macrocert {
namespace {

using nlohmann::json;

class RowSink {
 public:
  explicit RowSink(std::string scenario) : scenario_(std::move(scenario)) {}

  void add(const std::string& quantity, double value, const std::string& note = "") {
    ReportRow r;
    r.scenario = scenario_;
    r.quantity = quantity;
    r.value = value;
    r.note = note;
    rows_.push_back(std::move(r));
  }

  void add(const std::string& quantity, const BoundedReal& value, const std::string& note = "") {
    add(quantity, value.unbounded ? 0.0 : value.value, note);
    rows_.back().unbounded = value.unbounded;
  }

  std::vector<ReportRow> take() { return std::move(rows_); }

 private:
  std::string scenario_;
  std::vector<ReportRow> rows_;
};

std::int64_t as_int(double v) { return static_cast<std::int64_t>(std::llround(v)); }

double param_or(const Scenario& s, const std::string& key, double fallback) {
  const auto it = s.parameters.find(key);
  return it == s.parameters.end() ? fallback : it->second;
}

void add_case_result(RowSink& sink, const CaseResult& r, const std::string& refined_name) {
  sink.add("exact", r.exact);
  sink.add("asymptotic", r.asymptotic);
  sink.add("relative_gap", r.relative_gap);
  if (r.refined) sink.add(refined_name, *r.refined);
}

void run_photon(const Scenario& s, RowSink& sink) {
  const CaseResult r = photon_trace_distance(as_int(s.parameters.at("N")), s.parameters.at("mean_photon"));
  add_case_result(sink, r, "erfc_form");
  sink.add("success_probability", helstrom_success(r.exact));
}

void run_spin(const Scenario& s, RowSink& sink) {
  const double N = s.parameters.at("N");
  if (s.parameters.contains("M")) {
    const CaseResult r = spin_trace_distance(as_int(N), as_int(s.parameters.at("M")));
    add_case_result(sink, r, "gaussian_form");
    sink.add("success_probability", helstrom_success(r.exact));
    return;
  }
  const double exponent = s.parameters.at("exponent");
  const double spins = N * N / (8.0 * exponent);
  sink.add("rf_spins", spins);
  sink.add("asymptotic", 0.5 * std::exp(-exponent));
  if (s.parameters.contains("m0")) {
    const double mass = spins * s.parameters.at("m0");
    sink.add("rf_mass_kg", mass);
    sink.add("rf_mass_over_earth", mass / constants::kEarthMass);
  }
}

void run_position(const Scenario& s, RowSink& sink) {
  const double m = s.parameters.at("m");
  const double m0 = s.parameters.at("m0");
  const double sigma0 = s.parameters.at("sigma0");
  const double exponent = param_or(s, "exponent", 1.0);
  std::optional<double> K;
  if (s.parameters.contains("K")) K = s.parameters.at("K");
  if (s.parameters.contains("rf_mass")) K = s.parameters.at("rf_mass") / m0;
  const std::optional<double> L = s.parameters.contains("L") ? std::optional(s.parameters.at("L")) : std::nullopt;

  if (L && K) {
    const CaseResult r = position_trace_distance(*L, m, m0, sigma0, *K);
    add_case_result(sink, r, "refined");
  } else if (L) {
    const double particles = position_particles_for_exponent(*L, m, m0, sigma0, exponent);
    sink.add("K_required", particles);
    sink.add("rf_mass_kg", particles * m0);
    sink.add("rf_mass_ug", particles * m0 / constants::kMicrogram);
  } else {
    const double max_l = position_max_delocalization(m, m0, sigma0, *K, exponent);
    sink.add("max_L_m", max_l);
    sink.add("max_L_um", max_l / constants::kMicrometer);
  }
}

void run_jc(const Scenario& s, RowSink& sink) {
  const std::int64_t N = as_int(s.parameters.at("N"));
  const double mu = s.parameters.at("mean_photon");
  std::optional<std::int64_t> cutoff;
  if (s.parameters.contains("cutoff")) {
    cutoff = std::max(as_int(s.parameters.at("cutoff")), JCModel::default_cutoff(N, mu));
  }
  const JCModel model = JCModel::make(N, mu, std::nullopt, cutoff);
  const JCPovm povm = jc_povm_exact(model);
  const SpinOps ops = SpinOps::make(N);
  const Eigen::MatrixXd X = x_basis(ops);
  double f = 0.0;
  for (std::int64_t m = 0; m <= N; ++m) {
    const auto x = X.col(static_cast<Eigen::Index>(m));
    f += x.dot(povm.elements[static_cast<std::size_t>(m)] * x);
  }
  f /= static_cast<double>(N + 1);
  sink.add("exact_fidelity", f);
  sink.add("closed_form_fidelity", avg_fidelity(N, mu));
  sink.add("infidelity_times_mu", (1.0 - f) * mu);
  sink.add("completeness_defect", povm.completeness_defect);
  sink.add("cutoff_used", static_cast<double>(povm.cutoff_used));
}

void run_general(const Scenario& s, RowSink& sink, std::uint64_t seed) {
  const std::int64_t N = as_int(s.parameters.at("N"));
  if (s.rf) {
    const double beta = s.parameters.at("beta");
    const double sigma = std::pow(static_cast<double>(N), beta);
    std::optional<NumberState> state;
    if (param_or(s, "random", 0.0) != 0.0) {
      std::mt19937_64 rng(s.parameters.contains("seed") ? static_cast<std::uint64_t>(s.parameters.at("seed")) : seed);
      state = random_instance(rng, max_state_dimension()).state;
    } else {
      state = make_two_branch(0, N).superposition;
    }
    const BoundReport bound = variance_bound(*s.rf, beta, N, state);
    const GeneralDistance d = twirled_trace_distance_general(*state, *s.rf, sigma);
    sink.add("exact", d.exact);
    sink.add("bound", bound.bound);
    sink.add("convexity_bound", d.convexity_bound);
    sink.add("rf_variance_avg", bound.rf_variance_avg);
    sink.add("sigma", sigma);
  }
  if (s.parameters.contains("c")) {
    const double c = s.parameters.at("c");
    const auto sine = sine_scaling_curve(c, {N}).front();
    const auto coherent = coherent_contrast_curve(c, {N}).front();
    sink.add("rf_mean", sine.rf_mean);
    sink.add("sine_t", sine.t);
    sink.add("coherent_t", coherent.t);
  }
}

void run_twocopy(const Scenario& s, RowSink& sink) {
  const std::int64_t N = as_int(s.parameters.at("N"));
  sink.add("photon_t", photon_two_copy_trace_distance(N));
  sink.add("photon_t_numeric", photon_two_copy_numeric(N));
  sink.add("spin_t", spin_two_copy_trace_distance(N));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::size_t grid_points(const ParameterGrid& grid) {
  if (grid.empty()) return 1;
  double total = 1.0;
  for (const auto& [k, v] : grid) total *= static_cast<double>(v.size());
  if (total > 1e6) throw DomainError("run_sweep: grid exceeds 1e6 points");
  return static_cast<std::size_t>(total);
}

}  // namespace

std::vector<ReportRow> run_scenario(const Scenario& s, std::uint64_t seed) {
  validate(s);
  RowSink sink(s.name);
  switch (s.kind) {
    case ScenarioCase::photon: run_photon(s, sink); break;
    case ScenarioCase::spin: run_spin(s, sink); break;
    case ScenarioCase::position: run_position(s, sink); break;
    case ScenarioCase::jc: run_jc(s, sink); break;
    case ScenarioCase::general: run_general(s, sink, seed); break;
    case ScenarioCase::twocopy: run_twocopy(s, sink); break;
  }
  std::vector<ReportRow> rows = sink.take();
  if (!s.note.empty() && !rows.empty()) rows.front().note = s.note;
  for (std::size_t i = 0; i < s.targets.size(); ++i) {
    const auto& t = s.targets[i];
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ReportRow& r) { return r.quantity == t.quantity; });
    if (it == rows.end()) {
      throw ValidationError("targets[" + std::to_string(i) + "].quantity", "'" + t.quantity + "' is not produced by this case");
    }
    it->expected = t.expected;
    it->deviation = t.expected != 0.0 ? std::abs(it->value - t.expected) / std::abs(t.expected) : std::abs(it->value);
    it->within_target = !it->unbounded && it->value >= t.lower && it->value <= t.upper;
  }
  return rows;
}

std::vector<ReportRow> failed_targets(const std::vector<ReportRow>& rows) {
  std::vector<ReportRow> out;
  for (const auto& r : rows) {
    if (!r.within_target) out.push_back(r);
  }
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "scenario,quantity,value,unbounded,expected,deviation,note\r\n";
  for (const auto& r : rows) {
    out << csv_field(r.scenario) << ',' << csv_field(r.quantity) << ',' << (r.unbounded ? "" : format_real(r.value))
        << ',' << (r.unbounded ? "true" : "false") << ',' << (r.expected ? format_real(*r.expected) : "") << ','
        << (r.deviation ? format_real(*r.deviation) : "") << ',' << csv_field(r.note) << "\r\n";
  }
}

json rows_to_json(const std::vector<ReportRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json j;
    j["scenario"] = r.scenario;
    j["quantity"] = r.quantity;
    j["value"] = r.unbounded ? json(nullptr) : json(r.value);
    j["unbounded"] = r.unbounded;
    j["expected"] = r.expected ? json(*r.expected) : json(nullptr);
    j["deviation"] = r.deviation ? json(*r.deviation) : json(nullptr);
    j["note"] = r.note;
    j["within_target"] = r.within_target;
    out.push_back(std::move(j));
  }
  return out;
}

SweepConfig sweep_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("", "expected an object");
  json scenario_part = j;
  SweepConfig cfg;
  if (const auto it = j.find("grid"); it != j.end()) {
    if (!it->is_object()) throw ValidationError("grid", "expected an object");
    for (const auto& [axis, values] : it->items()) {
      if (!values.is_array()) throw ValidationError("grid." + axis, "expected an array");
      std::vector<double> vs;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i].is_number()) throw ValidationError("grid." + axis + "[" + std::to_string(i) + "]", "expected a number");
        vs.push_back(values[i].get<double>());
      }
      cfg.grid[axis] = std::move(vs);
    }
    scenario_part.erase("grid");
  }
  // The base need not be runnable on its own; axes fill in parameters.
  Scenario base;
  const auto version = scenario_part.value("version", json());
  if (!version.is_number_integer() || version.get<std::int64_t>() != 1) {
    throw ValidationError("version", "only version 1 is supported");
  }
  for (const auto& [key, value] : scenario_part.items()) {
    if (key != "version" && key != "name" && key != "case" && key != "parameters" && key != "rf") {
      throw ValidationError(key, "unknown key");
    }
  }
  base.name = scenario_part.value("name", std::string("sweep"));
  if (!scenario_part.contains("case") || !scenario_part["case"].is_string()) {
    throw ValidationError("case", "missing required key");
  }
  base.kind = scenario_case_from_string(scenario_part["case"].get<std::string>());
  if (const auto it = scenario_part.find("parameters"); it != scenario_part.end()) {
    if (!it->is_object()) throw ValidationError("parameters", "expected an object");
    for (const auto& [key, value] : it->items()) {
      if (!value.is_number()) throw ValidationError("parameters." + key, "expected a number");
      base.parameters[key] = value.get<double>();
    }
  }
  if (const auto it = scenario_part.find("rf"); it != scenario_part.end()) base.rf = rf_from_json(*it, "rf");
  const auto& allowed = allowed_parameters(base.kind);
  for (const auto& [axis, values] : cfg.grid) {
    if (std::find(allowed.begin(), allowed.end(), axis) == allowed.end()) {
      throw ValidationError("grid." + axis, "not a parameter of case " + to_string(base.kind));
    }
  }
  cfg.base = std::move(base);
  return cfg;
}

const std::vector<std::string>& sweep_columns(ScenarioCase c) {
  static const std::map<ScenarioCase, std::vector<std::string>> table = {
      {ScenarioCase::photon, {"exact", "asymptotic", "relative_gap", "erfc_form", "success_probability"}},
      {ScenarioCase::spin,
       {"exact", "asymptotic", "relative_gap", "gaussian_form", "success_probability", "rf_spins", "rf_mass_kg",
        "rf_mass_over_earth"}},
      {ScenarioCase::position,
       {"exact", "asymptotic", "relative_gap", "K_required", "rf_mass_kg", "rf_mass_ug", "max_L_m", "max_L_um"}},
      {ScenarioCase::jc,
       {"exact_fidelity", "closed_form_fidelity", "infidelity_times_mu", "completeness_defect", "cutoff_used"}},
      {ScenarioCase::general,
       {"exact", "bound", "convexity_bound", "rf_variance_avg", "sigma", "rf_mean", "sine_t", "coherent_t"}},
      {ScenarioCase::twocopy, {"photon_t", "photon_t_numeric", "spin_t"}},
  };
  return table.at(c);
}

void run_sweep(const SweepConfig& config, std::ostream& out, unsigned threads, std::uint64_t seed) {
  const auto& columns = sweep_columns(config.base.kind);
  std::vector<std::string> axes;
  for (const auto& [axis, values] : config.grid) axes.push_back(axis);

  for (std::size_t i = 0; i < axes.size(); ++i) out << (i ? "," : "") << csv_field(axes[i]);
  for (std::size_t i = 0; i < columns.size(); ++i) out << (axes.empty() && i == 0 ? "" : ",") << csv_field(columns[i]);
  out << "\r\n";

  for (const auto& [axis, values] : config.grid) {
    if (values.empty()) return;
  }
  const std::size_t n_points = grid_points(config.grid);

  std::vector<std::string> lines(n_points);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= n_points) return;
      try {
        Scenario s = config.base;
        std::string line;
        std::size_t rem = idx;
        std::vector<double> coords(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
          const auto& values = config.grid.at(axes[a]);
          coords[a] = values[rem % values.size()];
          rem /= values.size();
        }
        for (std::size_t a = 0; a < axes.size(); ++a) {
          s.parameters[axes[a]] = coords[a];
          line += (a ? "," : "") + format_real(coords[a]);
        }
        const auto rows = run_scenario(s, seed);
        for (std::size_t c = 0; c < columns.size(); ++c) {
          if (!(axes.empty() && c == 0)) line += ",";
          for (const auto& r : rows) {
            if (r.quantity == columns[c]) {
              line += r.unbounded ? "unbounded" : format_real(r.value);
              break;
            }
          }
        }
        lines[idx] = std::move(line);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_points);
      }
    }
  };

  unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_points));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  for (const auto& line : lines) out << line << "\r\n";
}

void run_sweep(const SweepConfig& config, const std::string& path, unsigned threads, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("out", "cannot open '" + path + "' for writing");
  run_sweep(config, out, threads, seed);
  if (!out) throw ValidationError("out", "write to '" + path + "' failed");
}

std::vector<ReportRow> emit_repetition_table(const std::vector<double>& t_values, double p_err) {
  if (!(p_err > 0.0 && p_err < 1.0)) throw DomainError("emit_repetition_table: p_err must lie in (0, 1)");
  RowSink sink("repetitions");
  for (double t : t_values) {
    const std::string tag = "[t=" + format_real(t) + "]";
    sink.add("chernoff_n" + tag, chernoff_repetitions(t, p_err), "smallest n with (1-t)^n <= p");
    if (t > 0.0) {
      sink.add("small_t_estimate" + tag, std::log(1.0 / p_err) / t, "ln(1/p)/t");
    } else {
      sink.add("small_t_estimate" + tag, BoundedReal::infinite(), "ln(1/p)/t");
    }
  }
  return sink.take();
}

}  // namespace macrocert
