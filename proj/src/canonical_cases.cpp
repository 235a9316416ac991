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

#include "macrocert/canonical_cases.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "macrocert/errors.hpp"
#include "macrocert/number_states.hpp"

namespace macrocert {
namespace {

double shifted_overlap(const NumberState& s, std::int64_t shift) {
  double total = 0.0;
  for (std::int64_t j = s.offset(); j + shift <= s.last(); ++j) total += s[j] * s[j + shift];
  return 0.5 * total;
}

CaseResult finish(double exact, double asymptotic) {
  CaseResult r;
  r.exact = exact;
  r.asymptotic = asymptotic;
  r.relative_gap = std::abs(exact - asymptotic) / std::max(exact, 1e-30);
  return r;
}

double standard_normal(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

CaseResult photon_trace_distance(std::int64_t N, double mean_photon) {
  if (N < 1) throw DomainError("photon_trace_distance: N must be at least 1");
  if (!(mean_photon >= 0.0)) throw DomainError("photon_trace_distance: mean photon number must be >= 0");
  if (mean_photon == 0.0) {
    CaseResult r = finish(0.0, 0.0);
    r.refined = 0.0;
    return r;
  }
  const double n = static_cast<double>(N);
  const double damping = std::exp(-n * n / (8.0 * mean_photon));
  CaseResult r = finish(shifted_overlap(make_coherent_rf(mean_photon), N), 0.5 * damping);
  r.refined = 0.25 * damping * std::erfc((n - mean_photon) / std::sqrt(2.0 * mean_photon));
  return r;
}

CaseResult spin_trace_distance(std::int64_t N, std::int64_t M) {
  if (N < 1) throw DomainError("spin_trace_distance: N must be at least 1");
  if (M < 0) throw DomainError("spin_trace_distance: M must be non-negative");
  if (M == 0) {
    CaseResult r = finish(0.0, 0.0);
    r.refined = 0.0;
    return r;
  }
  const double n2 = static_cast<double>(N) * static_cast<double>(N);
  const double m = static_cast<double>(M);
  CaseResult r = finish(shifted_overlap(make_spin_coherent_rf(M), N), 0.5 * std::exp(-n2 / (8.0 * m)));
  r.refined = 0.5 * std::exp(-n2 / (2.0 * m));
  return r;
}

CaseResult position_trace_distance(double L, double m, double m0, double sigma0, double K) {
  if (!(L > 0.0 && m > 0.0 && m0 > 0.0 && sigma0 > 0.0 && K > 0.0)) {
    throw DomainError("position_trace_distance: all parameters must be positive");
  }
  const double ratio = (L / sigma0) * (m / m0);
  const double analytic = 0.5 * std::exp(-ratio * ratio / (8.0 * K));

  // Shift in units of the center-of-mass width sigma0/sqrt(K), with the
  // integration variable centered between the two displaced densities.
  const double delta = ratio / std::sqrt(K);
  const auto integrand = [delta](double v) {
    return std::sqrt(standard_normal(v - 0.5 * delta) * standard_normal(v + 0.5 * delta));
  };
  constexpr int kPanels = 16;
  constexpr double kHalfWidth = 40.0;
  double integral = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double a = -kHalfWidth + 2.0 * kHalfWidth * i / kPanels;
    const double b = -kHalfWidth + 2.0 * kHalfWidth * (i + 1) / kPanels;
    integral += adaptive_simpson(integrand, a, b, 1e-12 / kPanels);
  }
  return finish(0.5 * integral, analytic);
}

BoundedReal rf_size_for_target(CaseKind kind, double x, double t_target) {
  (void)kind;  // every case shares the inversion x^2 / (8 ln(1/(2t)))
  if (!(t_target > 0.0 && t_target < 0.5)) throw DomainError("rf_size_for_target: t_target must lie in (0, 1/2)");
  if (!(x > 0.0)) throw DomainError("rf_size_for_target: size argument must be positive");
  const double log_term = -std::log(2.0 * t_target);
  if (!(log_term > 0.0)) return BoundedReal::infinite();
  const double size = x * x / (8.0 * log_term);
  if (!std::isfinite(size)) return BoundedReal::infinite();
  return BoundedReal::finite(size);
}

double position_particles_for_exponent(double L, double m, double m0, double sigma0, double exponent) {
  if (!(L > 0.0 && m > 0.0 && m0 > 0.0 && sigma0 > 0.0 && exponent > 0.0)) {
    throw DomainError("position_particles_for_exponent: all parameters must be positive");
  }
  const double ratio = (L / sigma0) * (m / m0);
  return ratio * ratio / (8.0 * exponent);
}

double position_max_delocalization(double m, double m0, double sigma0, double K, double exponent) {
  if (!(m > 0.0 && m0 > 0.0 && sigma0 > 0.0 && K > 0.0 && exponent > 0.0)) {
    throw DomainError("position_max_delocalization: all parameters must be positive");
  }
  return sigma0 * (m0 / m) * std::sqrt(8.0 * K * exponent);
}

SpinExponentFit fit_spin_exponent(const std::vector<std::pair<std::int64_t, std::int64_t>>& points) {
  SpinExponentFit fit;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [N, M] : points) {
    const double t = spin_trace_distance(N, M).exact;
    if (!(t > 0.0)) throw NumericError("fit_spin_exponent: trace distance underflowed at N=" + std::to_string(N));
    const double x = 1.0 / static_cast<double>(M);
    const double y = -std::log(2.0 * t) / (static_cast<double>(N) * static_cast<double>(N));
    fit.inverse_M.push_back(x);
    fit.scaled_log.push_back(y);
    sxy += x * y;
    sxx += x * x;
  }
  if (sxx > 0.0) fit.slope = sxy / sxx;
  return fit;
}

}  // namespace macrocert
