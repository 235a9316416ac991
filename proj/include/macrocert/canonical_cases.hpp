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

// Closed forms for the three headline cases. Each exact value is the
// overlap sum of the reference-frame distribution with itself shifted by
// the branch separation; the asymptotic value is the Gaussian limit.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "macrocert/distinguish.hpp"

namespace macrocert {

struct CaseResult {
  double exact = 0.0;
  double asymptotic = 0.0;
  double relative_gap = 0.0;  // |exact - asymptotic| / max(exact, 1e-30)
  /// Photon: erfc-corrected form. Spin: Gaussian with the binomial variance.
  std::optional<double> refined;
};

/// t = (1/2) sum_j sqrt(q_j q_{j+N}) for Poisson q of mean `mean_photon`.
CaseResult photon_trace_distance(std::int64_t N, double mean_photon);

/// Same overlap with binomial q over M spins. `asymptotic` is
/// (1/2) exp(-N^2/(8M)); `refined` is (1/2) exp(-N^2/(2M)), which follows from
/// the binomial variance M/4.
CaseResult spin_trace_distance(std::int64_t N, std::int64_t M);

/// Delocalized mass m over distance L against a K-particle reference of
/// constituent mass m0 and single-particle width sigma0 (SI units).
/// `asymptotic` is the analytic Gaussian overlap; `exact` integrates
/// (1/2) int sqrt(p(X) p(X + d)) dX numerically.
CaseResult position_trace_distance(double L, double m, double m0, double sigma0, double K);

/// Composite adaptive Simpson on [a, b] to absolute tolerance `tol`.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48);

enum class CaseKind { photon, spin, position };

/// Smallest size (mean photon number, spin count, particle count) whose
/// asymptotic t reaches `t_target`: x^2 / (8 ln(1/(2 t_target))). For the
/// position case x = (L/sigma0)(m/m0). Unbounded as t_target -> 1/2.
BoundedReal rf_size_for_target(CaseKind kind, double x, double t_target);

/// Particle count K needed for exponent (L/sigma0)^2 (m/m0)^2 / (8K) to equal
/// `exponent`.
double position_particles_for_exponent(double L, double m, double m0, double sigma0, double exponent);

/// Largest L keeping that exponent at or below `exponent`.
double position_max_delocalization(double m, double m0, double sigma0, double K, double exponent);

struct SpinExponentFit {
  std::vector<double> inverse_M;
  std::vector<double> scaled_log;  // -ln(2 t_exact) / N^2
  double slope = 0.0;              // least squares through the origin
};

SpinExponentFit fit_spin_exponent(const std::vector<std::pair<std::int64_t, std::int64_t>>& points);

// ---------------------------------------------------------------------------

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth) {
  struct Rec {
    static double step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      return step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace macrocert
