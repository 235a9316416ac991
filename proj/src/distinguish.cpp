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

#include "macrocert/distinguish.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "macrocert/errors.hpp"

namespace macrocert {
namespace {

double chernoff_sum(const std::vector<double>& p, const std::vector<double>& q, double s) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0 || q[i] <= 0.0) {
      if (s == 0.0 && p[i] > 0.0) total += q[i];
      if (s == 1.0 && q[i] > 0.0) total += p[i];
      continue;
    }
    total += std::exp(s * std::log(p[i]) + (1.0 - s) * std::log(q[i]));
  }
  return total;
}

}  // namespace

OutcomeDistribution::OutcomeDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw DomainError("outcome probabilities must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("outcome probabilities must sum to 1");
}

double helstrom_success(double t) {
  if (!(t >= 0.0 && t <= 0.5)) throw DomainError("helstrom_success: t must lie in [0, 1/2]");
  return 0.5 + t;
}

ChernoffBracket chernoff_bounds(double t, std::int64_t n) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("chernoff_bounds: t must lie in [0, 1]");
  if (n < 1) throw DomainError("chernoff_bounds: n must be at least 1");
  const double dn = static_cast<double>(n);
  return {std::pow(1.0 - t, dn), std::pow(1.0 - t * t, 0.5 * dn)};
}

BoundedReal classical_chernoff_exponent(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.size() != q.size()) throw DomainError("classical_chernoff_exponent: length mismatch");
  const auto& pv = p.probabilities();
  const auto& qv = q.probabilities();

  // Golden-section search; the objective is convex in s.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = chernoff_sum(pv, qv, x1);
  double f2 = chernoff_sum(pv, qv, x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = chernoff_sum(pv, qv, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = chernoff_sum(pv, qv, x2);
    }
  }
  double best = std::min(f1, f2);
  best = std::min({best, chernoff_sum(pv, qv, 0.0), chernoff_sum(pv, qv, 1.0)});
  if (!(best > 0.0)) return BoundedReal::infinite();
  return BoundedReal::finite(std::max(0.0, -std::log(best)));
}

PhaseInvariantPOVM optimal_photon_povm(std::int64_t N, const NumberState& rf) {
  if (N < 1) throw DomainError("optimal_photon_povm: N must be at least 1");
  PhaseInvariantPOVM povm;
  for (std::int64_t k = rf.offset(); k <= rf.last() + N; ++k) {
    const bool low = rf[k - N] != 0.0;  // |K-N>_RF |N>_S
    const bool high = rf[k] != 0.0;     // |K>_RF |0>_S
    if (!low && !high) continue;
    PhaseInvariantPOVM::Sector sec;
    if (low && high) {
      sec.basis = {{k - N, N}, {k, 0}};
      sec.plus = Eigen::MatrixXd::Constant(2, 2, 0.5);
      sec.minus = Eigen::MatrixXd::Identity(2, 2) - sec.plus;
    } else {
      sec.basis = {low ? BasisPair{k - N, N} : BasisPair{k, 0}};
      sec.plus = Eigen::MatrixXd::Ones(1, 1);
      sec.minus = Eigen::MatrixXd::Zero(1, 1);
    }
    povm.sectors.emplace(k, std::move(sec));
  }
  return povm;
}

OutcomeDistribution povm_outcomes(const PhaseInvariantPOVM& povm, const BlockDiagonalState& state) {
  double plus = 0.0;
  double minus = 0.0;
  for (const auto& [label, blk] : state.blocks()) {
    const auto it = povm.sectors.find(label);
    if (it == povm.sectors.end()) throw DomainError("povm_outcomes: sector not covered by the POVM");
    const Eigen::MatrixXd rho = state.weighted_on(label, it->second.basis);
    plus += (it->second.plus * rho).trace();
    minus += (it->second.minus * rho).trace();
  }
  const double total = plus + minus;
  plus = std::clamp(plus / total, 0.0, 1.0);
  return OutcomeDistribution({plus, 1.0 - plus});
}

double povm_success(const PhaseInvariantPOVM& povm, const BlockDiagonalState& a,
                    const BlockDiagonalState& b) {
  const auto pa = povm_outcomes(povm, a).probabilities();
  const auto pb = povm_outcomes(povm, b).probabilities();
  return 0.5 * (pa[0] + pb[1]);
}

BoundedReal repetitions_required(double p_err, double N, double epsilon, double c) {
  if (!(p_err > 0.0 && p_err < 1.0)) throw DomainError("repetitions_required: p_err must lie in (0, 1)");
  if (!(N > 0.0)) throw DomainError("repetitions_required: N must be positive");
  if (!(c > 0.0)) throw DomainError("repetitions_required: c must be positive");
  if (!(epsilon > 0.0)) throw DomainError("repetitions_required: epsilon must be positive");
  const double exponent = std::pow(N, epsilon) / (8.0 * c);
  if (!(exponent <= 700.0)) return BoundedReal::infinite();
  return BoundedReal::finite(2.0 * std::log(1.0 / p_err) * std::exp(exponent));
}

BoundedReal chernoff_repetitions(double t, double p_err) {
  if (!(p_err > 0.0 && p_err < 1.0)) throw DomainError("chernoff_repetitions: p_err must lie in (0, 1)");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("chernoff_repetitions: t must lie in [0, 1]");
  if (t == 1.0) return BoundedReal::finite(1.0);
  const double denom = std::log1p(-t);
  if (denom == 0.0) return BoundedReal::infinite();
  const double n = std::log(p_err) / denom;
  if (!(n < 1e300)) return BoundedReal::infinite();
  return BoundedReal::finite(std::max(1.0, std::ceil(n - 1e-9)));
}

}  // namespace macrocert
