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

// Two-hypothesis discrimination: Helstrom success, Chernoff brackets, the
// classical Chernoff exponent of a fixed measurement, the phase-invariant
// photon POVM and repetition counts.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "macrocert/number_states.hpp"
#include "macrocert/twirl.hpp"

namespace macrocert {

/// A real that may be flagged as +infinity instead of carrying one.
struct BoundedReal {
  double value = 0.0;
  bool unbounded = false;

  static BoundedReal finite(double v) { return {v, false}; }
  static BoundedReal infinite() { return {0.0, true}; }
};

class OutcomeDistribution {
 public:
  /// Throws DomainError on negative entries or a sum away from 1 by more than 1e-12.
  explicit OutcomeDistribution(std::vector<double> probabilities);

  const std::vector<double>& probabilities() const { return p_; }
  std::size_t size() const { return p_.size(); }

 private:
  std::vector<double> p_;
};

/// Two-outcome measurement that is block diagonal in the sectors of a
/// twirled state. Outcome 0 ("plus") votes for the superposition.
struct PhaseInvariantPOVM {
  struct Sector {
    std::vector<BasisPair> basis;
    Eigen::MatrixXd plus;
    Eigen::MatrixXd minus;
  };
  std::map<std::int64_t, Sector> sectors;
};

/// 1/2 + t. Throws DomainError unless 0 <= t <= 1/2.
/// 1/2 + t, the success figure quoted in reports. Requires t in [0, 1/2].
double helstrom_success(double t);

struct ChernoffBracket {
  double lower = 0.0;  // (1 - t)^n
  double upper = 0.0;  // (1 - t^2)^(n/2)
};

/// Throws DomainError unless 0 <= t <= 1 and n >= 1.
ChernoffBracket chernoff_bounds(double t, std::int64_t n);

/// xi = -log min_{0<=s<=1} sum_i p_i^s q_i^(1-s). Terms with p_i = 0 (or
/// q_i = 0) are dropped for every s, the s -> 0+ (s -> 1-) limit. Disjoint
/// supports give an unbounded exponent.
BoundedReal classical_chernoff_exponent(const OutcomeDistribution& p, const OutcomeDistribution& q);

/// Projectors onto (|K>|0> +- |K-N>|N>)/sqrt(2) in every sector reachable
/// by the two-branch state (|0> + |N>)/sqrt(2) and `rf`. Sectors holding a
/// single basis vector get plus = 1, minus = 0.
PhaseInvariantPOVM optimal_photon_povm(std::int64_t N, const NumberState& rf);

/// Outcome distribution (plus, minus) of the POVM on a twirled state.
/// Throws DomainError if a populated sector is not covered by the POVM.
OutcomeDistribution povm_outcomes(const PhaseInvariantPOVM& povm, const BlockDiagonalState& state);

/// Equal-prior success probability when "plus" is guessed as `a`.
/// Equal-prior success 1/2 (p_a(+) + p_b(-)). For the optimal POVM this is
/// 1/2 + t/2, the Helstrom limit for the trace distance t.
double povm_success(const PhaseInvariantPOVM& povm, const BlockDiagonalState& a,
                    const BlockDiagonalState& b);

/// 2 log(1/p_err) exp(N^eps / (8c)), natural log. Unbounded once the
/// exponent exceeds 700.
BoundedReal repetitions_required(double p_err, double N, double epsilon, double c);

/// Smallest n with (1 - t)^n <= p_err. Unbounded for t = 0.
BoundedReal chernoff_repetitions(double t, double p_err);

}  // namespace macrocert
