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

// Two copies of a macroscopic superposition serving as each other's
// reference frame: the photon-number case, the spin case resolved by total
// angular momentum, and rotation-invariant states of four qubits.

#include <cstdint>
#include <vector>

namespace macrocert {

/// Exactly 1/4 for every N >= 1.
double photon_two_copy_trace_distance(std::int64_t N);

/// Phase twirl of |Psi>|Psi> against Psi (x) Psi, one copy as the frame of
/// the other, with |Psi> = (|0> + |N>)/sqrt(2).
double photon_two_copy_numeric(std::int64_t N);

struct SectorProbability {
  std::int64_t two_J = 0;
  double delta_p = 0.0;
};

/// Difference of total-spin-J probabilities between |Psi>|Psi> and Psi (x) Psi
/// for 2N qubits, evaluated in log space. Throws DomainError unless 0 <= J <= N.
double spin_two_copy_delta_pj(std::int64_t N, std::int64_t J);

std::vector<SectorProbability> spin_two_copy_sectors(std::int64_t N);

/// (1/2) sum_J |Delta P_J| with compensated summation.
double spin_two_copy_trace_distance(std::int64_t N);

/// tr(Pi_J Delta) by diagonalizing total J^2 on 2N qubits. SizingError for 2N > 8.
std::vector<SectorProbability> brute_force_spin_two_copy(std::int64_t N);

/// Largest entry left after removing all coherence between different total
/// S_Z values from the single-copy cross terms Delta_1 + Delta_2.
double single_copy_terms_after_sz_dephasing(std::int64_t N);

struct RelativeDofReport {
  double norm_heart = 0.0;
  double norm_diamond = 0.0;
  double overlap = 0.0;
  double diamond_norm_with_half = 0.0;  // norm of the pairing sum scaled by 1/sqrt(2)
  double max_deviation = 0.0;  // max over samples and both states
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Checks that the two four-qubit J = 0 states, the singlet pairing (12)(34)
/// and the normalized sum of pairings (13)(24) + (14)(23), are orthonormal and
/// invariant under U^{(x)4} for Haar-random single-qubit U.
RelativeDofReport relative_dof_invariance_check(std::int64_t samples, std::uint64_t seed = 1);

}  // namespace macrocert
