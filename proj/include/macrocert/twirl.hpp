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

// U(1) twirling of system (x) reference-frame states into superselection
// sectors of the conserved total K = rf_index + sys_index. The same code
// serves phase (photon number), direction (shifted S_Z) and discretized
// center-of-mass twirls.

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "macrocert/number_states.hpp"

namespace macrocert {

struct BasisPair {
  std::int64_t rf_index = 0;
  std::int64_t sys_index = 0;
  auto operator<=>(const BasisPair&) const = default;
};

/// One sector K of a twirled state: weight P_K and the unit-trace sector
/// matrix on `basis` (sorted by (rf_index, sys_index)).
struct SectorBlock {
  std::int64_t label = 0;
  std::vector<BasisPair> basis;
  double weight = 0.0;
  Eigen::MatrixXd matrix;
};

/// Direct sum of sector blocks. Blocks with weight below 1e-15 are dropped
/// on construction and the remaining weights renormalized.
class BlockDiagonalState {
 public:
  BlockDiagonalState() = default;
  explicit BlockDiagonalState(std::map<std::int64_t, SectorBlock> blocks);

  const std::map<std::int64_t, SectorBlock>& blocks() const { return blocks_; }
  bool contains(std::int64_t label) const { return blocks_.contains(label); }
  /// Throws NotFoundError for a missing sector.
  const SectorBlock& block(std::int64_t label) const;

  /// P_K * matrix_K expressed on `basis`; basis elements the block does not
  /// carry get zero rows and columns.
  Eigen::MatrixXd weighted_on(std::int64_t label, const std::vector<BasisPair>& basis) const;

 private:
  std::map<std::int64_t, SectorBlock> blocks_;
};

/// System density matrix restricted to a list of quantum numbers.
struct SupportDensity {
  std::vector<std::int64_t> support;  // ascending
  Eigen::MatrixXd rho;                // rho(a, b) = <support[a]| rho |support[b]>
};

SupportDensity density_of(const NumberState& state);
SupportDensity density_of(const MixtureEnsemble& ensemble);

/// Twirl of rho_sys (x) rho_rf: sector K keeps rho_sys(n, m) R_K(n, m) with
/// R_K(n, m) = sum_i q_i r^(i)_{K-n} r^(i)_{K-m}.
BlockDiagonalState twirl_density_joint(const SupportDensity& sys, const MixtureEnsemble& rf);

/// Pure system and pure RF: rank-one sectors with amplitudes
/// psi_{K-n} r_n / sqrt(P_K).
BlockDiagonalState twirl_pure_joint(const NumberState& sys, const NumberState& rf);

/// Convex system ensemble with a pure RF, by linearity of the twirl.
BlockDiagonalState twirl_mixture_joint(const MixtureEnsemble& sys, const NumberState& rf);

/// Weighted merge sum_i w_i state_i, aligning sector bases by (rf, sys).
BlockDiagonalState merge_weighted(const std::vector<std::pair<double, BlockDiagonalState>>& parts);

/// (1/2) sum_K || P^a_K M^a_K - P^b_K M^b_K ||_1 over the union of sectors.
double trace_distance_blocks(const BlockDiagonalState& a, const BlockDiagonalState& b);

/// Eigenvalues of sector K's matrix, descending. Throws NotFoundError.
std::vector<double> block_spectrum(const BlockDiagonalState& state, std::int64_t label);

}  // namespace macrocert
