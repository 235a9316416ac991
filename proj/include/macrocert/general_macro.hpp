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

// Gaussian-dephased counterparts of general macroscopic states and the
// variance bound on how well a reference frame can tell them apart.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "macrocert/number_states.hpp"

namespace macrocert {

/// rho(n, m) = psi_n psi_m exp(-(n - m)^2 / (2 sigma^2)) on the window of
/// `base`. sigma = +inf gives the pure projector.
struct DephasedState {
  NumberState base;
  double sigma = 0.0;
  Eigen::MatrixXd matrix;
};

/// Throws DomainError unless sigma > 0.
DephasedState gaussian_dephase(const NumberState& state, double sigma);

struct GeneralDistance {
  double exact = 0.0;            // mixed RF handled on the merged sector blocks
  double convexity_bound = 0.0;  // sum_i q_i t^(i) over RF components
};

/// Twirled trace distance between |psi><psi| and its dephased version with
/// width sigma (sigma = 0 means full dephasing, +inf none).
GeneralDistance twirled_trace_distance_general(const NumberState& state, const RFSpec& rf, double sigma);

struct BoundReport {
  double bound = 0.0;
  std::optional<double> exact;  // present when a system state is supplied
  double beta = 0.0;
  double rf_variance_avg = 0.0;
};

/// bound = sqrt(sum_i q_i Var_i / N^(2 beta)). With a state, `exact` is the
/// twirled distance at sigma = N^beta.
BoundReport variance_bound(const RFSpec& rf, double beta, std::int64_t N,
                           const std::optional<NumberState>& state = std::nullopt);

struct SectorFidelityCheck {
  std::int64_t label = 0;
  double weight = 0.0;
  double infidelity = 0.0;     // 1 - <Psi_K| rho_K |Psi_K>
  double variance_term = 0.0;  // Var(lambda_K^2) / sigma^2
};

/// Per-sector infidelity between the twirled pure state and the twirled
/// dephased state, each against the same pure RF, with its variance bound.
std::vector<SectorFidelityCheck> sector_fidelity_chain(const NumberState& state, const NumberState& rf,
                                                       double sigma);

struct ScalingPoint {
  std::int64_t N = 0;
  double rf_mean = 0.0;
  double t = 0.0;
};

/// Two-branch (|0> + |N>)/sqrt(2) against a sine RF whose mean excitation is
/// round(c N), i.e. top level 2 round(c N).
std::vector<ScalingPoint> sine_scaling_curve(double c, const std::vector<std::int64_t>& N_list);

/// Same with a coherent RF of mean c N.
std::vector<ScalingPoint> coherent_contrast_curve(double c, const std::vector<std::int64_t>& N_list);

struct RandomInstance {
  NumberState state;
  RFSpec rf;
  double beta = 0.0;
  std::int64_t N = 0;  // branch spread entering sigma = N^beta
};

/// Amplitudes are square roots of a symmetric Dirichlet draw; the RF is a
/// coherent, spin-coherent, sine or two-component mixture. The product of
/// state and RF window sizes stays at or below `max_joint_dimension`.
RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_joint_dimension = 2048);

}  // namespace macrocert
