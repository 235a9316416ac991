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

// Noisy x-measurement of a spin-N/2 system driven by a coherent laser pulse
// through U = exp(gamma (J+ a - J- a^dag)). U conserves the excitation
// number e = n_photon + m, so the truncated joint space splits into blocks
// of at most N+1 states and every quantity here is real.
//
// Spin basis |m>, m = 0..N, with J_z |m> = (m - N/2) |m>.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace macrocert {

struct SpinOps {
  std::int64_t N = 0;
  Eigen::MatrixXd Jp;  // J+ |m> = sqrt((m+1)(N-m)) |m+1>
  Eigen::MatrixXd Jm;  // transpose of Jp
  Eigen::MatrixXd Jz;

  static SpinOps make(std::int64_t N);

  Eigen::MatrixXd Jx() const { return 0.5 * (Jp + Jm); }
  /// i J_y, which is real: (J+ - J-)/2.
  Eigen::MatrixXd iJy() const { return 0.5 * (Jp - Jm); }
  Eigen::MatrixXcd Jy() const;
};

/// Coefficients of the second-order Kraus pair in L = (J_z, J+, J-).
struct PerturbationTables {
  Eigen::Matrix3d A;
  Eigen::Vector3d v;          // third entry (2 + pi)/4
  Eigen::Vector3d v_uncorrected;  // third entry (2 + pi)/2, kept for comparison

  static PerturbationTables standard();
};

struct JCModel {
  std::int64_t N = 1;
  double mean_photon = 0.0;
  double gamma = 0.0;
  std::int64_t fock_cutoff = 0;

  /// gamma defaults to pi/(4 alpha); the cutoff to ceil(mu + 12 sqrt(mu) + N).
  /// Throws DomainError for N < 1, mu <= 0, or a cutoff below the default.
  static JCModel make(std::int64_t N, double mean_photon, std::optional<double> gamma = std::nullopt,
                      std::optional<std::int64_t> fock_cutoff = std::nullopt);
  static std::int64_t default_cutoff(std::int64_t N, double mean_photon);
};

struct JCPovm {
  /// Heisenberg-picture elements <alpha| U^T (1 (x) |m><m|) U |alpha>.
  std::vector<Eigen::MatrixXd> elements;
  std::int64_t cutoff_used = 0;
  double completeness_defect = 0.0;  // max |sum_m E_m - 1|
};

/// Exact POVM on the truncated Fock space. The cutoff is doubled up to twice
/// while the completeness defect exceeds 1e-6; SizingError after that.
JCPovm jc_povm_exact(const JCModel& model);

/// R = exp((pi/2) i J_y): the ideal rotation, with R^T J_z R = J_x.
Eigen::MatrixXd ideal_rotation(const SpinOps& ops);

/// Eigenvectors of J_x as columns, ascending eigenvalue (matching m = 0..N).
Eigen::MatrixXd x_basis(const SpinOps& ops);

/// The elements in the noise frame, R E_m R^T.
std::vector<Eigen::MatrixXd> noise_frame(const JCPovm& povm, const SpinOps& ops);

/// (1/(N+1)) sum_m <m_x| E_m |m_x>.
double exact_average_fidelity(const JCModel& model);

/// 1 - ((4 + pi^2)/192) N(N+2)/mu.
double avg_fidelity(std::int64_t N, double mean_photon);

/// The same second-order value assembled from the A and v tables entry by entry.
double avg_fidelity_from_tables(std::int64_t N, double mean_photon, const PerturbationTables& tables);

/// Noise channel applied to a spin projector: tr_RF[U (|alpha><alpha| (x) R^T P_m R) U^T].
Eigen::MatrixXd jc_noisy_projector(const JCModel& model, std::int64_t m);

struct KrausPair {
  Eigen::MatrixXd K0_quadratic;  // K0 = 1 + gamma^2 K0_quadratic
  Eigen::MatrixXd K1_linear;     // K1 = gamma K1_linear

  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> at(double gamma) const;
};

/// K0 = 1 - (2 gamma^2/pi^2) L^dag A L, K1 = -(2 gamma/pi) v . L.
KrausPair kraus_perturbative(std::int64_t N, const PerturbationTables& tables = PerturbationTables::standard());

/// Banded second-order correction; P_m + Delta_m + Delta_m^T approximates
/// jc_noisy_projector. Throws DomainError unless 0 <= m <= N.
Eigen::MatrixXd delta_m(std::int64_t N, std::int64_t m, double mean_photon,
                        const PerturbationTables& tables = PerturbationTables::standard());

Eigen::MatrixXd perturbative_projector(std::int64_t N, std::int64_t m, double mean_photon,
                                       const PerturbationTables& tables = PerturbationTables::standard());

/// Qubit E_0 in the noise frame to order 1/mu:
/// [[1 - (pi-2)^2/(64 mu), -pi/(32 mu)], [-pi/(32 mu), (pi+2)^2/(64 mu)]].
Eigen::Matrix2d qubit_e0_closed_form(double mean_photon);

/// The alternative closed form with pi^2 in every denominator, reported for comparison.
Eigen::Matrix2d qubit_e0_uncorrected(double mean_photon);

}  // namespace macrocert
