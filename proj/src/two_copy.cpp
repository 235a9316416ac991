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

#include "macrocert/two_copy.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "macrocert/errors.hpp"
#include "macrocert/number_states.hpp"
#include "macrocert/twirl.hpp"

namespace macrocert {
namespace {

using cplx = std::complex<double>;

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log (2k - 1)!! = log (2k)! - k log 2 - log k!, with (-1)!! = 1.
double log_double_factorial_odd(double k) {
  return std::lgamma(2.0 * k + 1.0) - k * std::numbers::ln2 - std::lgamma(k + 1.0);
}

// Qubit q is bit (n_qubits - 1 - q); bit value 0 is spin up.
int bit_of(std::uint32_t state, int q, int n_qubits) {
  return static_cast<int>((state >> (n_qubits - 1 - q)) & 1u);
}

Eigen::MatrixXd total_spin_squared(int n_qubits) {
  const auto dim = static_cast<Eigen::Index>(1u << n_qubits);
  Eigen::MatrixXd jz = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto st = static_cast<std::uint32_t>(s);
    double z = 0.0;
    for (int q = 0; q < n_qubits; ++q) {
      z += bit_of(st, q, n_qubits) == 0 ? 0.5 : -0.5;
      if (bit_of(st, q, n_qubits) == 1) {
        const std::uint32_t up = st & ~(1u << (n_qubits - 1 - q));
        jp(up, s) += 1.0;
      }
    }
    jz(s, s) = z;
  }
  const Eigen::MatrixXd jm = jp.transpose();
  return jz * jz + 0.5 * (jp * jm + jm * jp);
}

Eigen::VectorXd branch_pair_state(int n) {
  // (|up^n> + |down^n>)/sqrt(2) on n qubits.
  const auto dim = static_cast<Eigen::Index>(1u << n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(0) = std::sqrt(0.5);
  v(dim - 1) = std::sqrt(0.5);
  return v;
}

Eigen::MatrixXd branch_mixture(int n) {
  const auto dim = static_cast<Eigen::Index>(1u << n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  m(0, 0) = 0.5;
  m(dim - 1, dim - 1) = 0.5;
  return m;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::VectorXcd singlet_pairs(const std::vector<std::pair<int, int>>& pairs) {
  // Product of singlets (|01> - |10>)/sqrt(2) on the given qubit pairs of four.
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  for (std::uint32_t s = 0; s < 16; ++s) {
    double amp = 1.0;
    for (const auto& [i, j] : pairs) {
      const int bi = bit_of(s, i, 4);
      const int bj = bit_of(s, j, 4);
      if (bi == bj) {
        amp = 0.0;
        break;
      }
      amp *= (bi == 0 ? 1.0 : -1.0) * std::sqrt(0.5);
    }
    v(s) = amp;
  }
  return v;
}

Eigen::Matrix2cd haar_su2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> cosine(-1.0, 1.0);
  const double alpha = angle(rng);
  const double beta = std::acos(cosine(rng));
  const double gamma = angle(rng);
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd rz_a, ry_b, rz_g;
  rz_a << std::exp(-i * alpha / 2.0), 0.0, 0.0, std::exp(i * alpha / 2.0);
  ry_b << std::cos(beta / 2.0), -std::sin(beta / 2.0), std::sin(beta / 2.0), std::cos(beta / 2.0);
  rz_g << std::exp(-i * gamma / 2.0), 0.0, 0.0, std::exp(i * gamma / 2.0);
  return rz_a * ry_b * rz_g;
}

}  // namespace

double photon_two_copy_trace_distance(std::int64_t N) {
  if (N < 1) throw DomainError("photon_two_copy_trace_distance: N must be at least 1");
  return 0.25;
}

double photon_two_copy_numeric(std::int64_t N) {
  const TwoBranch b = make_two_branch(0, N);
  const BlockDiagonalState pure = twirl_density_joint(density_of(b.superposition), MixtureEnsemble::pure(b.superposition));
  const BlockDiagonalState mixed = twirl_density_joint(density_of(b.mixture), b.mixture);
  return trace_distance_blocks(pure, mixed);
}

double spin_two_copy_delta_pj(std::int64_t N, std::int64_t J) {
  if (N < 1) throw DomainError("spin_two_copy_delta_pj: N must be at least 1");
  if (J < 0 || J > N) throw DomainError("spin_two_copy_delta_pj: J must lie in 0..N");
  const double n = static_cast<double>(N);
  const double j = static_cast<double>(J);
  const double k = n - j;  // number of singlets
  const double log_nj = std::log(2.0 * j + 1.0) - std::log(n + j + 1.0) + log_choose(2.0 * n, n + j);
  const double log_beta = 2.0 * log_choose(n, k) + std::lgamma(k + 1.0) - log_choose(2.0 * n, 2.0 * k) -
                          log_double_factorial_odd(k);
  const double log_mag = log_nj + log_beta - (k + 1.0) * std::numbers::ln2 - log_choose(2.0 * j, j);
  const double sign = ((N - J) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_mag);
}

std::vector<SectorProbability> spin_two_copy_sectors(std::int64_t N) {
  std::vector<SectorProbability> out;
  for (std::int64_t J = 0; J <= N; ++J) out.push_back({2 * J, spin_two_copy_delta_pj(N, J)});
  return out;
}

double spin_two_copy_trace_distance(std::int64_t N) {
  // Neumaier summation.
  double sum = 0.0;
  double comp = 0.0;
  for (const auto& s : spin_two_copy_sectors(N)) {
    const double x = std::abs(s.delta_p);
    const double t = sum + x;
    comp += std::abs(sum) >= x ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return 0.5 * (sum + comp);
}

std::vector<SectorProbability> brute_force_spin_two_copy(std::int64_t N) {
  if (N < 1) throw DomainError("brute_force_spin_two_copy: N must be at least 1");
  if (2 * N > 8) throw SizingError("brute_force_spin_two_copy: at most 8 qubits");
  const int n = static_cast<int>(N);
  const int n_qubits = 2 * n;

  const Eigen::VectorXd psi = branch_pair_state(n);
  const Eigen::VectorXd pp = kron(psi, psi);
  const Eigen::MatrixXd mix = branch_mixture(n);
  const Eigen::MatrixXd delta = pp * pp.transpose() - kron(mix, mix);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(total_spin_squared(n_qubits));
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::MatrixXd& evecs = solver.eigenvectors();

  std::vector<SectorProbability> out;
  for (std::int64_t J = 0; J <= N; ++J) {
    const double target = static_cast<double>(J * (J + 1));
    double p = 0.0;
    for (Eigen::Index c = 0; c < evals.size(); ++c) {
      if (std::abs(evals(c) - target) > 1e-8) continue;
      p += evecs.col(c).dot(delta * evecs.col(c));
    }
    out.push_back({2 * J, p});
  }
  return out;
}

double single_copy_terms_after_sz_dephasing(std::int64_t N) {
  if (N < 1) throw DomainError("single_copy_terms_after_sz_dephasing: N must be at least 1");
  if (2 * N > 8) throw SizingError("single_copy_terms_after_sz_dephasing: at most 8 qubits");
  const int n = static_cast<int>(N);
  const auto half = static_cast<Eigen::Index>(1u << n);
  Eigen::MatrixXd flip = Eigen::MatrixXd::Zero(half, half);
  flip(0, half - 1) = 0.5;
  flip(half - 1, 0) = 0.5;
  const Eigen::MatrixXd mix = branch_mixture(n);
  const Eigen::MatrixXd terms = kron(flip, mix) + kron(mix, flip);

  const int n_qubits = 2 * n;
  double largest = 0.0;
  for (Eigen::Index r = 0; r < terms.rows(); ++r) {
    for (Eigen::Index c = 0; c < terms.cols(); ++c) {
      int ups_r = 0;
      int ups_c = 0;
      for (int q = 0; q < n_qubits; ++q) {
        ups_r += bit_of(static_cast<std::uint32_t>(r), q, n_qubits) == 0;
        ups_c += bit_of(static_cast<std::uint32_t>(c), q, n_qubits) == 0;
      }
      if (ups_r == ups_c) largest = std::max(largest, std::abs(terms(r, c)));
    }
  }
  return largest;
}

RelativeDofReport relative_dof_invariance_check(std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("relative_dof_invariance_check: samples must be at least 1");
  const Eigen::VectorXcd heart = singlet_pairs({{0, 1}, {2, 3}});
  const Eigen::VectorXcd pair_sum = singlet_pairs({{0, 2}, {1, 3}}) + singlet_pairs({{0, 3}, {1, 2}});
  // The two pairings overlap by 1/2, so the sum has norm sqrt(3), not sqrt(2).
  const Eigen::VectorXcd diamond = pair_sum / std::sqrt(3.0);

  RelativeDofReport r;
  r.diamond_norm_with_half = std::sqrt(0.5) * pair_sum.norm();
  r.samples = samples;
  r.seed = seed;
  r.norm_heart = heart.norm();
  r.norm_diamond = diamond.norm();
  r.overlap = std::abs(heart.dot(diamond));

  std::mt19937_64 rng(seed);
  for (std::int64_t s = 0; s < samples; ++s) {
    const Eigen::Matrix2cd u = haar_su2(rng);
    Eigen::MatrixXcd u4 = u;
    for (int q = 1; q < 4; ++q) {
      Eigen::MatrixXcd next(u4.rows() * 2, u4.cols() * 2);
      for (Eigen::Index i = 0; i < u4.rows(); ++i) {
        for (Eigen::Index j = 0; j < u4.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = u4(i, j) * u;
      }
      u4 = std::move(next);
    }
    r.max_deviation = std::max({r.max_deviation, (u4 * heart - heart).norm(), (u4 * diamond - diamond).norm()});
  }
  return r;
}

}  // namespace macrocert
