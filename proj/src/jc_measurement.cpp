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

#include "macrocert/jc_measurement.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "macrocert/errors.hpp"

namespace macrocert {
namespace {

constexpr double kPi = std::numbers::pi;

double raise_coefficient(std::int64_t N, std::int64_t m) {
  if (m < 0 || m >= N) return 0.0;
  return std::sqrt(static_cast<double>((m + 1) * (N - m)));
}

double z_value(std::int64_t N, std::int64_t m) {
  return static_cast<double>(2 * m - N) / 2.0;
}

// Unnormalized coherent-state amplitudes on 0..cutoff-1; the missing
// Poisson tail shows up as the completeness defect.
std::vector<double> poisson_amplitudes(double mu, std::int64_t cutoff) {
  std::vector<double> c(static_cast<std::size_t>(cutoff));
  const double log_mu = std::log(mu);
  for (std::int64_t n = 0; n < cutoff; ++n) {
    const double dn = static_cast<double>(n);
    c[static_cast<std::size_t>(n)] = std::exp(0.5 * (-mu + dn * log_mu - std::lgamma(dn + 1.0)));
  }
  return c;
}

// Calls fn(e, j_lo, U_e) for every excitation block. U_e acts on spin
// indices j_lo..j_lo+rows-1, each paired with photon number e - j.
template <typename Fn>
void for_each_block(std::int64_t N, double gamma, std::int64_t cutoff, Fn&& fn) {
  for (std::int64_t e = 0; e <= cutoff - 1 + N; ++e) {
    const std::int64_t j_lo = std::max<std::int64_t>(0, e - (cutoff - 1));
    const std::int64_t j_hi = std::min<std::int64_t>(N, e);
    const auto d = static_cast<Eigen::Index>(j_hi - j_lo + 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    for (std::int64_t j = j_lo; j < j_hi; ++j) {
      const double val = gamma * std::sqrt(static_cast<double>(e - j)) * raise_coefficient(N, j);
      const auto p = static_cast<Eigen::Index>(j - j_lo);
      g(p + 1, p) = val;
      g(p, p + 1) = -val;
    }
    const Eigen::MatrixXd u = g.exp();
    fn(e, j_lo, u);
  }
}

JCPovm povm_at_cutoff(const JCModel& model, std::int64_t cutoff) {
  const std::int64_t N = model.N;
  const auto dim = static_cast<Eigen::Index>(N + 1);
  const auto c = poisson_amplitudes(model.mean_photon, cutoff);
  JCPovm out;
  out.cutoff_used = cutoff;
  out.elements.assign(static_cast<std::size_t>(N + 1), Eigen::MatrixXd::Zero(dim, dim));
  for_each_block(N, model.gamma, cutoff, [&](std::int64_t e, std::int64_t j_lo, const Eigen::MatrixXd& u) {
    const auto d = u.rows();
    for (Eigen::Index mi = 0; mi < d; ++mi) {
      Eigen::MatrixXd& E = out.elements[static_cast<std::size_t>(j_lo + mi)];
      for (Eigen::Index a = 0; a < d; ++a) {
        const double ca = c[static_cast<std::size_t>(e - j_lo - a)] * u(mi, a);
        if (ca == 0.0) continue;
        for (Eigen::Index b = 0; b < d; ++b) {
          E(j_lo + a, j_lo + b) += ca * c[static_cast<std::size_t>(e - j_lo - b)] * u(mi, b);
        }
      }
    }
  });
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& E : out.elements) total += E;
  out.completeness_defect = (total - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace

SpinOps SpinOps::make(std::int64_t N) {
  if (N < 1) throw DomainError("SpinOps: N must be at least 1");
  const auto d = static_cast<Eigen::Index>(N + 1);
  SpinOps ops;
  ops.N = N;
  ops.Jp = Eigen::MatrixXd::Zero(d, d);
  ops.Jz = Eigen::MatrixXd::Zero(d, d);
  for (std::int64_t m = 0; m <= N; ++m) {
    ops.Jz(m, m) = z_value(N, m);
    if (m < N) ops.Jp(m + 1, m) = raise_coefficient(N, m);
  }
  ops.Jm = ops.Jp.transpose();
  return ops;
}

Eigen::MatrixXcd SpinOps::Jy() const {
  return std::complex<double>(0.0, -0.5) * (Jp - Jm).cast<std::complex<double>>();
}

PerturbationTables PerturbationTables::standard() {
  PerturbationTables t;
  t.A << 1.0, 2.0 - 3.0 * kPi / 4.0, kPi / 4.0,
      (kPi - 4.0) / 4.0, (kPi - 2.0) * (kPi - 2.0) / 16.0, (20.0 - kPi * (kPi + 4.0)) / 16.0,
      (kPi + 4.0) / 4.0, (-12.0 - kPi * (kPi - 4.0)) / 16.0, (kPi + 2.0) * (kPi + 2.0) / 16.0;
  t.v << 1.0, (2.0 - kPi) / 4.0, (2.0 + kPi) / 4.0;
  t.v_uncorrected << 1.0, (2.0 - kPi) / 4.0, (2.0 + kPi) / 2.0;
  return t;
}

std::int64_t JCModel::default_cutoff(std::int64_t N, double mean_photon) {
  return static_cast<std::int64_t>(std::ceil(mean_photon + 12.0 * std::sqrt(mean_photon) + static_cast<double>(N)));
}

JCModel JCModel::make(std::int64_t N, double mean_photon, std::optional<double> gamma,
                      std::optional<std::int64_t> fock_cutoff) {
  if (N < 1) throw DomainError("JCModel: N must be at least 1");
  if (!(mean_photon > 0.0) || !std::isfinite(mean_photon)) {
    throw DomainError("JCModel: mean photon number must be positive");
  }
  JCModel m;
  m.N = N;
  m.mean_photon = mean_photon;
  m.gamma = gamma.value_or(kPi / (4.0 * std::sqrt(mean_photon)));
  if (!std::isfinite(m.gamma)) throw DomainError("JCModel: gamma must be finite");
  const std::int64_t floor_cutoff = default_cutoff(N, mean_photon);
  m.fock_cutoff = fock_cutoff.value_or(floor_cutoff);
  if (m.fock_cutoff < floor_cutoff) {
    throw DomainError("JCModel: fock cutoff must be at least " + std::to_string(floor_cutoff));
  }
  return m;
}

JCPovm jc_povm_exact(const JCModel& model) {
  std::int64_t cutoff = model.fock_cutoff;
  for (int attempt = 0; attempt < 3; ++attempt) {
    JCPovm povm = povm_at_cutoff(model, cutoff);
    if (povm.completeness_defect <= 1e-6) return povm;
    cutoff *= 2;
  }
  throw SizingError("jc_povm_exact: completeness defect above 1e-6 after doubling the Fock cutoff twice");
}

Eigen::MatrixXd ideal_rotation(const SpinOps& ops) {
  const Eigen::MatrixXd gen = (kPi / 2.0) * ops.iJy();
  return gen.exp();
}

Eigen::MatrixXd x_basis(const SpinOps& ops) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ops.Jx());
  return solver.eigenvectors();
}

std::vector<Eigen::MatrixXd> noise_frame(const JCPovm& povm, const SpinOps& ops) {
  const Eigen::MatrixXd R = ideal_rotation(ops);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(povm.elements.size());
  for (const auto& E : povm.elements) out.push_back(R * E * R.transpose());
  return out;
}

double exact_average_fidelity(const JCModel& model) {
  const SpinOps ops = SpinOps::make(model.N);
  const JCPovm povm = jc_povm_exact(model);
  const Eigen::MatrixXd X = x_basis(ops);
  double total = 0.0;
  for (std::int64_t m = 0; m <= model.N; ++m) {
    const auto x = X.col(static_cast<Eigen::Index>(m));
    total += x.dot(povm.elements[static_cast<std::size_t>(m)] * x);
  }
  return total / static_cast<double>(model.N + 1);
}

double avg_fidelity(std::int64_t N, double mean_photon) {
  if (N < 1) throw DomainError("avg_fidelity: N must be at least 1");
  if (!(mean_photon > 0.0)) throw DomainError("avg_fidelity: mean photon number must be positive");
  const double n = static_cast<double>(N);
  return 1.0 - (4.0 + kPi * kPi) / 192.0 * n * (n + 2.0) / mean_photon;
}

double avg_fidelity_from_tables(std::int64_t N, double mean_photon, const PerturbationTables& tables) {
  if (N < 1) throw DomainError("avg_fidelity_from_tables: N must be at least 1");
  if (!(mean_photon > 0.0)) throw DomainError("avg_fidelity_from_tables: mean photon number must be positive");
  const auto lower = [N](std::int64_t m) {
    if (m < 1 || m > N) return 0.0;
    return std::sqrt(static_cast<double>(m * (N - m + 1)));
  };
  const auto& A = tables.A;
  const double v1 = tables.v(0);
  double sum = 0.0;
  for (std::int64_t m = 0; m <= N; ++m) {
    const double z = z_value(N, m);
    sum += (A(0, 0) - v1 * v1) * z * z + A(1, 1) * lower(m + 1) * raise_coefficient(N, m) +
           A(2, 2) * raise_coefficient(N, m - 1) * lower(m);
  }
  const double gamma = kPi / (4.0 * std::sqrt(mean_photon));
  return 1.0 - 4.0 * gamma * gamma / (kPi * kPi * static_cast<double>(N + 1)) * sum;
}

Eigen::MatrixXd jc_noisy_projector(const JCModel& model, std::int64_t m) {
  const std::int64_t N = model.N;
  if (m < 0 || m > N) throw DomainError("jc_noisy_projector: m out of range");
  const SpinOps ops = SpinOps::make(N);
  const Eigen::VectorXd w = ideal_rotation(ops).row(static_cast<Eigen::Index>(m)).transpose();

  std::int64_t cutoff = model.fock_cutoff;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const auto c = poisson_amplitudes(model.mean_photon, cutoff);
    // phi(n, j): amplitude of |n>_photon |j>_spin in U (|alpha> (x) w).
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cutoff), static_cast<Eigen::Index>(N + 1));
    for_each_block(N, model.gamma, cutoff, [&](std::int64_t e, std::int64_t j_lo, const Eigen::MatrixXd& u) {
      const auto d = u.rows();
      Eigen::VectorXd in(d);
      for (Eigen::Index a = 0; a < d; ++a) in(a) = c[static_cast<std::size_t>(e - j_lo - a)] * w(j_lo + a);
      const Eigen::VectorXd out = u * in;
      for (Eigen::Index a = 0; a < d; ++a) phi(e - j_lo - a, j_lo + a) = out(a);
    });
    Eigen::MatrixXd rho = phi.transpose() * phi;
    if (std::abs(rho.trace() - 1.0) <= 1e-6) return rho;
    cutoff *= 2;
  }
  throw SizingError("jc_noisy_projector: truncated norm defect above 1e-6 after doubling the Fock cutoff twice");
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> KrausPair::at(double gamma) const {
  const auto d = K0_quadratic.rows();
  return {Eigen::MatrixXd::Identity(d, d) + gamma * gamma * K0_quadratic, gamma * K1_linear};
}

KrausPair kraus_perturbative(std::int64_t N, const PerturbationTables& tables) {
  const SpinOps ops = SpinOps::make(N);
  const Eigen::MatrixXd L[3] = {ops.Jz, ops.Jp, ops.Jm};
  const Eigen::MatrixXd Ldag[3] = {ops.Jz, ops.Jm, ops.Jp};
  const auto d = ops.Jz.rows();
  Eigen::MatrixXd lal = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd lv = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) lal += tables.A(i, j) * Ldag[i] * L[j];
    lv += tables.v(i) * L[i];
  }
  return {-(2.0 / (kPi * kPi)) * lal, -(2.0 / kPi) * lv};
}

Eigen::MatrixXd delta_m(std::int64_t N, std::int64_t m, double mean_photon, const PerturbationTables& tables) {
  if (N < 1) throw DomainError("delta_m: N must be at least 1");
  if (m < 0 || m > N) throw DomainError("delta_m: m must lie in 0..N");
  if (!(mean_photon > 0.0)) throw DomainError("delta_m: mean photon number must be positive");
  const auto& A = tables.A;
  const double v1 = tables.v(0);
  const double v2 = tables.v(1);
  const double v3 = tables.v(2);
  const auto rp = [N](std::int64_t k) { return raise_coefficient(N, k); };
  const auto z = [N](std::int64_t k) { return z_value(N, k); };

  double band[5][5] = {};
  band[1][1] = -v3 * v3 * rp(m - 1) * rp(m - 1);
  band[2][0] = A(1, 2) * rp(m - 2) * rp(m - 1);
  band[2][1] = (A(0, 2) * z(m - 1) + (A(1, 0) - 2.0 * v1 * v3) * z(m)) * rp(m - 1);
  band[2][2] = (A(0, 0) - v1 * v1) * z(m) * z(m) + A(2, 2) * rp(m - 1) * rp(m - 1) + A(1, 1) * rp(m) * rp(m);
  band[3][1] = -2.0 * v2 * v3 * rp(m - 1) * rp(m);
  band[3][2] = ((A(2, 0) - 2.0 * v1 * v2) * z(m) + A(0, 1) * z(m + 1)) * rp(m);
  band[3][3] = -v2 * v2 * rp(m) * rp(m);
  band[4][2] = A(2, 1) * rp(m) * rp(m + 1);

  const auto d = static_cast<Eigen::Index>(N + 1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  const double scale = -1.0 / (8.0 * mean_photon);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const std::int64_t r = m - 2 + i;
      const std::int64_t c = m - 2 + j;
      if (r < 0 || r > N || c < 0 || c > N) continue;
      out(r, c) = scale * band[i][j];
    }
  }
  return out;
}

Eigen::MatrixXd perturbative_projector(std::int64_t N, std::int64_t m, double mean_photon,
                                       const PerturbationTables& tables) {
  const Eigen::MatrixXd delta = delta_m(N, m, mean_photon, tables);
  Eigen::MatrixXd out = delta + delta.transpose();
  out(m, m) += 1.0;
  return out;
}

Eigen::Matrix2d qubit_e0_closed_form(double mean_photon) {
  if (!(mean_photon > 0.0)) throw DomainError("qubit_e0_closed_form: mean photon number must be positive");
  const double off = -kPi / (32.0 * mean_photon);
  Eigen::Matrix2d e;
  e << 1.0 - (kPi - 2.0) * (kPi - 2.0) / (64.0 * mean_photon), off,
      off, (kPi + 2.0) * (kPi + 2.0) / (64.0 * mean_photon);
  return e;
}

Eigen::Matrix2d qubit_e0_uncorrected(double mean_photon) {
  if (!(mean_photon > 0.0)) throw DomainError("qubit_e0_uncorrected: mean photon number must be positive");
  const double pi2 = kPi * kPi;
  const double off = (4.0 - kPi) / (16.0 * pi2 * mean_photon);
  Eigen::Matrix2d e;
  e << 1.0 - (kPi - 2.0) * (kPi - 2.0) / (64.0 * pi2 * mean_photon), off,
      off, (0.25 + 1.0 / pi2 + 1.0 / kPi) / (16.0 * mean_photon);
  return e;
}

}  // namespace macrocert
