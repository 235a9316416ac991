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

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "macrocert/errors.hpp"
#include "macrocert/jc_measurement.hpp"

using namespace macrocert;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd annihilation(Eigen::Index cut) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(cut, cut);
  for (Eigen::Index n = 1; n < cut; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Full joint-space unitary, index = spin * cut + photon.
Eigen::MatrixXd dense_unitary(const SpinOps& ops, double gamma, Eigen::Index cut) {
  const Eigen::MatrixXd a = annihilation(cut);
  const Eigen::MatrixXd gen = gamma * (Eigen::kroneckerProduct(ops.Jp, a).eval() -
                                       Eigen::kroneckerProduct(ops.Jm, Eigen::MatrixXd(a.transpose())).eval());
  return gen.exp();
}

std::vector<Eigen::MatrixXd> dense_povm(const JCModel& model) {
  const SpinOps ops = SpinOps::make(model.N);
  const auto cut = static_cast<Eigen::Index>(model.fock_cutoff);
  const auto d = static_cast<Eigen::Index>(model.N + 1);
  const Eigen::MatrixXd U = dense_unitary(ops, model.gamma, cut);
  Eigen::VectorXd alpha(cut);
  alpha(0) = std::exp(-0.5 * model.mean_photon);
  for (Eigen::Index n = 1; n < cut; ++n) alpha(n) = alpha(n - 1) * std::sqrt(model.mean_photon / n);
  // Column i: U (|i> (x) |alpha>).
  Eigen::MatrixXd out(d * cut, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::VectorXd in = Eigen::VectorXd::Zero(d * cut);
    in.segment(i * cut, cut) = alpha;
    out.col(i) = U * in;
  }
  std::vector<Eigen::MatrixXd> E;
  for (Eigen::Index m = 0; m < d; ++m) {
    const Eigen::MatrixXd rows = out.middleRows(m * cut, cut);
    E.push_back(rows.transpose() * rows);
  }
  return E;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spin operators satisfy the angular momentum algebra") {
  for (std::int64_t N : {1, 2, 3, 6, 11}) {
    const auto ops = SpinOps::make(N);
    CHECK(max_abs(ops.Jz * ops.Jp - ops.Jp * ops.Jz - ops.Jp) < 1e-12);
    CHECK(max_abs(ops.Jz * ops.Jm - ops.Jm * ops.Jz + ops.Jm) < 1e-12);
    CHECK(max_abs(ops.Jp * ops.Jm - ops.Jm * ops.Jp - 2.0 * ops.Jz) < 1e-12);
    CHECK(ops.Jm == Eigen::MatrixXd(ops.Jp.transpose()));
    const Eigen::MatrixXcd Jy = ops.Jy();
    CHECK((Jy - Jy.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    const double j = 0.5 * static_cast<double>(N);
    const Eigen::MatrixXd casimir = ops.Jx() * ops.Jx() - ops.iJy() * ops.iJy() + ops.Jz * ops.Jz;
    CHECK(max_abs(casimir - j * (j + 1.0) * Eigen::MatrixXd::Identity(N + 1, N + 1)) < 1e-12);
  }
  CHECK_THROWS_AS(SpinOps::make(0), DomainError);
}

TEST_CASE("model construction") {
  const auto m = JCModel::make(1, 100.0);
  CHECK(m.gamma == doctest::Approx(kPi / 40.0));
  CHECK(m.fock_cutoff == 100 + 120 + 1);
  CHECK(JCModel::default_cutoff(2, 400.0) == 642);
  CHECK_THROWS_AS(JCModel::make(1, 100.0, std::nullopt, 50), DomainError);
  CHECK_THROWS_AS(JCModel::make(0, 100.0), DomainError);
  CHECK_THROWS_AS(JCModel::make(1, 0.0), DomainError);
}

TEST_CASE("without interaction the measurement is projective") {
  const auto model = JCModel::make(3, 25.0, 0.0);
  const auto povm = jc_povm_exact(model);
  for (std::size_t m = 0; m < povm.elements.size(); ++m) {
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
    expect(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = 1.0;
    CHECK(max_abs(povm.elements[m] - expect) < 1e-12);
  }
}

TEST_CASE("block exponentiation matches the dense joint-space unitary") {
  for (auto [N, mu] : std::vector<std::pair<std::int64_t, double>>{{1, 4.0}, {2, 9.0}, {3, 2.0}}) {
    const auto model = JCModel::make(N, mu);
    const auto povm = jc_povm_exact(model);
    const auto dense = dense_povm(model);
    for (std::size_t m = 0; m < dense.size(); ++m) CHECK(max_abs(povm.elements[m] - dense[m]) < 1e-10);
  }
}

TEST_CASE("exact POVM is complete and positive") {
  for (auto [N, mu] : std::vector<std::pair<std::int64_t, double>>{{1, 100.0}, {2, 50.0}, {4, 400.0}}) {
    const auto povm = jc_povm_exact(JCModel::make(N, mu));
    CHECK(povm.completeness_defect < 1e-8);
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (const auto& E : povm.elements) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E);
      CHECK(es.eigenvalues().minCoeff() > -1e-10);
      CHECK(max_abs(E - E.transpose()) < 1e-12);
      total += E;
    }
    CHECK(max_abs(total - Eigen::MatrixXd::Identity(N + 1, N + 1)) < 1e-8);
  }
}

TEST_CASE("ideal rotation maps the z basis onto the x basis") {
  for (std::int64_t N : {1, 2, 5}) {
    const auto ops = SpinOps::make(N);
    const Eigen::MatrixXd R = ideal_rotation(ops);
    const Eigen::MatrixXd X = x_basis(ops);
    CHECK(max_abs(R * R.transpose() - Eigen::MatrixXd::Identity(N + 1, N + 1)) < 1e-12);
    // Rows of R are the x eigenvectors up to sign, in the same order.
    for (Eigen::Index m = 0; m <= N; ++m) CHECK(std::abs(std::abs(R.row(m).dot(X.col(m))) - 1.0) < 1e-10);
  }
}

TEST_CASE("qubit noisy element against the second-order closed form") {
  double prev = 0.0;
  for (double mu : {100.0, 400.0, 1600.0}) {
    const auto ops = SpinOps::make(1);
    const auto frame = noise_frame(jc_povm_exact(JCModel::make(1, mu)), ops);
    const Eigen::MatrixXd closed = qubit_e0_closed_form(mu);
    const double err = max_abs(frame[0] - closed);
    CHECK(err * std::pow(mu, 1.5) < 0.05);
    if (prev > 0.0) CHECK(err < prev);
    prev = err;
    // The alternative display differs at first order in 1/mu.
    CHECK(max_abs(frame[0] - Eigen::MatrixXd(qubit_e0_uncorrected(mu))) * mu > 0.01);
  }
  const Eigen::Matrix2d e = qubit_e0_closed_form(100.0);
  CHECK(e(0, 1) == doctest::Approx(-kPi / 3200.0));
  CHECK(e(1, 1) == doctest::Approx((kPi + 2.0) * (kPi + 2.0) / 6400.0));
}

TEST_CASE("average fidelity closed form") {
  CHECK((4.0 + kPi * kPi) / 192.0 == doctest::Approx(0.072).epsilon(0.005));
  CHECK((1.0 - avg_fidelity(1, 1.0)) == doctest::Approx(0.2167).epsilon(1e-3));
  CHECK(avg_fidelity(3, 1e12) == doctest::Approx(1.0).epsilon(1e-10));
  for (std::int64_t N = 1; N <= 6; ++N) {
    for (double mu : {10.0, 100.0, 1e4}) {
      CHECK(avg_fidelity_from_tables(N, mu, PerturbationTables::standard()) ==
            doctest::Approx(avg_fidelity(N, mu)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(avg_fidelity(0, 1.0), DomainError);
}

TEST_CASE("qubit infidelity coefficient from the exact model") {
  const double scaled = (1.0 - exact_average_fidelity(JCModel::make(1, 400.0))) * 400.0;
  CHECK(std::abs(scaled - 0.2167) / 0.2167 < 0.05);
  CHECK(std::abs(scaled - 0.22) / 0.22 < 0.05);
}

TEST_CASE("exact fidelity converges to the closed form faster than mu^-3/2") {
  for (std::int64_t N : {1, 2, 4}) {
    double prev = 1e300;
    for (double mu : {1e2, 1e3, 1e4}) {
      const double scaled = std::abs(exact_average_fidelity(JCModel::make(N, mu)) - avg_fidelity(N, mu)) *
                            std::pow(mu, 1.5);
      CHECK(scaled <= prev * 1.05);
      prev = scaled;
    }
  }
}

TEST_CASE("perturbative Kraus pair preserves the trace to second order") {
  const auto tables = PerturbationTables::standard();
  CHECK(tables.v(2) == doctest::Approx((2.0 + kPi) / 4.0));
  CHECK(tables.v_uncorrected(2) == doctest::Approx((2.0 + kPi) / 2.0));
  CHECK(tables.A(0, 0) == 1.0);
  CHECK(tables.A(2, 2) == doctest::Approx((kPi + 2.0) * (kPi + 2.0) / 16.0));

  for (std::int64_t N : {1, 2, 3}) {
    const double gamma = 1e-3;
    const auto defect = [&](const PerturbationTables& t) {
      const auto [K0, K1] = kraus_perturbative(N, t).at(gamma);
      const auto d = K0.rows();
      return max_abs(Eigen::MatrixXd::Identity(d, d) - K0.transpose() * K0 - K1.transpose() * K1);
    };
    const double n3 = static_cast<double>(N * N * N);
    CHECK(defect(tables) < gamma * gamma * gamma * n3);
    PerturbationTables literal = tables;
    literal.v = tables.v_uncorrected;
    CHECK(defect(literal) > 0.1 * gamma * gamma);
  }

  const auto [K0, K1] = kraus_perturbative(2).at(0.0);
  CHECK(max_abs(K0 - Eigen::MatrixXd::Identity(3, 3)) == 0.0);
  CHECK(max_abs(K1) == 0.0);
}

TEST_CASE("Kraus pair reproduces the exact channel to second order") {
  const std::int64_t N = 2;
  const double mu = 1e4;
  const auto model = JCModel::make(N, mu);
  const auto [K0, K1] = kraus_perturbative(N).at(model.gamma);
  for (Eigen::Index m = 0; m <= N; ++m) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N + 1, N + 1);
    P(m, m) = 1.0;
    const Eigen::MatrixXd kraus = K0 * P * K0.transpose() + K1 * P * K1.transpose();
    CHECK(max_abs(kraus - jc_noisy_projector(model, m)) < std::pow(mu, -1.5));
  }
}

TEST_CASE("banded perturbation matrix") {
  for (std::int64_t N : {1, 2, 4, 7}) {
    for (std::int64_t m = 0; m <= N; ++m) {
      const Eigen::MatrixXd d = delta_m(N, m, 50.0);
      for (Eigen::Index r = 0; r <= N; ++r) {
        for (Eigen::Index c = 0; c <= N; ++c) {
          if (std::abs(r - m) > 2 || std::abs(c - m) > 2) CHECK(d(r, c) == 0.0);
        }
      }
    }
  }
  // At the lower edge nothing references rows below zero.
  const Eigen::MatrixXd edge = delta_m(4, 0, 10.0);
  CHECK(edge.rows() == 5);
  CHECK(edge.block(3, 0, 2, 5).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(delta_m(2, 3, 10.0), DomainError);
  CHECK_THROWS_AS(delta_m(2, -1, 10.0), DomainError);
}

TEST_CASE("perturbative projector matches the exact noisy projector") {
  for (std::int64_t m = 0; m <= 2; ++m) {
    double err_small = 0.0;
    for (double mu : {1e3, 1e4}) {
      const double err = max_abs(perturbative_projector(2, m, mu) - jc_noisy_projector(JCModel::make(2, mu), m));
      CHECK(err * std::pow(mu, 1.5) < 0.1);
      if (mu == 1e3) err_small = err;
      else CHECK(err < err_small / 10.0);
    }
  }
  const double err3 = max_abs(perturbative_projector(3, 1, 1e4) - jc_noisy_projector(JCModel::make(3, 1e4), 1));
  CHECK(err3 < 1e-6);
}

TEST_CASE("displacement splits the interaction into rotation and residual") {
  const std::int64_t N = 1;
  const double mu = 25.0;
  const double alpha = std::sqrt(mu);
  const double gamma = kPi / (4.0 * alpha);
  const auto ops = SpinOps::make(N);
  const Eigen::Index cut = 160;
  const Eigen::MatrixXd a = annihilation(cut);
  const Eigen::MatrixXd D = (alpha * (Eigen::MatrixXd(a.transpose()) - a)).exp();
  const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd Dj = Eigen::kroneckerProduct(I2, D);
  const Eigen::MatrixXd lhs = Dj.transpose() * dense_unitary(ops, gamma, cut) * Dj;
  const Eigen::MatrixXd gen = (kPi / 2.0) * Eigen::kroneckerProduct(ops.iJy(), Eigen::MatrixXd::Identity(cut, cut)) +
                              gamma * (Eigen::kroneckerProduct(ops.Jp, a).eval() -
                                       Eigen::kroneckerProduct(ops.Jm, Eigen::MatrixXd(a.transpose())).eval());
  const Eigen::MatrixXd rhs = gen.exp();
  double worst = 0.0;
  for (Eigen::Index s = 0; s < 2; ++s) {
    for (Eigen::Index n = 0; n < 6; ++n) {
      const Eigen::Index col = s * cut + n;
      for (Eigen::Index t = 0; t < 2; ++t) {
        for (Eigen::Index k = 0; k < 6; ++k) worst = std::max(worst, std::abs(lhs(t * cut + k, col) - rhs(t * cut + k, col)));
      }
    }
  }
  CHECK(worst < 1e-8);
}
