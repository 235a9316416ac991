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
#include <map>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "macrocert/canonical_cases.hpp"
#include "macrocert/errors.hpp"
#include "macrocert/general_macro.hpp"
#include "macrocert/linalg.hpp"

using namespace macrocert;

namespace {

// Dense twirled trace distance: build both joint states on the full grid,
// keep only entries with equal total label, and diagonalize the whole matrix.
double dense_general_distance(const NumberState& state, const NumberState& rf, double sigma) {
  const auto ns = static_cast<Eigen::Index>(state.size());
  const auto nr = static_cast<Eigen::Index>(rf.size());
  const Eigen::Index dim = ns * nr;
  Eigen::VectorXd psi(dim);
  std::vector<std::int64_t> label(static_cast<std::size_t>(dim));
  std::vector<std::int64_t> sys(static_cast<std::size_t>(dim));
  for (Eigen::Index r = 0; r < nr; ++r) {
    for (Eigen::Index s = 0; s < ns; ++s) {
      const Eigen::Index i = r * ns + s;
      psi(i) = rf[rf.offset() + r] * state[state.offset() + s];
      sys[static_cast<std::size_t>(i)] = state.offset() + s;
      label[static_cast<std::size_t>(i)] = rf.offset() + r + state.offset() + s;
    }
  }
  Eigen::MatrixXd diff(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (label[static_cast<std::size_t>(i)] != label[static_cast<std::size_t>(j)]) {
        diff(i, j) = 0.0;
        continue;
      }
      const double gap = static_cast<double>(sys[static_cast<std::size_t>(i)] - sys[static_cast<std::size_t>(j)]);
      diff(i, j) = psi(i) * psi(j) * (1.0 - std::exp(-gap * gap / (2.0 * sigma * sigma)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST_CASE("Gaussian dephasing entries") {
  const auto s = NumberState::normalized(0, {1.0, 1.0, 1.0, 1.0, 1.0});
  const auto d = gaussian_dephase(s, 2.0);
  CHECK(d.matrix(0, 4) == doctest::Approx(0.2 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(d.matrix(1, 2) == doctest::Approx(0.2 * std::exp(-0.125)).epsilon(1e-14));
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(d.matrix(i, i) == s[i] * s[i]);
  CHECK_THROWS_AS(gaussian_dephase(s, 0.0), DomainError);
}

TEST_CASE("dephasing limits") {
  const auto br = make_two_branch(0, 20);
  const auto narrow = gaussian_dephase(br.superposition, 1.0);
  CHECK(std::abs(narrow.matrix(0, 20)) < 1e-80);
  const auto wide = gaussian_dephase(br.superposition, std::numeric_limits<double>::infinity());
  const Eigen::Map<const Eigen::VectorXd> v(br.superposition.amplitudes().data(),
                                            static_cast<Eigen::Index>(br.superposition.size()));
  CHECK((wide.matrix - v * v.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dephased states are valid density matrices") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> a(2 + rng() % 20);
    for (auto& x : a) x = u(rng);
    const auto s = NumberState::normalized(0, a);
    const auto d = gaussian_dephase(s, 0.3 + 5.0 * std::abs(u(rng)));
    CHECK(linalg::min_eigenvalue(d.matrix) > -1e-10);
    CHECK(std::abs(d.matrix.trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("definite-number RF cannot see dephasing") {
  const auto s = NumberState::normalized(0, {0.3, 0.5, 0.2, 0.7});
  const auto r = twirled_trace_distance_general(s, RFSpec{RFSpec::Custom{NumberState::normalized(4, {1.0})}}, 1.0);
  CHECK(r.exact < 1e-14);
}

TEST_CASE("fully dephased two-branch state reduces to the photon case") {
  const auto br = make_two_branch(0, 8);
  const auto r = twirled_trace_distance_general(br.superposition, RFSpec{RFSpec::Coherent{256.0}}, 0.0);
  CHECK(std::abs(r.exact - photon_trace_distance(8, 256.0).exact) < 1e-10);
  CHECK(r.convexity_bound == r.exact);
}

TEST_CASE("general distance matches a dense diagonalization") {
  std::mt19937_64 rng(2024);
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> amps(16);
  for (auto& a : amps) a = std::sqrt(g(rng));
  const auto state = NumberState::normalized(0, amps);
  const auto rf = make_sine_rf(63);
  REQUIRE(state.size() * rf.size() == 1024);
  const double t = twirled_trace_distance_general(state, RFSpec{RFSpec::Sine{63}}, 4.0).exact;
  CHECK(t > 0.0);
  CHECK(t < 0.5);
  CHECK(std::abs(t - dense_general_distance(state, rf, 4.0)) < 1e-9);
}

TEST_CASE("mixed RF distance lies below the convexity bound") {
  const auto state = NumberState::normalized(0, {0.5, 0.1, 0.4, 0.3, 0.6});
  RFSpec rf{RFSpec::Mixture{{0.3, 0.7}, {RFSpec{RFSpec::Coherent{9.0}}, RFSpec{RFSpec::Sine{12}}}}};
  const auto r = twirled_trace_distance_general(state, rf, 1.5);
  CHECK(r.exact <= r.convexity_bound + 1e-12);
  const double a = twirled_trace_distance_general(state, RFSpec{RFSpec::Coherent{9.0}}, 1.5).exact;
  const double b = twirled_trace_distance_general(state, RFSpec{RFSpec::Sine{12}}, 1.5).exact;
  CHECK(r.convexity_bound == doctest::Approx(0.3 * a + 0.7 * b).epsilon(1e-12));
}

TEST_CASE("oversized joint problems are rejected") {
  setenv("MACROCERT_MAX_DIM", "500", 1);
  const auto state = NumberState::normalized(0, std::vector<double>(16, 1.0));
  CHECK_THROWS_AS(twirled_trace_distance_general(state, RFSpec{RFSpec::Sine{63}}, 1.0), SizingError);
  unsetenv("MACROCERT_MAX_DIM");
}

TEST_CASE("variance bound values") {
  const auto coh = variance_bound(RFSpec{RFSpec::Coherent{64.0}}, 1.0, 16);
  CHECK(coh.rf_variance_avg == doctest::Approx(64.0).epsilon(1e-9));
  CHECK(coh.bound == doctest::Approx(std::sqrt(64.0 / 256.0)).epsilon(1e-9));
  CHECK_FALSE(coh.exact.has_value());

  const auto fock = variance_bound(RFSpec{RFSpec::Custom{NumberState::normalized(3, {1.0})}}, 0.5, 4,
                                   make_two_branch(0, 4).superposition);
  CHECK(fock.bound == 0.0);
  REQUIRE(fock.exact.has_value());
  CHECK(*fock.exact < 1e-14);

  // Size N^(2 - eps) with eps = 0.5 at beta = 1.
  const auto big = variance_bound(RFSpec{RFSpec::Coherent{1e6}}, 1.0, 10000);
  CHECK(big.bound == doctest::Approx(0.1).epsilon(1e-8));
  const auto mid = variance_bound(RFSpec{RFSpec::Coherent{1000.0}}, 1.0, 100, make_two_branch(0, 100).superposition);
  CHECK(mid.bound == doctest::Approx(std::sqrt(0.1)).epsilon(1e-8));
  CHECK(*mid.exact <= mid.bound + 1e-10);

  CHECK_THROWS_AS(variance_bound(RFSpec{RFSpec::Coherent{4.0}}, 0.0, 4), DomainError);
  CHECK_THROWS_AS(variance_bound(RFSpec{RFSpec::Coherent{4.0}}, 1.0, 0), DomainError);
}

TEST_CASE("variance bound dominates on random instances") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_instance(rng);
    const auto rep = variance_bound(inst.rf, inst.beta, inst.N, inst.state);
    CHECK(*rep.exact <= rep.bound + 1e-10);
  }
}

TEST_CASE("random instances are reproducible") {
  std::mt19937_64 a(77), b(77);
  for (int i = 0; i < 5; ++i) {
    const auto x = random_instance(a);
    const auto y = random_instance(b);
    CHECK(x.beta == y.beta);
    CHECK(x.N == y.N);
    CHECK(x.state.size() == y.state.size());
    CHECK(x.N == static_cast<std::int64_t>(x.state.size()) - 1);
  }
}

TEST_CASE("per-sector infidelity is bounded by the sector variance") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(2 + rng() % 10);
    for (auto& x : a) x = u(rng);
    const auto state = NumberState::normalized(0, a);
    const auto rf = trial % 2 == 0 ? make_coherent_rf(20.0) : make_sine_rf(30);
    const double sigma = 0.5 + trial * 0.3;
    for (const auto& c : sector_fidelity_chain(state, rf, sigma)) {
      CHECK(c.infidelity >= -1e-12);
      CHECK(c.infidelity <= c.variance_term + 1e-12);
    }
  }
}

TEST_CASE("sine RF certifies with linear size while coherent RF fails") {
  const auto sine = sine_scaling_curve(2.0, {8, 16, 32, 64});
  for (const auto& p : sine) {
    CHECK(p.t > 0.3);
    CHECK(p.rf_mean == doctest::Approx(2.0 * static_cast<double>(p.N)));
  }
  const auto coh = coherent_contrast_curve(2.0, {8, 16, 32, 64});
  CHECK(coh.back().t < 0.05);
  for (std::size_t i = 1; i < coh.size(); ++i) CHECK(coh[i].t < coh[i - 1].t);

  for (const auto& p : sine_scaling_curve(0.0, {1, 4, 9})) CHECK(p.t == 0.0);
  CHECK_THROWS_AS(sine_scaling_curve(-1.0, {4}), DomainError);
}
