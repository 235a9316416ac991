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
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "macrocert/errors.hpp"
#include "macrocert/linalg.hpp"
#include "macrocert/twirl.hpp"

using namespace macrocert;

namespace {

double poisson_pmf(double mu, std::int64_t n) {
  double q = std::exp(-mu);
  for (std::int64_t k = 1; k <= n; ++k) q *= mu / static_cast<double>(k);
  return q;
}

// Dense joint density over rf window x sys window, index = rf_pos * sys_dim + sys_pos.
struct Dense {
  std::int64_t rf_lo, rf_dim, sys_lo, sys_dim;
  Eigen::MatrixXd rho;
};

Dense dense_joint(const std::vector<std::pair<double, NumberState>>& sys, const NumberState& rf,
                  std::int64_t sys_lo, std::int64_t sys_hi) {
  Dense d{rf.offset(), static_cast<std::int64_t>(rf.size()), sys_lo, sys_hi - sys_lo + 1, {}};
  const std::int64_t dim = d.rf_dim * d.sys_dim;
  d.rho = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [w, s] : sys) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    for (std::int64_t a = 0; a < d.rf_dim; ++a) {
      for (std::int64_t b = 0; b < d.sys_dim; ++b) v(a * d.sys_dim + b) = rf[d.rf_lo + a] * s[sys_lo + b];
    }
    d.rho += w * v * v.transpose();
  }
  return d;
}

// Twirl by projecting onto total-label sectors, done entirely on the dense matrix.
double dense_twirled_distance(const Dense& a, const Dense& b) {
  const Eigen::MatrixXd diff = a.rho - b.rho;
  std::map<std::int64_t, std::vector<std::int64_t>> sectors;
  for (std::int64_t i = 0; i < a.rf_dim; ++i) {
    for (std::int64_t j = 0; j < a.sys_dim; ++j) sectors[a.rf_lo + i + a.sys_lo + j].push_back(i * a.sys_dim + j);
  }
  double total = 0.0;
  for (const auto& [k, idx] : sectors) {
    Eigen::MatrixXd blk(idx.size(), idx.size());
    for (std::size_t p = 0; p < idx.size(); ++p) {
      for (std::size_t q = 0; q < idx.size(); ++q) blk(p, q) = diff(idx[p], idx[q]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk, Eigen::EigenvaluesOnly);
    total += es.eigenvalues().cwiseAbs().sum();
  }
  return 0.5 * total;
}

double dense_distance(const Dense& a, const Dense& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.rho - b.rho, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double weight_sum(const BlockDiagonalState& s) {
  double t = 0.0;
  for (const auto& [k, b] : s.blocks()) t += b.weight;
  return t;
}

NumberState random_state(std::mt19937_64& rng, std::int64_t offset, std::size_t len) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(len);
  for (auto& x : a) x = u(rng);
  return NumberState::normalized(offset, a);
}

}  // namespace

TEST_CASE("definite-number RF destroys all coherence") {
  const auto sys = NumberState::normalized(0, {1.0, 0.0, 1.0});
  const auto rf = NumberState::normalized(0, {1.0});
  const auto tw = twirl_pure_joint(sys, rf);
  for (const auto& [k, b] : tw.blocks()) CHECK(b.basis.size() == 1);
  const auto br = make_two_branch(0, 2);
  CHECK(trace_distance_blocks(tw, twirl_mixture_joint(br.mixture, rf)) < 1e-14);
}

TEST_CASE("two-branch blocks against a coherent RF") {
  const double mu = 9.0;
  const std::int64_t N = 3;
  const auto rf = make_coherent_rf(mu);
  const auto br = make_two_branch(0, N);
  const auto sup = twirl_pure_joint(br.superposition, rf);
  const auto mix = twirl_mixture_joint(br.mixture, rf);
  for (std::int64_t K = N; K < 20; ++K) {
    const double qk = rf[K] * rf[K];
    const double qkn = rf[K - N] * rf[K - N];
    CHECK(qk == doctest::Approx(poisson_pmf(mu, K)).epsilon(1e-9));
    const auto& b = sup.block(K);
    REQUIRE(b.basis.size() == 2);
    CHECK(b.basis[0].rf_index == K - N);
    CHECK(b.basis[0].sys_index == N);
    CHECK(b.basis[1].rf_index == K);
    CHECK(b.basis[1].sys_index == 0);
    CHECK(b.weight == doctest::Approx(0.5 * (qk + qkn)).epsilon(1e-12));
    const double s = qk + qkn;
    CHECK(b.matrix(0, 0) == doctest::Approx(qkn / s).epsilon(1e-12));
    CHECK(b.matrix(1, 1) == doctest::Approx(qk / s).epsilon(1e-12));
    CHECK(b.matrix(0, 1) == doctest::Approx(std::sqrt(qk * qkn) / s).epsilon(1e-12));
    const auto& m = mix.block(K);
    CHECK(m.matrix(0, 1) == 0.0);
    CHECK(m.matrix(0, 0) == doctest::Approx(qkn / s).epsilon(1e-12));
    CHECK(m.weight == doctest::Approx(b.weight).epsilon(1e-12));
  }
  CHECK(sup.block(0).basis.size() == 1);
}

TEST_CASE("pure twirl of a number state is idempotent") {
  const auto sys = NumberState::normalized(5, {1.0});
  const auto rf = make_coherent_rf(6.0);
  const auto tw = twirl_pure_joint(sys, rf);
  for (const auto& [k, b] : tw.blocks()) {
    const auto spec = block_spectrum(tw, k);
    CHECK(spec[0] == doctest::Approx(1.0));
  }
  CHECK(trace_distance_blocks(tw, tw) == 0.0);
}

TEST_CASE("sector eigen-ensembles reproduce the twirled state") {
  std::mt19937_64 rng(11);
  const auto sys = random_state(rng, 0, 5);
  const auto rf = make_sine_rf(6);
  const auto tw = twirl_pure_joint(sys, rf);
  std::map<std::int64_t, SectorBlock> copy;
  for (const auto& [k, b] : tw.blocks()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.matrix);
    Eigen::MatrixXd rebuilt = es.eigenvectors() * es.eigenvalues().asDiagonal() * es.eigenvectors().transpose();
    copy.emplace(k, SectorBlock{k, b.basis, b.weight, rebuilt});
  }
  CHECK(trace_distance_blocks(tw, BlockDiagonalState(copy)) < 1e-10);
}

TEST_CASE("twirl is linear in the system state") {
  std::mt19937_64 rng(5);
  const auto a = random_state(rng, 0, 6);
  const auto b = random_state(rng, 2, 5);
  const auto rf = make_coherent_rf(5.0);
  const MixtureEnsemble ens({{0.5, a}, {0.5, b}});
  const auto mixed = twirl_mixture_joint(ens, rf);
  const auto merged = merge_weighted({{0.5, twirl_pure_joint(a, rf)}, {0.5, twirl_pure_joint(b, rf)}});
  REQUIRE(mixed.blocks().size() == merged.blocks().size());
  for (const auto& [k, blk] : mixed.blocks()) {
    const auto basis = blk.basis;
    const Eigen::MatrixXd x = mixed.weighted_on(k, basis);
    const Eigen::MatrixXd y = merged.weighted_on(k, basis);
    CHECK((x - y).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(trace_distance_blocks(mixed, merged) < 1e-12);
}

TEST_CASE("degenerate mixtures reduce to the pure twirl") {
  const auto s = NumberState::normalized(0, {0.6, 0.0, 0.8});
  const auto rf = make_spin_coherent_rf(12);
  const auto pure = twirl_pure_joint(s, rf);
  CHECK(trace_distance_blocks(pure, twirl_mixture_joint(MixtureEnsemble({{1.0, s}}), rf)) < 1e-14);
  CHECK(trace_distance_blocks(pure, twirl_mixture_joint(MixtureEnsemble({{0.5, s}, {0.5, s}}), rf)) < 1e-14);
}

TEST_CASE("weights sum to one and blocks are valid states") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = random_state(rng, static_cast<std::int64_t>(rng() % 4), 2 + rng() % 6);
    const auto rf = make_coherent_rf(1.0 + static_cast<double>(rng() % 30));
    const auto tw = twirl_pure_joint(sys, rf);
    CHECK(std::abs(weight_sum(tw) - 1.0) < 1e-10);
    for (const auto& [k, b] : tw.blocks()) {
      CHECK(std::abs(b.matrix.trace() - 1.0) < 1e-12);
      CHECK(linalg::asymmetry(b.matrix) < 1e-12);
      CHECK(linalg::min_eigenvalue(b.matrix) > -1e-10);
    }
  }
}

TEST_CASE("block trace distance matches a dense sector projection") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const auto a = random_state(rng, 0, 4);
    const auto b = random_state(rng, 1, 4);
    const auto rf = make_sine_rf(3 + static_cast<std::int64_t>(rng() % 8));
    const double blocks = trace_distance_blocks(twirl_pure_joint(a, rf), twirl_pure_joint(b, rf));
    const auto da = dense_joint({{1.0, a}}, rf, 0, 4);
    const auto db = dense_joint({{1.0, b}}, rf, 0, 4);
    CHECK(blocks == doctest::Approx(dense_twirled_distance(da, db)).epsilon(1e-10));
  }
}

TEST_CASE("twirling never increases the trace distance") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_state(rng, 0, 6);
    const auto b1 = random_state(rng, 0, 6);
    const auto b2 = random_state(rng, 2, 4);
    const auto rf = random_state(rng, 0, 1 + rng() % 30);
    const MixtureEnsemble eb({{0.3, b1}, {0.7, b2}});
    const double twirled = trace_distance_blocks(twirl_pure_joint(a, rf), twirl_mixture_joint(eb, rf));
    const auto da = dense_joint({{1.0, a}}, rf, 0, 5);
    const auto db = dense_joint({{0.3, b1}, {0.7, b2}}, rf, 0, 5);
    REQUIRE(da.rho.rows() <= 256);
    CHECK(twirled <= dense_distance(da, db) + 1e-12);
    CHECK(twirled >= 0.0);
    CHECK(twirled <= 1.0);
  }
}

TEST_CASE("photon two-branch distance equals the overlap sum") {
  const auto rf = make_coherent_rf(4.0);
  const auto br = make_two_branch(0, 2);
  const double t = trace_distance_blocks(twirl_pure_joint(br.superposition, rf),
                                         twirl_mixture_joint(br.mixture, rf));
  double sum = 0.0;
  for (int j = 0; j < 200; ++j) sum += 0.5 * std::sqrt(poisson_pmf(4.0, j) * poisson_pmf(4.0, j + 2));
  CHECK(t == doctest::Approx(sum).epsilon(1e-10));
}

TEST_CASE("dephased diagonal is indistinguishable without an RF") {
  const auto s = NumberState::normalized(0, {0.5, 0.5, 0.5, 0.5});
  std::vector<WeightedState> diag;
  for (std::int64_t n = 0; n < 4; ++n) {
    std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
    a.back() = 1.0;
    diag.push_back({0.25, NumberState::normalized(0, a)});
  }
  const auto rf = NumberState::normalized(3, {1.0});
  CHECK(trace_distance_blocks(twirl_pure_joint(s, rf), twirl_mixture_joint(MixtureEnsemble(diag), rf)) < 1e-14);
}

TEST_CASE("block spectrum") {
  const auto br = make_two_branch(0, 2);
  const auto rf = make_coherent_rf(4.0);
  const auto mix = twirl_mixture_joint(br.mixture, rf);
  const auto spec = block_spectrum(mix, 4);
  const double q4 = poisson_pmf(4.0, 4), q2 = poisson_pmf(4.0, 2);
  REQUIRE(spec.size() == 2);
  CHECK(spec[0] == doctest::Approx(q4 / (q4 + q2)).epsilon(1e-9));
  CHECK(spec[1] == doctest::Approx(q2 / (q4 + q2)).epsilon(1e-9));
  CHECK(spec[0] >= spec[1]);

  // q_3 = q_4 for mu = 4 gives an evenly split block.
  const auto mix1 = twirl_mixture_joint(make_two_branch(0, 1).mixture, rf);
  const auto even = block_spectrum(mix1, 4);
  CHECK(even[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(even[1] == doctest::Approx(0.5).epsilon(1e-9));

  const auto pure = twirl_pure_joint(br.superposition, rf);
  for (const auto& [k, b] : pure.blocks()) {
    const auto sp = block_spectrum(pure, k);
    CHECK(sp[0] == doctest::Approx(1.0).epsilon(1e-12));
    double total = 0.0;
    for (double e : sp) total += e;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(block_spectrum(pure, -5), NotFoundError);
  CHECK_THROWS_AS(pure.block(100000), NotFoundError);
}

TEST_CASE("tiny sectors are dropped and the rest renormalized") {
  std::map<std::int64_t, SectorBlock> m;
  m.emplace(0, SectorBlock{0, {{0, 0}}, 1.0, Eigen::MatrixXd::Identity(1, 1)});
  m.emplace(1, SectorBlock{1, {{1, 0}}, 1e-17, Eigen::MatrixXd::Identity(1, 1)});
  const BlockDiagonalState s(m);
  CHECK(s.contains(0));
  CHECK_FALSE(s.contains(1));
  CHECK(s.block(0).weight == doctest::Approx(1.0));
}
