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

#include "macrocert/general_macro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "macrocert/errors.hpp"
#include "macrocert/twirl.hpp"

namespace macrocert {
namespace {

double dephasing_factor(std::int64_t gap, double sigma) {
  if (gap == 0) return 1.0;
  if (sigma == 0.0) return 0.0;
  if (std::isinf(sigma)) return 1.0;
  const double g = static_cast<double>(gap);
  return std::exp(-g * g / (2.0 * sigma * sigma));
}

SupportDensity dephased_density(const NumberState& state, double sigma) {
  SupportDensity d = density_of(state);
  const auto n = static_cast<Eigen::Index>(d.support.size());
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      d.rho(a, b) *= dephasing_factor(d.support[static_cast<std::size_t>(a)] - d.support[static_cast<std::size_t>(b)], sigma);
    }
  }
  return d;
}

void check_sizes(const NumberState& state, const MixtureEnsemble& rf) {
  std::size_t widest = 0;
  for (const auto& c : rf.components()) widest = std::max(widest, c.state.size());
  const double joint = static_cast<double>(state.size()) * static_cast<double>(widest);
  if (joint > static_cast<double>(max_state_dimension())) {
    throw SizingError("twirled_trace_distance_general: joint dimension exceeds the maximum state dimension");
  }
}

double distance_against(const SupportDensity& pure, const SupportDensity& dephased, const MixtureEnsemble& rf) {
  return trace_distance_blocks(twirl_density_joint(pure, rf), twirl_density_joint(dephased, rf));
}

// Dirichlet(1) weights via normalized exponential draws.
std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t k) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) {
    x = g(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

RFSpec random_pure_rf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  switch (kind(rng)) {
    case 0:
      return RFSpec{RFSpec::Coherent{std::uniform_real_distribution<double>(1.0, 40.0)(rng)}};
    case 1:
      return RFSpec{RFSpec::SpinCoherent{std::uniform_int_distribution<std::int64_t>(1, 80)(rng)}};
    default:
      return RFSpec{RFSpec::Sine{std::uniform_int_distribution<std::int64_t>(1, 80)(rng)}};
  }
}

}  // namespace

DephasedState gaussian_dephase(const NumberState& state, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gaussian_dephase: sigma must be positive");
  const auto n = static_cast<Eigen::Index>(state.size());
  const auto amps = state.amplitudes();
  DephasedState out{state, sigma, Eigen::MatrixXd(n, n)};
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      out.matrix(a, b) = amps[static_cast<std::size_t>(a)] * amps[static_cast<std::size_t>(b)] *
                         dephasing_factor(a - b, sigma);
    }
  }
  return out;
}

GeneralDistance twirled_trace_distance_general(const NumberState& state, const RFSpec& rf, double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("twirled_trace_distance_general: sigma must be non-negative");
  const MixtureEnsemble ens = realize(rf);
  check_sizes(state, ens);
  const SupportDensity pure = density_of(state);
  const SupportDensity dephased = dephased_density(state, sigma);
  GeneralDistance out;
  out.exact = distance_against(pure, dephased, ens);
  if (ens.components().size() == 1) {
    out.convexity_bound = out.exact;
  } else {
    for (const auto& c : ens.components()) {
      out.convexity_bound += c.weight * distance_against(pure, dephased, MixtureEnsemble::pure(c.state));
    }
  }
  return out;
}

BoundReport variance_bound(const RFSpec& rf, double beta, std::int64_t N, const std::optional<NumberState>& state) {
  if (!(beta > 0.0)) throw DomainError("variance_bound: beta must be positive");
  if (N < 1) throw DomainError("variance_bound: N must be at least 1");
  const MixtureEnsemble ens = realize(rf);
  BoundReport r;
  r.beta = beta;
  r.rf_variance_avg = ens.average_variance();
  const double sigma = std::pow(static_cast<double>(N), beta);
  r.bound = std::sqrt(std::max(0.0, r.rf_variance_avg)) / sigma;
  if (state) r.exact = twirled_trace_distance_general(*state, rf, sigma).exact;
  return r;
}

std::vector<SectorFidelityCheck> sector_fidelity_chain(const NumberState& state, const NumberState& rf, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sector_fidelity_chain: sigma must be positive");
  const MixtureEnsemble ens = MixtureEnsemble::pure(rf);
  const BlockDiagonalState pure = twirl_density_joint(density_of(state), ens);
  const BlockDiagonalState dephased = twirl_density_joint(dephased_density(state, sigma), ens);
  std::vector<SectorFidelityCheck> out;
  for (const auto& [label, blk] : pure.blocks()) {
    // Rank-one block: the amplitude vector is the leading eigenvector.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(blk.matrix);
    const Eigen::VectorXd lambda = solver.eigenvectors().col(blk.matrix.rows() - 1);
    const Eigen::MatrixXd rho = dephased.contains(label) ? dephased.block(label).matrix
                                                         : Eigen::MatrixXd::Zero(lambda.size(), lambda.size());
    double mean = 0.0;
    double second = 0.0;
    for (Eigen::Index p = 0; p < lambda.size(); ++p) {
      const double w = lambda(p) * lambda(p);
      const double s = static_cast<double>(blk.basis[static_cast<std::size_t>(p)].sys_index);
      mean += w * s;
      second += w * s * s;
    }
    SectorFidelityCheck c;
    c.label = label;
    c.weight = blk.weight;
    c.infidelity = 1.0 - lambda.dot(rho * lambda);
    c.variance_term = std::max(0.0, second - mean * mean) / (sigma * sigma);
    out.push_back(c);
  }
  return out;
}

std::vector<ScalingPoint> sine_scaling_curve(double c, const std::vector<std::int64_t>& N_list) {
  if (!(c >= 0.0)) throw DomainError("sine_scaling_curve: c must be non-negative");
  std::vector<ScalingPoint> out;
  for (std::int64_t N : N_list) {
    if (N < 1) throw DomainError("sine_scaling_curve: N must be at least 1");
    const auto mean = static_cast<std::int64_t>(std::llround(c * static_cast<double>(N)));
    const NumberState rf = make_sine_rf(2 * mean);
    const TwoBranch branches = make_two_branch(0, N);
    const double t = trace_distance_blocks(twirl_pure_joint(branches.superposition, rf),
                                           twirl_mixture_joint(branches.mixture, rf));
    out.push_back({N, static_cast<double>(mean), t});
  }
  return out;
}

std::vector<ScalingPoint> coherent_contrast_curve(double c, const std::vector<std::int64_t>& N_list) {
  if (!(c >= 0.0)) throw DomainError("coherent_contrast_curve: c must be non-negative");
  std::vector<ScalingPoint> out;
  for (std::int64_t N : N_list) {
    if (N < 1) throw DomainError("coherent_contrast_curve: N must be at least 1");
    const double mean = c * static_cast<double>(N);
    const NumberState rf = make_coherent_rf(mean);
    const TwoBranch branches = make_two_branch(0, N);
    const double t = trace_distance_blocks(twirl_pure_joint(branches.superposition, rf),
                                           twirl_mixture_joint(branches.mixture, rf));
    out.push_back({N, mean, t});
  }
  return out;
}

RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_joint_dimension) {
  std::uniform_int_distribution<std::size_t> components(2, 16);
  std::uniform_real_distribution<double> beta(0.25, 1.5);
  for (;;) {
    const std::size_t k = components(rng);
    std::vector<double> amps = dirichlet(rng, k);
    for (auto& a : amps) a = std::sqrt(a);
    NumberState state = NumberState::normalized(0, std::move(amps));

    RFSpec rf = random_pure_rf(rng);
    if (std::bernoulli_distribution(0.25)(rng)) {
      const double w = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
      rf = RFSpec{RFSpec::Mixture{{w, 1.0 - w}, {rf, random_pure_rf(rng)}}};
    }
    const double b = beta(rng);

    std::size_t widest = 0;
    for (const auto& c : realize(rf).components()) widest = std::max(widest, c.state.size());
    if (state.size() * widest > max_joint_dimension) continue;
    return {std::move(state), std::move(rf), b, static_cast<std::int64_t>(k - 1)};
  }
}

}  // namespace macrocert
