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

// Real-amplitude states over a contiguous window of an integer quantum
// number (photon number, shifted S_Z, grid position), plus the constructors
// for every system and reference-frame state used in the library.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace macrocert {

/// Largest number of amplitudes a single state window may hold. Defaults to
/// 4'000'000; the MACROCERT_MAX_DIM environment variable overrides it.
std::size_t max_state_dimension();

/// Pure state sum_n a_n |n> with real amplitudes on the window
/// [offset, offset + size). Amplitudes outside the window are exactly zero.
class NumberState {
 public:
  /// Rescales `amplitudes` to unit norm. Throws DomainError when the vector
  /// is empty, has a non-finite entry, or is identically zero.
  static NumberState normalized(std::int64_t offset, std::vector<double> amplitudes);

  std::int64_t offset() const { return offset_; }
  std::int64_t last() const { return offset_ + static_cast<std::int64_t>(amplitudes_.size()) - 1; }
  std::size_t size() const { return amplitudes_.size(); }
  std::span<const double> amplitudes() const { return amplitudes_; }

  /// Amplitude at quantum number n; zero outside the window.
  double operator[](std::int64_t n) const {
    if (n < offset_ || n > last()) return 0.0;
    return amplitudes_[static_cast<std::size_t>(n - offset_)];
  }

  /// Quantum numbers carrying a nonzero amplitude, ascending.
  std::vector<std::int64_t> support() const;

  /// Moments of the distribution n -> a_n^2.
  double mean() const;
  double variance() const;

 private:
  NumberState(std::int64_t offset, std::vector<double> amplitudes)
      : offset_(offset), amplitudes_(std::move(amplitudes)) {}

  std::int64_t offset_ = 0;
  std::vector<double> amplitudes_;
};

struct WeightedState {
  double weight = 0.0;
  NumberState state;
};

/// Convex combination of pure number states, sum_i w_i |s_i><s_i|.
class MixtureEnsemble {
 public:
  /// Throws DomainError unless weights are in [0, 1] and sum to 1 within 1e-12.
  explicit MixtureEnsemble(std::vector<WeightedState> components);
  static MixtureEnsemble pure(NumberState state);

  const std::vector<WeightedState>& components() const { return components_; }

  /// sum_i w_i Var(a^(i)^2).
  double average_variance() const;

 private:
  std::vector<WeightedState> components_;
};

/// Declarative reference-frame description. Realized into states on demand.
struct RFSpec {
  struct Coherent {
    double mean_photon = 0.0;
  };
  struct SpinCoherent {
    std::int64_t M = 1;
  };
  struct Sine {
    std::int64_t N = 0;
  };
  struct GaussianGrid {
    double sigma_over_step = 1.0;
    std::int64_t window_halfwidth = 8;
  };
  struct Custom {
    NumberState state;
  };
  struct Mixture {
    std::vector<double> weights;
    std::vector<RFSpec> components;
  };

  std::variant<Coherent, SpinCoherent, Sine, GaussianGrid, Custom, Mixture> kind;
};

/// Throws DomainError when any parameter is outside its domain.
void validate(const RFSpec& spec);

/// Realizes a spec into a (possibly single-component) ensemble. Nested
/// mixtures are flattened with multiplied weights.
MixtureEnsemble realize(const RFSpec& spec, double tail_mass_bound = 1e-12);

/// Coherent state |alpha> with |alpha|^2 = mean_photon: amplitudes sqrt(q_n),
/// q_n Poisson. The window is chosen so the discarded Poisson mass is below
/// `tail_mass_bound`; the kept part is renormalized.
NumberState make_coherent_rf(double mean_photon, double tail_mass_bound = 1e-12);

/// Spin-coherent state of M spin-1/2 pointing along x. Index j = S_Z + M/2
/// runs over 0..M with amplitude sqrt(2^-M C(M, j)); offset is 0.
NumberState make_spin_coherent_rf(std::int64_t M);

/// sqrt(2/(N+2)) sum_{n=0}^{N} sin((n+1) pi/(N+2)) |n>.
NumberState make_sine_rf(std::int64_t N);

/// Discretized Gaussian wave packet: amplitudes proportional to
/// exp(-n^2 / (4 s^2)) on n = -W..W, so the density has variance s^2.
NumberState make_gaussian_grid_rf(double sigma_over_step, std::int64_t window_halfwidth);

struct TwoBranch {
  NumberState superposition;  // (|n_low> + |n_high>)/sqrt(2)
  MixtureEnsemble mixture;    // (|n_low><n_low| + |n_high><n_high|)/2
};

TwoBranch make_two_branch(std::int64_t n_low, std::int64_t n_high);

}  // namespace macrocert
