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

#include "macrocert/number_states.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "macrocert/errors.hpp"

namespace macrocert {
namespace {

constexpr std::size_t kDefaultMaxDimension = 4'000'000;

void check_window(std::size_t size, const char* what) {
  if (size > max_state_dimension()) {
    throw SizingError(std::string(what) + ": window of " + std::to_string(size) +
                      " amplitudes exceeds the maximum state dimension " +
                      std::to_string(max_state_dimension()));
  }
}

// Poisson log-pmf.
double log_poisson(double mean, std::int64_t n) {
  return static_cast<double>(n) * std::log(mean) - mean - std::lgamma(static_cast<double>(n) + 1.0);
}

void flatten(const RFSpec& spec, double weight, double tail, std::vector<WeightedState>& out) {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RFSpec::Coherent>) {
          out.push_back({weight, make_coherent_rf(k.mean_photon, tail)});
        } else if constexpr (std::is_same_v<K, RFSpec::SpinCoherent>) {
          out.push_back({weight, make_spin_coherent_rf(k.M)});
        } else if constexpr (std::is_same_v<K, RFSpec::Sine>) {
          out.push_back({weight, make_sine_rf(k.N)});
        } else if constexpr (std::is_same_v<K, RFSpec::GaussianGrid>) {
          out.push_back({weight, make_gaussian_grid_rf(k.sigma_over_step, k.window_halfwidth)});
        } else if constexpr (std::is_same_v<K, RFSpec::Custom>) {
          out.push_back({weight, k.state});
        } else {
          for (std::size_t i = 0; i < k.components.size(); ++i) {
            flatten(k.components[i], weight * k.weights[i], tail, out);
          }
        }
      },
      spec.kind);
}

}  // namespace

std::size_t max_state_dimension() {
  if (const char* env = std::getenv("MACROCERT_MAX_DIM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxDimension;
}

NumberState NumberState::normalized(std::int64_t offset, std::vector<double> amplitudes) {
  if (amplitudes.empty()) throw DomainError("NumberState: empty amplitude vector");
  long double norm2 = 0.0L;
  for (double a : amplitudes) {
    if (!std::isfinite(a)) throw DomainError("NumberState: non-finite amplitude");
    norm2 += static_cast<long double>(a) * a;
  }
  if (norm2 <= 0.0L) throw DomainError("NumberState: zero vector cannot be normalized");
  const long double inv = 1.0L / std::sqrt(norm2);
  for (double& a : amplitudes) a = static_cast<double>(a * inv);
  return NumberState(offset, std::move(amplitudes));
}

std::vector<std::int64_t> NumberState::support() const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (amplitudes_[i] != 0.0) out.push_back(offset_ + static_cast<std::int64_t>(i));
  }
  return out;
}

double NumberState::mean() const {
  long double m = 0.0L;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    m += static_cast<long double>(amplitudes_[i]) * amplitudes_[i] * static_cast<long double>(i);
  }
  return static_cast<double>(m + offset_);
}

double NumberState::variance() const {
  // Relative to the window start so large offsets do not cost precision.
  long double m1 = 0.0L;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    m1 += static_cast<long double>(amplitudes_[i]) * amplitudes_[i] * static_cast<long double>(i);
  }
  long double v = 0.0L;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    const long double d = static_cast<long double>(i) - m1;
    v += static_cast<long double>(amplitudes_[i]) * amplitudes_[i] * d * d;
  }
  return static_cast<double>(v);
}

MixtureEnsemble::MixtureEnsemble(std::vector<WeightedState> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("MixtureEnsemble: no components");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight >= 0.0 && c.weight <= 1.0)) {
      throw DomainError("MixtureEnsemble: weight outside [0, 1]");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("MixtureEnsemble: weights sum to " + std::to_string(total));
  }
}

MixtureEnsemble MixtureEnsemble::pure(NumberState state) {
  return MixtureEnsemble({WeightedState{1.0, std::move(state)}});
}

double MixtureEnsemble::average_variance() const {
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * c.state.variance();
  return v;
}

void validate(const RFSpec& spec) {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RFSpec::Coherent>) {
          if (!(k.mean_photon >= 0.0) || !std::isfinite(k.mean_photon)) {
            throw DomainError("coherent RF: mean_photon must be finite and >= 0");
          }
        } else if constexpr (std::is_same_v<K, RFSpec::SpinCoherent>) {
          if (k.M < 1) throw DomainError("spin-coherent RF: M must be >= 1");
        } else if constexpr (std::is_same_v<K, RFSpec::Sine>) {
          if (k.N < 0) throw DomainError("sine RF: N must be >= 0");
        } else if constexpr (std::is_same_v<K, RFSpec::GaussianGrid>) {
          if (!(k.sigma_over_step > 0.0)) throw DomainError("gaussian RF: sigma_over_step must be > 0");
          if (k.window_halfwidth < 1) throw DomainError("gaussian RF: window_halfwidth must be >= 1");
        } else if constexpr (std::is_same_v<K, RFSpec::Custom>) {
          // NumberState is normalized by construction.
        } else {
          if (k.weights.size() != k.components.size() || k.components.empty()) {
            throw DomainError("mixture RF: weights and components must be non-empty and aligned");
          }
          double total = 0.0;
          for (double w : k.weights) {
            if (!(w >= 0.0 && w <= 1.0)) throw DomainError("mixture RF: weight outside [0, 1]");
            total += w;
          }
          if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture RF: weights must sum to 1");
          for (const auto& c : k.components) validate(c);
        }
      },
      spec.kind);
}

MixtureEnsemble realize(const RFSpec& spec, double tail_mass_bound) {
  validate(spec);
  std::vector<WeightedState> out;
  flatten(spec, 1.0, tail_mass_bound, out);
  // Re-sum to absorb rounding from nested weight products.
  double total = 0.0;
  for (const auto& c : out) total += c.weight;
  for (auto& c : out) c.weight /= total;
  return MixtureEnsemble(std::move(out));
}

NumberState make_coherent_rf(double mean_photon, double tail_mass_bound) {
  if (!(mean_photon >= 0.0) || !std::isfinite(mean_photon)) {
    throw DomainError("make_coherent_rf: mean_photon must be finite and >= 0");
  }
  if (!(tail_mass_bound > 0.0 && tail_mass_bound <= 1e-6)) {
    throw DomainError("make_coherent_rf: tail_mass_bound must lie in (0, 1e-6]");
  }
  if (mean_photon == 0.0) return NumberState::normalized(0, {1.0});

  const double half_tail = 0.5 * tail_mass_bound;
  const auto mode = static_cast<std::int64_t>(std::floor(mean_photon));
  const std::size_t max_dim = max_state_dimension();

  // Right edge: beyond the mode q_{n+1}/q_n = mu/(n+1) < 1, so the tail past
  // `hi` is bounded by a geometric series starting at q_{hi+1}.
  std::int64_t hi = mode;
  for (;;) {
    const double ratio = mean_photon / static_cast<double>(hi + 2);
    const double bound = std::exp(log_poisson(mean_photon, hi + 1)) / (1.0 - ratio);
    if (ratio < 1.0 && bound < half_tail) break;
    ++hi;
    if (static_cast<std::size_t>(hi - mode) > max_dim) {
      throw SizingError("make_coherent_rf: window exceeds the maximum state dimension");
    }
  }
  // Left edge: below the mode q_{n-1}/q_n = n/mu < 1.
  std::int64_t lo = mode;
  while (lo > 0) {
    const double ratio = static_cast<double>(lo - 1) / mean_photon;
    const double bound = std::exp(log_poisson(mean_photon, lo - 1)) / (1.0 - ratio);
    if (ratio < 1.0 && bound < half_tail) break;
    --lo;
  }
  const auto size = static_cast<std::size_t>(hi - lo + 1);
  check_window(size, "make_coherent_rf");

  std::vector<double> amps(size);
  for (std::size_t i = 0; i < size; ++i) {
    amps[i] = std::exp(0.5 * log_poisson(mean_photon, lo + static_cast<std::int64_t>(i)));
  }
  return NumberState::normalized(lo, std::move(amps));
}

NumberState make_spin_coherent_rf(std::int64_t M) {
  if (M < 1) throw DomainError("make_spin_coherent_rf: M must be >= 1");
  check_window(static_cast<std::size_t>(M) + 1, "make_spin_coherent_rf");
  const double m = static_cast<double>(M);
  const double log_c0 = std::lgamma(m + 1.0) - m * std::numbers::ln2;
  std::vector<double> amps(static_cast<std::size_t>(M) + 1);
  for (std::int64_t j = 0; j <= M; ++j) {
    const double jj = static_cast<double>(j);
    amps[static_cast<std::size_t>(j)] =
        std::exp(0.5 * (log_c0 - std::lgamma(jj + 1.0) - std::lgamma(m - jj + 1.0)));
  }
  // Make the palindrome exact; the two halves are computed independently.
  for (std::size_t j = 0, k = amps.size() - 1; j < k; ++j, --k) amps[k] = amps[j];
  return NumberState::normalized(0, std::move(amps));
}

NumberState make_sine_rf(std::int64_t N) {
  if (N < 0) throw DomainError("make_sine_rf: N must be >= 0");
  check_window(static_cast<std::size_t>(N) + 1, "make_sine_rf");
  const double denom = static_cast<double>(N) + 2.0;
  const double scale = std::sqrt(2.0 / denom);
  std::vector<double> amps(static_cast<std::size_t>(N) + 1);
  for (std::int64_t n = 0; n <= N; ++n) {
    amps[static_cast<std::size_t>(n)] =
        scale * std::sin(static_cast<double>(n + 1) * std::numbers::pi / denom);
  }
  for (std::size_t j = 0, k = amps.size() - 1; j < k; ++j, --k) amps[k] = amps[j];
  return NumberState::normalized(0, std::move(amps));
}

NumberState make_gaussian_grid_rf(double sigma_over_step, std::int64_t window_halfwidth) {
  if (!(sigma_over_step > 0.0) || !std::isfinite(sigma_over_step)) {
    throw DomainError("make_gaussian_grid_rf: sigma_over_step must be > 0");
  }
  if (static_cast<double>(window_halfwidth) < 8.0 * sigma_over_step) {
    throw SizingError("make_gaussian_grid_rf: window_halfwidth must be at least 8 sigma "
                      "(truncated mass would exceed 1e-10)");
  }
  check_window(2 * static_cast<std::size_t>(window_halfwidth) + 1, "make_gaussian_grid_rf");
  const double inv = 1.0 / (4.0 * sigma_over_step * sigma_over_step);
  std::vector<double> amps(2 * static_cast<std::size_t>(window_halfwidth) + 1);
  for (std::int64_t n = -window_halfwidth; n <= window_halfwidth; ++n) {
    const double x = static_cast<double>(n);
    amps[static_cast<std::size_t>(n + window_halfwidth)] = std::exp(-x * x * inv);
  }
  return NumberState::normalized(-window_halfwidth, std::move(amps));
}

TwoBranch make_two_branch(std::int64_t n_low, std::int64_t n_high) {
  if (n_low == n_high) throw DomainError("make_two_branch: branches coincide");
  if (n_low > n_high) throw DomainError("make_two_branch: n_low must be below n_high");
  const auto width = static_cast<std::size_t>(n_high - n_low) + 1;
  check_window(width, "make_two_branch");
  std::vector<double> amps(width, 0.0);
  amps.front() = 1.0;
  amps.back() = 1.0;
  NumberState sup = NumberState::normalized(n_low, std::move(amps));
  MixtureEnsemble mix({WeightedState{0.5, NumberState::normalized(n_low, {1.0})},
                       WeightedState{0.5, NumberState::normalized(n_high, {1.0})}});
  return TwoBranch{std::move(sup), std::move(mix)};
}

}  // namespace macrocert
