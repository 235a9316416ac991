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

#include "doctest.h"
#include "macrocert/errors.hpp"
#include "macrocert/two_copy.hpp"

using namespace macrocert;

TEST_CASE("photon two-copy distance") {
  for (std::int64_t N = 1; N <= 10; ++N) {
    CHECK(photon_two_copy_trace_distance(N) == 0.25);
    CHECK(std::abs(photon_two_copy_numeric(N) - 0.25) < 1e-12);
  }
  CHECK_THROWS_AS(photon_two_copy_trace_distance(0), DomainError);
}

TEST_CASE("two-copy sector probabilities for small N") {
  CHECK(spin_two_copy_delta_pj(1, 0) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(spin_two_copy_delta_pj(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(spin_two_copy_delta_pj(2, 2) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(spin_two_copy_trace_distance(1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(spin_two_copy_delta_pj(3, 4), DomainError);
  CHECK_THROWS_AS(spin_two_copy_delta_pj(3, -1), DomainError);
}

TEST_CASE("two-copy spin distance is a quarter for every size") {
  for (std::int64_t N = 1; N <= 200; ++N) {
    CHECK(std::abs(spin_two_copy_trace_distance(N) - 0.25) < 1e-9);
    double total = 0.0;
    for (const auto& s : spin_two_copy_sectors(N)) total += s.delta_p;
    CHECK(std::abs(total) < 1e-10);
  }
  CHECK(std::abs(spin_two_copy_trace_distance(50) - 0.25) < 1e-10);
}

TEST_CASE("sector list carries doubled angular momentum") {
  const auto s = spin_two_copy_sectors(3);
  REQUIRE(s.size() == 4);
  for (std::size_t J = 0; J < s.size(); ++J) {
    CHECK(s[J].two_J == static_cast<std::int64_t>(2 * J));
    CHECK(s[J].delta_p == doctest::Approx(spin_two_copy_delta_pj(3, static_cast<std::int64_t>(J))));
  }
}

TEST_CASE("brute-force projection matches the combinatorial formula") {
  for (std::int64_t N : {1, 2, 3, 4}) {
    const auto brute = brute_force_spin_two_copy(N);
    REQUIRE(brute.size() == static_cast<std::size_t>(N + 1));
    for (const auto& s : brute) {
      CHECK(std::abs(s.delta_p - spin_two_copy_delta_pj(N, s.two_J / 2)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(brute_force_spin_two_copy(5), SizingError);
}

TEST_CASE("single-copy terms vanish under number dephasing") {
  for (std::int64_t N : {1, 2, 3, 4}) CHECK(std::abs(single_copy_terms_after_sz_dephasing(N)) < 1e-12);
}

TEST_CASE("singlet-pairing states are rotation invariant") {
  const auto rep = relative_dof_invariance_check(100, 5);
  CHECK(rep.norm_heart == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.norm_diamond == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(rep.overlap) < 1e-12);
  CHECK(rep.max_deviation < 1e-10);
  CHECK(rep.samples == 100);
  CHECK(rep.seed == 5);
  CHECK(rep.diamond_norm_with_half == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));

  const auto again = relative_dof_invariance_check(100, 5);
  CHECK(again.max_deviation == rep.max_deviation);
  CHECK_THROWS_AS(relative_dof_invariance_check(0), DomainError);
}
