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

namespace macrocert::constants {

inline constexpr double kAvogadro = 6.02214076e23;  // 1/mol, exact SI value
// One water molecule, 18 g/mol / N_A, rounded to three digits.
inline constexpr double kWaterMoleculeMass = 2.99e-26;  // kg
inline constexpr double kEarthMass = 5.972e24;          // kg
inline constexpr double kMicrogram = 1e-9;              // kg
inline constexpr double kMicrometer = 1e-6;             // m

}  // namespace macrocert::constants
