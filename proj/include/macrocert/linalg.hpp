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

// Small dense helpers shared by the modules. All matrices here are real
// symmetric; eigenvalues come from Eigen's tridiagonal QR solver.

#include <Eigen/Dense>
#include <vector>

namespace macrocert::linalg {

/// Eigenvalues of a real symmetric matrix, descending.
std::vector<double> symmetric_eigenvalues_desc(const Eigen::MatrixXd& m);

/// Sum of absolute eigenvalues of a real symmetric matrix.
double trace_norm_symmetric(const Eigen::MatrixXd& m);

/// Largest absolute entry of m - m^T.
double asymmetry(const Eigen::MatrixXd& m);

/// Smallest eigenvalue of a real symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& m);

}  // namespace macrocert::linalg
