// Copyright 2026 The qsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

namespace qsw {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct ExpmInfo {
  double norm1 = 0.0;  // 1-norm of the input matrix
  int pade_order = 0;
  int squarings = 0;
};

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant of degree 3, 5, 7, 9 or 13, picked from the 1-norm so the
/// backward error stays at unit roundoff.
///
/// Throws NumericalError if the input is not finite or the norm is too large
/// to square back down (more than 1000 squarings), reporting the norm.
ComplexMatrix expm(const ComplexMatrix& a, ExpmInfo* info = nullptr);

double norm1(const ComplexMatrix& a);

}  // namespace qsw
