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

#include "qsw/expm.hpp"

#include <array>
#include <cmath>
#include <fmt/format.h>

#include "qsw/errors.hpp"

namespace qsw {
namespace {

// Largest 1-norm for which the degree-m approximant meets unit roundoff.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};
constexpr std::array<int, 5> kDegree = {3, 5, 7, 9, 13};

constexpr double kPade3[] = {120.0, 60.0, 12.0, 1.0};
constexpr double kPade5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr double kPade7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                             25200.0,    1512.0,    56.0,      1.0};
constexpr double kPade9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                             2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr double kPade13[] = {64764752532480000.0,
                              32382376266240000.0,
                              7771770303897600.0,
                              1187353796428800.0,
                              129060195264000.0,
                              10559470521600.0,
                              670442572800.0,
                              33522128640.0,
                              1323241920.0,
                              40840800.0,
                              960960.0,
                              16380.0,
                              182.0,
                              1.0};

// Builds U (odd part) and V (even part) so that r(A) = (V - U)^{-1} (V + U).
void pade_low(const ComplexMatrix& a, int degree, ComplexMatrix& u, ComplexMatrix& v) {
  const double* b = degree == 3   ? kPade3
                    : degree == 5 ? kPade5
                    : degree == 7 ? kPade7
                                  : kPade9;
  const auto n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix power = ident;
  ComplexMatrix odd = b[1] * ident;
  v = b[0] * ident;
  for (int k = 2; k <= degree; k += 2) {
    power = power * a2;
    odd += b[k + 1] * power;
    v += b[k] * power;
  }
  u.noalias() = a * odd;
}

void pade13(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
  const double* b = kPade13;
  const auto n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  ComplexMatrix inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  ComplexMatrix odd = a6 * inner;
  odd += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  u.noalias() = a * odd;
  inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v.noalias() = a6 * inner;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace

double norm1(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

ComplexMatrix expm(const ComplexMatrix& a, ExpmInfo* info) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm needs a square matrix");
  const auto n = a.rows();
  if (n == 0) return a;

  const double norm = norm1(a);
  if (!std::isfinite(norm)) {
    throw NumericalError(fmt::format("expm: input has non-finite 1-norm ({})", norm));
  }

  ExpmInfo local;
  local.norm1 = norm;
  ComplexMatrix u(n, n);
  ComplexMatrix v(n, n);

  bool done = false;
  for (std::size_t i = 0; i + 1 < kTheta.size(); ++i) {
    if (norm <= kTheta[i]) {
      pade_low(a, kDegree[i], u, v);
      local.pade_order = kDegree[i];
      done = true;
      break;
    }
  }

  int squarings = 0;
  if (!done) {
    if (norm > kTheta.back()) {
      squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta.back())));
    }
    if (squarings > 1000) {
      throw NumericalError(
          fmt::format("expm: 1-norm {:.6e} needs {} squarings; refusing", norm, squarings));
    }
    const ComplexMatrix scaled = a * std::ldexp(1.0, -squarings);
    pade13(scaled, u, v);
    local.pade_order = 13;
  }

  ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) result = result * result;
  local.squarings = squarings;

  if (!result.allFinite()) {
    throw NumericalError(fmt::format(
        "expm: result not finite (1-norm {:.6e}, Pade degree {}, {} squarings)", norm,
        local.pade_order, squarings));
  }
  if (info != nullptr) *info = local;
  return result;
}

}  // namespace qsw
