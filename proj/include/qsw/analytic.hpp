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

// Closed-form results for the walk with the global dissipator: the segment
// distribution from the sine eigenbasis, its long-time limit, the
// infinite-line distribution as a double integral, its Taylor coefficients,
// and the moments that follow from them.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace qsw {

/// Spectrum of the tridiagonal Toeplitz operator L_S = A / 2 on n vertices.
/// eigenvalues(i) = cos((i+1) pi / (n+1)); column i of eigenvectors is the
/// matching unit eigenvector, entry (j, i) = sqrt(2/(n+1)) sin((i+1)(j+1) pi/(n+1)).
struct EigenSystem {
  int n = 0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

EigenSystem segment_eigensystem(int n);

/// Diagonal of rho(t) on a segment of n vertices started in |l><l|
/// (labels 1..n).
Eigen::VectorXd segment_distribution(int n, int l, double omega, double t);

/// t -> infinity limit of segment_distribution for omega in (0, 1].
Eigen::VectorXd asymptotic_distribution(int n, int l);

/// Same limit with every entry written over the common denominator 2(n+1).
struct RationalDistribution {
  std::vector<std::int64_t> numerators;
  std::int64_t denominator = 1;
};
RationalDistribution asymptotic_distribution_exact(int n, int l);

/// Smallest per-axis Gauss-Legendre node count that resolves the integrand
/// of line_distribution for this (k, omega, t).
int required_quadrature_nodes(int k, double omega, double t);

/// max(64, ceil(8 (1 + t)), required_quadrature_nodes(k, omega, t)).
int default_quadrature_nodes(int k, double omega, double t);

/// <k|rho(t)|k> on the infinite line started in |0><0|, by tensor-product
/// Gauss-Legendre quadrature of the double integral over the Brillouin zone.
/// nodes = 0 picks default_quadrature_nodes. Throws NumericalError when
/// nodes < required_quadrature_nodes.
double line_distribution(int k, double omega, double t, int nodes = 0);

/// line_distribution for every k in [-k_max, k_max] (index k + k_max),
/// sharing one kernel evaluation. nodes = 0 picks the default for k_max.
Eigen::VectorXd line_distribution_profile(int k_max, double omega, double t, int nodes = 0);

/// Exact binomial coefficient; throws beyond n = 62.
std::int64_t binomial_exact(int n, int k);

/// Binomial coefficient as a double: exact integer arithmetic up to n = 30,
/// log-gamma above.
double binomial(int n, int k);

/// Taylor coefficient A_{n,k} of rho_kk(t) at omega = 1:
/// (-1)^(n+k) / 8^n * C(2n, n) * C(2n, n+k), zero for |k| > n.
double series_coefficient_A(int n, int k);

/// 8^n * A_{n,k} as an exact integer. Valid for n <= 15.
std::int64_t series_coefficient_A_scaled(int n, int k);

/// Taylor coefficient B_{n,k}(omega) for general omega:
/// sum_l C(n, 2l) 8^l omega^(n-2l) (1-omega)^(2l) A_{n-l,k}.
double series_coefficient_B(int n, int k, double omega);

struct SeriesOptions {
  double tol = 1e-15;            // stop once |term| < tol |sum| three orders running
  int max_order = 300;
  double max_t = 5.0;            // refuse larger t; cancellation ruins the sum
  double cancellation_limit = 1e6;
};

/// rho_kk(t) = sum_n B_{n,k}(omega) t^n / n!. Throws NumericalError when t
/// exceeds options.max_t, when the running partial sums exceed
/// cancellation_limit times the final value, or when max_order is reached
/// without convergence.
double line_distribution_series(int k, double omega, double t, const SeriesOptions& options = {});

/// Second central moment on the line: 2 (omega - 1)^2 t^2 + omega t / 2.
double mu2_closed(double omega, double t);

struct LeadingTerm {
  double coefficient = 0.0;
  int power = 0;
};

/// Limit of mu_m(t) / t^power for even m. power = m when omega < 1 and
/// m / 2 when omega = 1.
LeadingTerm moment_leading_coefficient(int m, double omega);

/// Coefficients c_0..c_m of mu_m(t) = sum_j c_j t^j on the line, obtained by
/// summing k^m against the B coefficients order by order.
std::vector<double> moment_polynomial(int m, double omega);

}  // namespace qsw
