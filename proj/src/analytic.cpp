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

#include "qsw/analytic.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "qsw/errors.hpp"
#include "qsw/quadrature.hpp"

namespace qsw {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kExactBinomialLimit = 30;
constexpr double kImaginaryTolerance = 1e-10;

void check_omega(double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw InvalidArgument(fmt::format("omega must lie in [0, 1], got {}", omega));
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument(fmt::format("time must be finite and >= 0, got {}", t));
  }
}

void check_vertex(int n, int l) {
  if (n < 1) throw InvalidArgument(fmt::format("segment size must be >= 1, got {}", n));
  if (l < 1 || l > n) {
    throw InvalidArgument(fmt::format("initial vertex {} outside [1, {}]", l, n));
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double sign_of_parity(int p) { return (p % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

EigenSystem segment_eigensystem(int n) {
  if (n < 1) throw InvalidArgument(fmt::format("segment size must be >= 1, got {}", n));
  EigenSystem es;
  es.n = n;
  es.eigenvalues.resize(n);
  es.eigenvectors.resize(n, n);
  const double scale = std::sqrt(2.0 / (n + 1));
  for (int i = 0; i < n; ++i) {
    es.eigenvalues(i) = std::cos((i + 1) * kPi / (n + 1));
    for (int j = 0; j < n; ++j) {
      es.eigenvectors(j, i) = scale * std::sin(static_cast<double>(i + 1) * (j + 1) * kPi / (n + 1));
    }
  }
  return es;
}

Eigen::VectorXd segment_distribution(int n, int l, double omega, double t) {
  check_vertex(n, l);
  check_omega(omega);
  check_time(t);
  const EigenSystem es = segment_eigensystem(n);
  const Eigen::MatrixXd& v = es.eigenvectors;
  const Eigen::VectorXd& lam = es.eigenvalues;

  // rho_kk = sum_ij V_ki V_kj W_ij with W_ij = V_li V_lj E_ij.
  Eigen::MatrixXd w_re(n, n);
  Eigen::MatrixXd w_im(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = lam(i) - lam(j);
      const double amp = v(l - 1, i) * v(l - 1, j) * std::exp(-0.5 * t * omega * d * d);
      const double phase = 2.0 * t * (1.0 - omega) * d;
      w_re(i, j) = amp * std::cos(phase);
      w_im(i, j) = amp * std::sin(phase);
    }
  }
  const Eigen::MatrixXd vw_re = v * w_re;
  const Eigen::MatrixXd vw_im = v * w_im;
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    out(k) = vw_re.row(k).dot(v.row(k));
    const double im = vw_im.row(k).dot(v.row(k));
    if (std::abs(im) > kImaginaryTolerance) {
      throw NumericalError(fmt::format("segment distribution: imaginary residue {:.3e} at k = {}",
                                       im, k + 1));
    }
  }
  return out;
}

RationalDistribution asymptotic_distribution_exact(int n, int l) {
  check_vertex(n, l);
  RationalDistribution out;
  out.denominator = 2 * static_cast<std::int64_t>(n + 1);
  out.numerators.assign(static_cast<std::size_t>(n), 2);
  if (n % 2 == 1 && l == (n + 1) / 2) {
    out.numerators[static_cast<std::size_t>(l - 1)] = 4;
  } else {
    out.numerators[static_cast<std::size_t>(l - 1)] = 3;
    out.numerators[static_cast<std::size_t>(n - l)] = 3;
  }
  return out;
}

Eigen::VectorXd asymptotic_distribution(int n, int l) {
  const RationalDistribution exact = asymptotic_distribution_exact(n, l);
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    out(k) = static_cast<double>(exact.numerators[static_cast<std::size_t>(k)]) /
             static_cast<double>(exact.denominator);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Infinite line by quadrature.

int required_quadrature_nodes(int k, double omega, double t) {
  check_omega(omega);
  check_time(t);
  // Fourier bandwidth of the integrand along one axis: the cos(kx) factor,
  // the phase 2(1-w)t cos x, and a Gaussian of width ~ (w t)^(-1/2).
  const double bandwidth =
      std::abs(k) + 2.0 * (1.0 - omega) * t + 8.0 * std::sqrt(omega * t);
  return 16 + static_cast<int>(std::ceil(0.8 * bandwidth));
}

int default_quadrature_nodes(int k, double omega, double t) {
  const int rule = std::max(64, static_cast<int>(std::ceil(8.0 * (1.0 + t))));
  return std::max(rule, required_quadrature_nodes(k, omega, t));
}

double line_distribution(int k, double omega, double t, int nodes) {
  check_omega(omega);
  check_time(t);
  if (nodes == 0) nodes = default_quadrature_nodes(k, omega, t);
  if (nodes < 8) throw InvalidArgument(fmt::format("need at least 8 nodes, got {}", nodes));
  const int required = required_quadrature_nodes(k, omega, t);
  if (nodes < required) {
    throw NumericalError(fmt::format(
        "line distribution: {} nodes per axis cannot resolve k = {}, omega = {}, t = {}; need {}",
        nodes, k, omega, t, required));
  }
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;

  // The integrand is even in x and in y, so integrate over [0, pi]^2.
  const GaussLegendreRule rule(nodes, 0.0, kPi);
  const int n = rule.size();
  Eigen::VectorXd c(n);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) {
    c(i) = std::cos(rule.node(i));
    u(i) = rule.weight(i) * std::cos(k * rule.node(i));
  }
  double re = 0.0;
  double im = 0.0;
  const double damping = 0.5 * omega * t;
  const double freq = 2.0 * t * (1.0 - omega);
  for (int i = 0; i < n; ++i) {
    double row_re = 0.0;
    double row_im = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = c(i) - c(j);
      const double amp = u(j) * std::exp(-damping * d * d);
      row_re += amp * std::cos(freq * d);
      row_im += amp * std::sin(freq * d);
    }
    re += u(i) * row_re;
    im += u(i) * row_im;
  }
  re /= kPi * kPi;
  im /= kPi * kPi;
  if (std::abs(im) > kImaginaryTolerance) {
    throw NumericalError(fmt::format("line distribution: imaginary residue {:.3e}", im));
  }
  return re;
}

Eigen::VectorXd line_distribution_profile(int k_max, double omega, double t, int nodes) {
  check_omega(omega);
  check_time(t);
  if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
  if (nodes == 0) nodes = default_quadrature_nodes(k_max, omega, t);
  if (nodes < 8) throw InvalidArgument(fmt::format("need at least 8 nodes, got {}", nodes));
  const int required = required_quadrature_nodes(k_max, omega, t);
  if (nodes < required) {
    throw NumericalError(fmt::format(
        "line profile: {} nodes per axis cannot resolve k_max = {}, omega = {}, t = {}; need {}",
        nodes, k_max, omega, t, required));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * k_max + 1);
  if (t == 0.0) {
    out(k_max) = 1.0;
    return out;
  }
  const GaussLegendreRule rule(nodes, 0.0, kPi);
  const int n = rule.size();
  Eigen::MatrixXd kernel(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = std::cos(rule.node(i)) - std::cos(rule.node(j));
      kernel(i, j) = std::exp(-0.5 * omega * t * d * d) * std::cos(2.0 * t * (1.0 - omega) * d);
    }
  }
  Eigen::VectorXd u(n);
  for (int k = 0; k <= k_max; ++k) {
    for (int i = 0; i < n; ++i) u(i) = rule.weight(i) * std::cos(k * rule.node(i));
    const double value = u.dot(kernel * u) / (kPi * kPi);
    out(k_max + k) = value;
    out(k_max - k) = value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Taylor coefficients.

std::int64_t binomial_exact(int n, int k) {
  if (n < 0) throw InvalidArgument("binomial: n must be >= 0");
  if (n > 62) throw InvalidArgument(fmt::format("binomial_exact: n = {} overflows", n));
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::int64_t>(r);
}

double binomial(int n, int k) {
  if (n < 0) throw InvalidArgument("binomial: n must be >= 0");
  if (k < 0 || k > n) return 0.0;
  if (n <= kExactBinomialLimit) return static_cast<double>(binomial_exact(n, k));
  return std::exp(log_binomial(n, k));
}

double series_coefficient_A(int n, int k) {
  if (n < 0) throw InvalidArgument("series order must be >= 0");
  k = std::abs(k);
  if (k > n) return 0.0;
  const double sign = sign_of_parity(n + k);
  if (2 * n <= kExactBinomialLimit) {
    return sign * binomial(2 * n, n) * binomial(2 * n, n + k) / std::pow(8.0, n);
  }
  return sign * std::exp(log_binomial(2 * n, n) + log_binomial(2 * n, n + k) -
                         n * std::log(8.0));
}

std::int64_t series_coefficient_A_scaled(int n, int k) {
  if (n < 0 || n > 15) throw InvalidArgument("exact A coefficients need 0 <= n <= 15");
  k = std::abs(k);
  if (k > n) return 0;
  const std::int64_t mag = binomial_exact(2 * n, n) * binomial_exact(2 * n, n + k);
  return (n + k) % 2 == 0 ? mag : -mag;
}

double series_coefficient_B(int n, int k, double omega) {
  if (n < 0) throw InvalidArgument("series order must be >= 0");
  check_omega(omega);
  k = std::abs(k);
  if (k > n) return 0.0;
  double sum = 0.0;
  const int top = std::min(n / 2, n - k);
  for (int l = 0; l <= top; ++l) {
    sum += binomial(n, 2 * l) * std::pow(8.0, l) * std::pow(omega, n - 2 * l) *
           std::pow(1.0 - omega, 2 * l) * series_coefficient_A(n - l, k);
  }
  return sum;
}

namespace {

// B_{n,k}(omega) t^n / n!, assembled in log space so large orders do not
// overflow before the factorial catches up.
double series_term(int n, int k, double omega, double log_t) {
  double sum = 0.0;
  const int top = std::min(n / 2, n - k);
  const double log_n_fact = std::lgamma(n + 1.0);
  for (int l = 0; l <= top; ++l) {
    const int pw = n - 2 * l;
    if (pw > 0 && omega == 0.0) continue;
    if (l > 0 && omega == 1.0) continue;
    double log_mag = log_binomial(n, 2 * l) + l * std::log(8.0) + log_binomial(2 * (n - l), n - l) +
                     log_binomial(2 * (n - l), n - l + k) - (n - l) * std::log(8.0) +
                     n * log_t - log_n_fact;
    if (pw > 0) log_mag += pw * std::log(omega);
    if (l > 0) log_mag += 2 * l * std::log1p(-omega);
    sum += sign_of_parity(n - l + k) * std::exp(log_mag);
  }
  return sum;
}

}  // namespace

double line_distribution_series(int k, double omega, double t, const SeriesOptions& options) {
  check_omega(omega);
  check_time(t);
  if (!(options.tol > 0.0)) throw InvalidArgument("series tolerance must be > 0");
  if (t > options.max_t) {
    throw NumericalError(fmt::format(
        "series: t = {} is beyond the validity window t <= {}; use the quadrature", t,
        options.max_t));
  }
  k = std::abs(k);
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;

  const double log_t = std::log(t);
  double sum = 0.0;
  double max_partial = 0.0;
  int small = 0;
  for (int n = k; n <= options.max_order; ++n) {
    const double term = series_term(n, k, omega, log_t);
    sum += term;
    max_partial = std::max(max_partial, std::abs(sum));
    // Leading orders can vanish identically (n < 2|k| at omega = 0), so
    // convergence is only judged once the sum has picked up a value.
    small = sum != 0.0 && std::abs(term) < options.tol * std::abs(sum) ? small + 1 : 0;
    if (small >= 3) {
      if (max_partial > options.cancellation_limit * std::abs(sum)) {
        throw NumericalError(fmt::format(
            "series: partial sums reached {:.3e} for a result of {:.3e}; cancellation", max_partial,
            sum));
      }
      return sum;
    }
  }
  throw NumericalError(
      fmt::format("series: no convergence within {} orders (k = {}, omega = {}, t = {})",
                  options.max_order, k, omega, t));
}

// ---------------------------------------------------------------------------
// Moments.

double mu2_closed(double omega, double t) {
  if (!(omega > 0.0 && omega <= 1.0)) {
    throw InvalidArgument(fmt::format("mu2_closed needs omega in (0, 1], got {}", omega));
  }
  check_time(t);
  return 2.0 * (omega - 1.0) * (omega - 1.0) * t * t + 0.5 * omega * t;
}

LeadingTerm moment_leading_coefficient(int m, double omega) {
  check_omega(omega);
  if (m < 2 || m % 2 != 0) {
    throw InvalidArgument(
        fmt::format("moment order must be even and >= 2, got {} (odd moments vanish)", m));
  }
  const int half = m / 2;
  if (omega < 1.0) {
    return {binomial(m, half) * std::pow(omega - 1.0, m), m};
  }
  return {std::tgamma(m + 1.0) / (std::tgamma(half + 1.0) * std::pow(8.0, half)) *
              binomial(m, half),
          half};
}

std::vector<double> moment_polynomial(int m, double omega) {
  check_omega(omega);
  if (m < 0) throw InvalidArgument("moment order must be >= 0");
  std::vector<double> coeffs(static_cast<std::size_t>(m) + 1, 0.0);
  for (int n = 0; n <= m; ++n) {
    double s = 0.0;
    for (int k = -n; k <= n; ++k) s += std::pow(static_cast<double>(k), m) * series_coefficient_B(n, k, omega);
    coeffs[static_cast<std::size_t>(n)] = s / std::tgamma(n + 1.0);
  }
  return coeffs;
}

}  // namespace qsw
