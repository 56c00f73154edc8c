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

#include "qsw/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "qsw/analytic.hpp"
#include "qsw/errors.hpp"

namespace qsw {
namespace {

constexpr Complex kI{0.0, 1.0};

void validate_omega(double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw InvalidArgument(fmt::format("omega must lie in [0, 1], got {}", omega));
  }
}

void validate_state(const ComplexMatrix& m, const StateTolerance& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidState(fmt::format("density matrix must be square and non-empty, got {}x{}",
                                   m.rows(), m.cols()));
  }
  if (!m.allFinite()) throw InvalidState("density matrix has non-finite entries");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity) {
    throw InvalidState(fmt::format("density matrix not Hermitian: max deviation {:.3e}", herm));
  }
  const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_err > tol.trace) {
    throw InvalidState(fmt::format("density matrix trace off by {:.3e}", trace_err));
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < tol.min_eigenvalue) {
    throw InvalidState(fmt::format("density matrix not PSD: min eigenvalue {:.3e}", min_eig));
  }
}

Eigen::SparseMatrix<Complex> to_sparse(const RealMatrix& m) {
  return m.cast<Complex>().sparseView();
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m, const StateTolerance& tol) : matrix_(std::move(m)) {
  validate_state(matrix_, tol);
}

DensityMatrix DensityMatrix::basis_state(int n, int index) {
  if (n < 1 || index < 0 || index >= n) {
    throw InvalidArgument(fmt::format("basis state {} not in dimension {}", index, n));
  }
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  if (n < 1) throw InvalidArgument("dimension must be positive");
  return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix DensityMatrix::from_evolved(ComplexMatrix m) {
  validate_state(m, kEvolvedTolerance);
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return DensityMatrix(std::move(h), kEvolvedTolerance);
}

Eigen::VectorXd DensityMatrix::populations() const { return matrix_.diagonal().real(); }

Eigen::VectorXd DensityMatrix::spectrum() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  const auto n = rho.rows();
  ComplexVector v(n * rho.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
  }
  return v;
}

ComplexMatrix devectorize(const ComplexVector& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) {
    throw InvalidArgument(fmt::format("vector of length {} is not a vectorized square", v.size()));
  }
  ComplexMatrix rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
  }
  return rho;
}

GeneratorMatrix build_generator(const AdjacencySpec& hamiltonian, const DissipatorSpec& diss,
                                double omega) {
  validate_omega(omega);
  const int n = hamiltonian.size();
  if (diss.dimension() != n) {
    throw InvalidArgument(fmt::format("dissipators act on dimension {}, Hamiltonian on {}",
                                      diss.dimension(), n));
  }
  const ComplexMatrix h = hamiltonian.matrix().cast<Complex>();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);

  ComplexMatrix g = -kI * (1.0 - omega) *
                    (ComplexMatrix(Eigen::kroneckerProduct(h, ident)) -
                     ComplexMatrix(Eigen::kroneckerProduct(ident, h.conjugate())));

  if (omega > 0.0) {
    for (const auto& op : diss.operators()) {
      const ComplexMatrix l = op.cast<Complex>();
      const ComplexMatrix ldl = l.adjoint() * l;
      const ComplexMatrix ltl = l.transpose() * l.conjugate();
      g += omega * (ComplexMatrix(Eigen::kroneckerProduct(l, l.conjugate())) -
                    0.5 * ComplexMatrix(Eigen::kroneckerProduct(ldl, ident)) -
                    0.5 * ComplexMatrix(Eigen::kroneckerProduct(ident, ltl)));
    }
  }
  return GeneratorMatrix(n, std::move(g));
}

DensityMatrix evolve(const GeneratorMatrix& gen, const DensityMatrix& rho0, double t) {
  if (!(t >= 0.0)) throw InvalidArgument(fmt::format("time must be >= 0, got {}", t));
  if (rho0.dimension() != gen.state_dimension()) {
    throw InvalidArgument("state and generator dimensions differ");
  }
  if (t == 0.0) return rho0;
  const ComplexMatrix step = expm(t * gen.matrix());
  return DensityMatrix::from_evolved(devectorize(step * vectorize(rho0.matrix())));
}

double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

bool check_majorization(const DensityMatrix& rho_out, const DensityMatrix& rho_in, double tol) {
  if (rho_out.dimension() != rho_in.dimension()) {
    throw InvalidArgument("majorization needs states of equal dimension");
  }
  const Eigen::VectorXd out = rho_out.spectrum();
  const Eigen::VectorXd in = rho_in.spectrum();
  double sum_out = 0.0;
  double sum_in = 0.0;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    sum_out += out(i);
    sum_in += in(i);
    if (sum_out > sum_in + tol) return false;
  }
  return std::abs(sum_out - sum_in) <= tol;
}

// ---------------------------------------------------------------------------

Liouvillian::Liouvillian(const AdjacencySpec& hamiltonian, const DissipatorSpec& diss,
                         double omega)
    : n_(hamiltonian.size()), omega_(omega) {
  validate_omega(omega);
  if (diss.dimension() != n_) {
    throw InvalidArgument(fmt::format("dissipators act on dimension {}, Hamiltonian on {}",
                                      diss.dimension(), n_));
  }
  hamiltonian_ = to_sparse(hamiltonian.matrix());

  RealMatrix damping = RealMatrix::Zero(n_, n_);
  for (const auto& op : diss.operators()) damping += op.transpose() * op;
  damping_ = to_sparse(damping);

  for (std::size_t k = 0; k < diss.count(); ++k) jumps_.push_back(diss.entries(k));

  // ||H x 1 - 1 x H||_1 <= 2 ||H||_1. The jump part sum_k L_k x L_k has
  // column (j, c) sum equal to sum_k s_k(j) s_k(c), s_k the column abs sums.
  const double h_norm = hamiltonian.matrix().cwiseAbs().colwise().sum().maxCoeff();
  RealMatrix jump_cols = RealMatrix::Zero(n_, n_);
  for (const auto& entries : jumps_) {
    std::vector<std::pair<int, double>> col_sums;
    for (const auto& e : entries) {
      auto it = std::find_if(col_sums.begin(), col_sums.end(),
                             [&](const auto& p) { return p.first == e.source; });
      if (it == col_sums.end()) {
        col_sums.emplace_back(e.source, std::abs(e.coefficient));
      } else {
        it->second += std::abs(e.coefficient);
      }
    }
    for (const auto& [j, sj] : col_sums) {
      for (const auto& [c, sc] : col_sums) jump_cols(j, c) += sj * sc;
    }
  }
  const double jump_norm = n_ > 0 ? jump_cols.maxCoeff() : 0.0;
  const double damping_norm = n_ > 0 ? damping.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  norm_bound_ = (1.0 - omega_) * 2.0 * h_norm + omega_ * (jump_norm + damping_norm);
}

ComplexMatrix Liouvillian::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out(n_, n_);
  if (omega_ < 1.0) {
    const ComplexMatrix h_rho = hamiltonian_ * rho;
    // rho H = (H rho^dag)^dag for Hermitian H; keep it general instead.
    const ComplexMatrix rho_h = (hamiltonian_.adjoint() * rho.adjoint()).adjoint();
    out = (-kI * (1.0 - omega_)) * (h_rho - rho_h);
  } else {
    out.setZero();
  }
  if (omega_ > 0.0) {
    ComplexMatrix diss(n_, n_);
    diss.setZero();
    for (const auto& entries : jumps_) {
      for (const auto& a : entries) {
        for (const auto& b : entries) {
          diss(a.target, b.target) += a.coefficient * b.coefficient * rho(a.source, b.source);
        }
      }
    }
    const ComplexMatrix k_rho = damping_ * rho;
    const ComplexMatrix rho_k = (damping_.adjoint() * rho.adjoint()).adjoint();
    diss -= 0.5 * (k_rho + rho_k);
    out += omega_ * diss;
  }
  return out;
}

DensityMatrix propagate(const Liouvillian& gen, const DensityMatrix& rho0, double t, double tol) {
  if (!(t >= 0.0)) throw InvalidArgument(fmt::format("time must be >= 0, got {}", t));
  if (rho0.dimension() != gen.dimension()) {
    throw InvalidArgument("state and generator dimensions differ");
  }
  if (t == 0.0) return rho0;

  const double scaled = t * gen.norm_bound();
  const long steps = std::max(1L, static_cast<long>(std::ceil(scaled)));
  if (!std::isfinite(scaled) || steps > 100000000L) {
    throw NumericalError(fmt::format("propagate: t * ||G||_1 = {:.3e} is out of range", scaled));
  }
  const double h = t / static_cast<double>(steps);
  constexpr int kMaxTerms = 60;

  ComplexMatrix rho = rho0.matrix();
  for (long s = 0; s < steps; ++s) {
    ComplexMatrix term = rho;
    ComplexMatrix sum = rho;
    int small = 0;
    int j = 1;
    for (; j <= kMaxTerms; ++j) {
      term = (h / j) * gen.apply(term);
      sum += term;
      const double term_size = term.cwiseAbs().maxCoeff();
      const double sum_size = sum.cwiseAbs().maxCoeff();
      small = term_size <= tol * sum_size ? small + 1 : 0;
      if (small >= 2) break;
    }
    if (j > kMaxTerms || !sum.allFinite()) {
      throw NumericalError(fmt::format(
          "propagate: Taylor series did not converge on a step of {:.3e} (||G||_1 <= {:.3e})", h,
          gen.norm_bound()));
    }
    rho = std::move(sum);
  }
  return DensityMatrix::from_evolved(std::move(rho));
}

DensityMatrix evolve_spectral(const AdjacencySpec& graph, double omega, const DensityMatrix& rho0,
                              double t) {
  validate_omega(omega);
  if (!(t >= 0.0)) throw InvalidArgument(fmt::format("time must be >= 0, got {}", t));
  const int n = graph.size();
  if (rho0.dimension() != n) throw InvalidArgument("state and graph dimensions differ");
  if (t == 0.0) return rho0;

  // H = 2 L_S, so both terms of the generator are diagonal in the basis
  // |lambda_i><lambda_j| with eigenvalue
  //   -w/2 (l_i - l_j)^2 - 2 i (1 - w)(l_i - l_j).
  const EigenSystem es = segment_eigensystem(n);
  const ComplexMatrix v = es.eigenvectors.cast<Complex>();
  ComplexMatrix in_basis = v.transpose() * rho0.matrix() * v;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = es.eigenvalues(i) - es.eigenvalues(j);
      in_basis(i, j) *= std::exp(Complex(-0.5 * omega * t * d * d, -2.0 * (1.0 - omega) * t * d));
    }
  }
  return DensityMatrix::from_evolved(v * in_basis * v.transpose());
}

// ---------------------------------------------------------------------------

void WalkParams::validate(const AdjacencySpec& graph) const {
  validate_omega(omega);
  double prev = -1.0;
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw InvalidArgument(fmt::format("times must be finite and >= 0, got {}", t));
    }
    if (t <= prev) throw InvalidArgument("times must be strictly increasing");
    prev = t;
  }
  if (!graph.has_label(initial_vertex)) {
    throw InvalidArgument(fmt::format("initial vertex {} is not on the graph [{}, {}]",
                                      initial_vertex, graph.first_label(), graph.last_label()));
  }
}

Walk::Walk(AdjacencySpec graph, DissipatorKind dissipator, double omega)
    : graph_(std::move(graph)), diss_(build_dissipators(graph_, dissipator)), omega_(omega) {
  validate_omega(omega);
}

Method Walk::resolve(Method method) const {
  if (method == Method::spectral && diss_.kind() != DissipatorKind::global_sum) {
    throw InvalidArgument("the spectral propagator needs the global dissipator");
  }
  if (method != Method::automatic) return method;
  if (diss_.kind() == DissipatorKind::global_sum) return Method::spectral;
  return graph_.size() <= 16 ? Method::dense_expm : Method::taylor_action;
}

std::vector<DensityMatrix> Walk::run(const DensityMatrix& rho0, const std::vector<double>& times,
                                     Method method) const {
  WalkParams check{omega_, times, graph_.first_label()};
  check.validate(graph_);
  if (rho0.dimension() != graph_.size()) {
    throw InvalidArgument("initial state and graph dimensions differ");
  }

  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  const Method m = resolve(method);

  if (m == Method::spectral) {
    for (double t : times) out.push_back(evolve_spectral(graph_, omega_, rho0, t));
    return out;
  }

  // Steps between consecutive grid points, starting from t = 0.
  std::vector<double> deltas;
  double prev = 0.0;
  for (double t : times) {
    deltas.push_back(t - prev);
    prev = t;
  }

  if (m == Method::taylor_action) {
    const Liouvillian gen(graph_, diss_, omega_);
    DensityMatrix rho = rho0;
    for (double dt : deltas) {
      rho = propagate(gen, rho, dt);
      out.push_back(rho);
    }
    return out;
  }

  const GeneratorMatrix gen = build_generator(graph_, diss_, omega_);
  ComplexMatrix cached;
  double cached_dt = -1.0;
  ComplexVector v = vectorize(rho0.matrix());
  for (double dt : deltas) {
    if (dt == 0.0) {
      out.push_back(rho0);
      continue;
    }
    if (std::abs(dt - cached_dt) > 1e-12 * std::max(1.0, dt)) {
      cached = expm(dt * gen.matrix());
      cached_dt = dt;
    }
    v = cached * v;
    out.push_back(DensityMatrix::from_evolved(devectorize(v)));
  }
  return out;
}

std::vector<DensityMatrix> Walk::run(const WalkParams& params, Method method) const {
  params.validate(graph_);
  if (params.omega != omega_) throw InvalidArgument("params.omega differs from the walk's omega");
  const DensityMatrix rho0 =
      DensityMatrix::basis_state(graph_.size(), graph_.index_of(params.initial_vertex));
  return run(rho0, params.times, method);
}

double boundary_probability(const DensityMatrix& rho) {
  const auto p = rho.populations();
  if (p.size() == 1) return p(0);
  return p(0) + p(p.size() - 1);
}

void check_light_cone(const DensityMatrix& rho, double t, double tol) {
  const double b = boundary_probability(rho);
  if (!(b < tol)) {
    throw TruncationError(fmt::format(
        "probability {:.3e} on the outermost vertices at t = {} exceeds {:.1e}; "
        "use a half width of at least {}",
        b, t, tol, light_cone_half_width(t)));
  }
}

int light_cone_half_width(double t_max) {
  return static_cast<int>(std::ceil(2.0 * t_max + 10.0));
}

}  // namespace qsw
