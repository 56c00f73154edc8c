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
#include <Eigen/SparseCore>
#include <complex>
#include <vector>

#include "qsw/expm.hpp"
#include "qsw/lattice.hpp"

namespace qsw {

using Complex = std::complex<double>;

/// Acceptance thresholds for something to count as a density matrix.
struct StateTolerance {
  double hermiticity = 1e-12;  // max |rho_ij - conj(rho_ji)|
  double trace = 1e-12;        // |Tr rho - 1|
  double min_eigenvalue = -1e-10;
};

/// Thresholds used on propagated states. Round-off from the exponential
/// accumulates, so these are looser than the defaults above.
inline constexpr StateTolerance kEvolvedTolerance{1e-10, 1e-10, -1e-10};

/// Hermitian, unit-trace, positive semidefinite matrix. Construction
/// validates; a DensityMatrix that exists is always a valid state.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const StateTolerance& tol = {});

  /// |index><index| in an n-dimensional space.
  static DensityMatrix basis_state(int n, int index);
  static DensityMatrix maximally_mixed(int n);

  /// Takes a propagated matrix: checks it against kEvolvedTolerance and
  /// then replaces it by its Hermitian part. Negative eigenvalues below the
  /// tolerance raise InvalidState; nothing is clipped.
  static DensityMatrix from_evolved(ComplexMatrix m);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Real diagonal, i.e. the position distribution.
  Eigen::VectorXd populations() const;

  /// Eigenvalues in decreasing order.
  Eigen::VectorXd spectrum() const;

 private:
  ComplexMatrix matrix_;
};

/// Row-major vectorization, |i><j| -> |i>|j>, i.e. index i * n + j.
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix devectorize(const ComplexVector& v);

/// Dense superoperator G with vec(d rho / dt) = G vec(rho).
class GeneratorMatrix {
 public:
  GeneratorMatrix(int n, ComplexMatrix g) : n_(n), g_(std::move(g)) {}
  int state_dimension() const { return n_; }
  const ComplexMatrix& matrix() const { return g_; }

 private:
  int n_;
  ComplexMatrix g_;
};

/// G = -i(1-w)(H x 1 - 1 x conj(H))
///     + w sum_k (L_k x conj(L_k) - 1/2 L_k^dag L_k x 1 - 1/2 1 x L_k^T conj(L_k)).
GeneratorMatrix build_generator(const AdjacencySpec& hamiltonian, const DissipatorSpec& diss,
                                double omega);

/// devec(expm(t G) vec(rho0)).
DensityMatrix evolve(const GeneratorMatrix& gen, const DensityMatrix& rho0, double t);

double purity(const DensityMatrix& rho);

/// True iff the spectrum of rho_out is majorized by the spectrum of rho_in.
bool check_majorization(const DensityMatrix& rho_out, const DensityMatrix& rho_in,
                        double tol = 1e-10);

/// Matrix-free form of the same generator. Applies the master equation
/// directly to n x n matrices using the sparsity of H and of the jump
/// operators, so it scales to a few hundred vertices where the n^2 x n^2
/// superoperator does not fit in memory.
class Liouvillian {
 public:
  Liouvillian(const AdjacencySpec& hamiltonian, const DissipatorSpec& diss, double omega);

  int dimension() const { return n_; }
  double omega() const { return omega_; }

  /// d rho / dt at rho.
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  /// Upper bound on the induced 1-norm of the generator on vec(rho).
  double norm_bound() const { return norm_bound_; }

 private:
  int n_;
  double omega_;
  Eigen::SparseMatrix<Complex> hamiltonian_;
  Eigen::SparseMatrix<Complex> damping_;  // sum_k L_k^T L_k
  std::vector<std::vector<HoppingTerm>> jumps_;
  double norm_bound_ = 0.0;
};

/// exp(t G) applied to rho0 by a truncated Taylor series on substeps of
/// length h with h * norm_bound <= 1.
DensityMatrix propagate(const Liouvillian& gen, const DensityMatrix& rho0, double t,
                        double tol = 1e-15);

/// Closed-form propagation for the global dissipator on a path graph,
/// using the sine eigenbasis shared by H and L_S.
DensityMatrix evolve_spectral(const AdjacencySpec& graph, double omega, const DensityMatrix& rho0,
                              double t);

/// Interpolation parameter, time grid and starting vertex label of a run.
struct WalkParams {
  double omega = 0.0;
  std::vector<double> times;
  int initial_vertex = 0;

  /// Throws InvalidArgument on omega outside [0,1], negative or
  /// non-increasing times, or a label that is not on `graph`.
  void validate(const AdjacencySpec& graph) const;
};

enum class Method { automatic, dense_expm, taylor_action, spectral };

/// A walk on a path graph: adjacency, dissipator family and omega, bundled
/// so the propagator can be picked per run.
class Walk {
 public:
  Walk(AdjacencySpec graph, DissipatorKind dissipator, double omega);

  const AdjacencySpec& graph() const { return graph_; }
  const DissipatorSpec& dissipators() const { return diss_; }
  double omega() const { return omega_; }

  /// State at each time in `times` starting from rho0 at t = 0. Uniform
  /// grids reuse one step propagator.
  std::vector<DensityMatrix> run(const DensityMatrix& rho0, const std::vector<double>& times,
                                 Method method = Method::automatic) const;

  /// Same, starting from the basis state of `params.initial_vertex`.
  std::vector<DensityMatrix> run(const WalkParams& params,
                                 Method method = Method::automatic) const;

  Method resolve(Method method) const;

 private:
  AdjacencySpec graph_;
  DissipatorSpec diss_;
  double omega_;
};

/// Probability sitting on the first and last vertex.
double boundary_probability(const DensityMatrix& rho);

/// Throws TruncationError if boundary_probability(rho) >= tol.
void check_light_cone(const DensityMatrix& rho, double t, double tol = 1e-8);

/// Half width that keeps a walk started at the centre away from the ends up
/// to t_max. The adjacency spectral radius is 2, so the front moves at most
/// at speed 2.
int light_cone_half_width(double t_max);

}  // namespace qsw
