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
#include <vector>

namespace qsw {

using RealMatrix = Eigen::MatrixXd;

enum class GraphKind { segment, truncated_line };

/// Adjacency matrix of a path graph with n vertices.
///
/// A segment labels its vertices 1..n. A truncated line has odd n and labels
/// its vertices -(n-1)/2 .. (n-1)/2, so label 0 sits in the middle. Either
/// way the matrix is the same tridiagonal 0/1 matrix; only the labelling
/// differs.
class AdjacencySpec {
 public:
  GraphKind kind() const { return kind_; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  const RealMatrix& matrix() const { return matrix_; }

  /// Label of the vertex stored at row `index`.
  int label(int index) const { return index + first_label_; }
  /// Row index of the vertex with the given label; throws on unknown labels.
  int index_of(int label) const;
  bool has_label(int label) const;
  int first_label() const { return first_label_; }
  int last_label() const { return first_label_ + size() - 1; }
  std::vector<int> labels() const;

  int degree(int index) const;

 private:
  friend AdjacencySpec build_segment(int n);
  friend AdjacencySpec build_truncated_line(int half_width);

  AdjacencySpec(GraphKind kind, int n, int first_label);

  GraphKind kind_;
  int first_label_;
  RealMatrix matrix_;
};

AdjacencySpec build_segment(int n);

/// Odd-length segment with vertices -half_width .. half_width.
AdjacencySpec build_truncated_line(int half_width);

enum class DissipatorKind { local_set, global_sum };

/// One hopping term |target><source| scaled by `coefficient`.
struct HoppingTerm {
  int target;
  int source;
  double coefficient;
};

/// A family of real Lindblad operators on the walk graph.
///
/// The local set holds one single-entry operator per directed edge. The
/// global form holds exactly one symmetric operator. Operators are kept both
/// as dense matrices and as their nonzero entries, since the matrix-free
/// propagator only needs the latter.
class DissipatorSpec {
 public:
  DissipatorKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  std::size_t count() const { return operators_.size(); }
  const std::vector<RealMatrix>& operators() const { return operators_; }

  /// Nonzero entries of operator `k`.
  const std::vector<HoppingTerm>& entries(std::size_t k) const { return entries_[k]; }

  /// Dissipator family holding exactly the given operators.
  static DissipatorSpec from_operators(DissipatorKind kind, int dimension,
                                       std::vector<RealMatrix> ops);

 private:
  DissipatorSpec() = default;

  DissipatorKind kind_ = DissipatorKind::local_set;
  int dimension_ = 0;
  std::vector<RealMatrix> operators_;
  std::vector<std::vector<HoppingTerm>> entries_;
};

/// One operator (1/deg(m)) |n><m| per directed edge (m, n).
DissipatorSpec build_local_dissipators(const AdjacencySpec& adj);

/// The single operator with 1/2 on both off-diagonals, so 2 L = A.
DissipatorSpec build_global_dissipator(const AdjacencySpec& adj);

DissipatorSpec build_dissipators(const AdjacencySpec& adj, DissipatorKind kind);

}  // namespace qsw
