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

#include "qsw/lattice.hpp"

#include <numeric>
#include <string>

#include "qsw/errors.hpp"

namespace qsw {

AdjacencySpec::AdjacencySpec(GraphKind kind, int n, int first_label)
    : kind_(kind), first_label_(first_label), matrix_(RealMatrix::Zero(n, n)) {
  for (int i = 0; i + 1 < n; ++i) {
    matrix_(i, i + 1) = 1.0;
    matrix_(i + 1, i) = 1.0;
  }
}

bool AdjacencySpec::has_label(int label) const {
  return label >= first_label_ && label <= last_label();
}

int AdjacencySpec::index_of(int label) const {
  if (!has_label(label)) {
    throw InvalidArgument("vertex label " + std::to_string(label) + " outside [" +
                          std::to_string(first_label_) + ", " + std::to_string(last_label()) +
                          "]");
  }
  return label - first_label_;
}

std::vector<int> AdjacencySpec::labels() const {
  std::vector<int> out(static_cast<std::size_t>(size()));
  std::iota(out.begin(), out.end(), first_label_);
  return out;
}

int AdjacencySpec::degree(int index) const {
  return static_cast<int>(matrix_.row(index).sum());
}

AdjacencySpec build_segment(int n) {
  if (n < 1) throw InvalidArgument("segment size must be >= 1, got " + std::to_string(n));
  return AdjacencySpec(GraphKind::segment, n, 1);
}

AdjacencySpec build_truncated_line(int half_width) {
  if (half_width < 0) {
    throw InvalidArgument("half width must be >= 0, got " + std::to_string(half_width));
  }
  return AdjacencySpec(GraphKind::truncated_line, 2 * half_width + 1, -half_width);
}

DissipatorSpec DissipatorSpec::from_operators(DissipatorKind kind, int dimension,
                                              std::vector<RealMatrix> ops) {
  DissipatorSpec spec;
  spec.kind_ = kind;
  spec.dimension_ = dimension;
  for (const auto& op : ops) {
    if (op.rows() != spec.dimension_ || op.cols() != spec.dimension_) {
      throw InvalidArgument("dissipators must all be square of the same size");
    }
    std::vector<HoppingTerm> nz;
    for (int j = 0; j < op.cols(); ++j) {
      for (int i = 0; i < op.rows(); ++i) {
        if (op(i, j) != 0.0) nz.push_back({i, j, op(i, j)});
      }
    }
    spec.entries_.push_back(std::move(nz));
  }
  spec.operators_ = std::move(ops);
  return spec;
}

DissipatorSpec build_local_dissipators(const AdjacencySpec& adj) {
  const int n = adj.size();
  std::vector<RealMatrix> ops;
  for (int m = 0; m < n; ++m) {
    const int deg = adj.degree(m);
    for (int target = 0; target < n; ++target) {
      if (adj.matrix()(target, m) == 0.0) continue;
      RealMatrix op = RealMatrix::Zero(n, n);
      op(target, m) = 1.0 / deg;
      ops.push_back(std::move(op));
    }
  }
  return DissipatorSpec::from_operators(DissipatorKind::local_set, n, std::move(ops));
}

DissipatorSpec build_global_dissipator(const AdjacencySpec& adj) {
  RealMatrix op = 0.5 * adj.matrix();
  std::vector<RealMatrix> ops;
  ops.push_back(std::move(op));
  return DissipatorSpec::from_operators(DissipatorKind::global_sum, adj.size(), std::move(ops));
}

DissipatorSpec build_dissipators(const AdjacencySpec& adj, DissipatorKind kind) {
  return kind == DissipatorKind::global_sum ? build_global_dissipator(adj)
                                            : build_local_dissipators(adj);
}

}  // namespace qsw
