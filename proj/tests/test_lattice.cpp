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

#include "doctest.h"
#include "qsw/errors.hpp"
#include "qsw/lattice.hpp"

using namespace qsw;

TEST_CASE("segment adjacency is the tridiagonal 0/1 matrix") {
  SUBCASE("n = 1 has no edges") {
    const auto a = build_segment(1);
    CHECK(a.size() == 1);
    CHECK(a.matrix()(0, 0) == 0.0);
  }
  SUBCASE("n = 2 is a single edge") {
    RealMatrix expected(2, 2);
    expected << 0, 1, 1, 0;
    CHECK(build_segment(2).matrix() == expected);
  }
  SUBCASE("n = 4") {
    const auto a = build_segment(4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CHECK(a.matrix()(i, j) == (std::abs(i - j) == 1 ? 1.0 : 0.0));
      }
    }
  }
  SUBCASE("symmetric with zero diagonal for many n") {
    for (int n = 1; n <= 40; ++n) {
      const auto a = build_segment(n);
      CHECK(a.matrix() == a.matrix().transpose());
      CHECK(a.matrix().diagonal().isZero(0.0));
      CHECK(a.matrix().sum() == 2.0 * (n - 1));
    }
  }
  CHECK_THROWS_AS(build_segment(0), InvalidArgument);
  CHECK_THROWS_AS(build_segment(-3), InvalidArgument);
}

TEST_CASE("vertex labels") {
  const auto seg = build_segment(5);
  CHECK(seg.kind() == GraphKind::segment);
  CHECK(seg.first_label() == 1);
  CHECK(seg.last_label() == 5);
  CHECK(seg.index_of(3) == 2);
  CHECK_THROWS_AS(seg.index_of(0), InvalidArgument);

  const auto line = build_truncated_line(3);
  CHECK(line.kind() == GraphKind::truncated_line);
  CHECK(line.size() == 7);
  CHECK(line.first_label() == -3);
  CHECK(line.last_label() == 3);
  CHECK(line.index_of(0) == 3);
  CHECK(line.label(0) == -3);
  CHECK(line.labels().front() == -3);
  CHECK(line.matrix() == build_segment(7).matrix());
  CHECK_THROWS_AS(build_truncated_line(-1), InvalidArgument);
}

TEST_CASE("local dissipators are degree weighted single hops") {
  SUBCASE("segment n = 2: endpoint degree 1 gives coefficient 1") {
    const auto d = build_local_dissipators(build_segment(2));
    REQUIRE(d.count() == 2);
    for (const auto& op : d.operators()) {
      CHECK(op.cwiseAbs().sum() == 1.0);
      CHECK(op.maxCoeff() == 1.0);
    }
    CHECK(d.operators()[0](1, 0) == 1.0);  // |2><1|
  }
  SUBCASE("segment n = 3 has four operators") {
    CHECK(build_local_dissipators(build_segment(3)).count() == 4);
  }
  SUBCASE("interior hops carry 1/2") {
    const auto adj = build_segment(6);
    const auto d = build_local_dissipators(adj);
    CHECK(d.count() == 10);
    for (std::size_t k = 0; k < d.count(); ++k) {
      const auto& e = d.entries(k);
      REQUIRE(e.size() == 1);
      CHECK(std::abs(e[0].target - e[0].source) == 1);
      CHECK(e[0].coefficient == 1.0 / adj.degree(e[0].source));
      if (e[0].source > 0 && e[0].source < 5) CHECK(e[0].coefficient == 0.5);
    }
  }
  SUBCASE("n = 1 has none") {
    const auto d = build_local_dissipators(build_segment(1));
    CHECK(d.count() == 0);
    CHECK(d.dimension() == 1);
  }
}

TEST_CASE("global dissipator is A / 2") {
  SUBCASE("n = 2") {
    const auto d = build_global_dissipator(build_segment(2));
    REQUIRE(d.count() == 1);
    RealMatrix expected(2, 2);
    expected << 0, 0.5, 0.5, 0;
    CHECK(d.operators()[0] == expected);
  }
  SUBCASE("n = 1") {
    const auto d = build_global_dissipator(build_segment(1));
    CHECK(d.operators()[0](0, 0) == 0.0);
  }
  for (int n = 1; n <= 30; ++n) {
    const auto adj = build_segment(n);
    const RealMatrix ls = build_global_dissipator(adj).operators()[0];
    CHECK(RealMatrix(2.0 * ls) == adj.matrix());
    CHECK(ls == ls.transpose());
  }
}

TEST_CASE("global operator vs sum of local operators") {
  const int n = 9;
  const auto adj = build_segment(n);
  RealMatrix sum = RealMatrix::Zero(n, n);
  const auto local = build_local_dissipators(adj);
  for (const auto& op : local.operators()) sum += op;
  const RealMatrix global = build_global_dissipator(adj).operators()[0];
  // Interior entries agree; the two hops out of each endpoint do not.
  for (int i = 1; i + 1 < n; ++i) {
    CHECK(sum(i + 1, i) == global(i + 1, i));
    CHECK(sum(i - 1, i) == global(i - 1, i));
  }
  CHECK(sum(1, 0) == 1.0);
  CHECK(global(1, 0) == 0.5);
  CHECK(sum(n - 2, n - 1) == 1.0);
  CHECK(global(n - 2, n - 1) == 0.5);
}
