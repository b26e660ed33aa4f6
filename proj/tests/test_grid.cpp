// Copyright 2026 The copulabounds Authors
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

#include <catch2/catch_amalgamated.hpp>

#include "copulabounds/grid.hpp"

using namespace copulabounds;

TEST_CASE("grid spec rejects degenerate sizes") {
  CHECK_THROWS_AS(GridSpec(1, 4), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(3, 0), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(3, 2000000000), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(64, 2), InvalidArgument);
  CHECK(GridSpec(3, 40).cell_count() == 64000);
  CHECK(GridSpec(3, 40).slice_count() == 120);
}

TEST_CASE("mixed-radix order has axis 1 slowest") {
  const GridSpec spec(3, 4);
  CHECK(spec.flat({1, 1, 1}) == 0);
  CHECK(spec.flat({1, 1, 2}) == 1);
  CHECK(spec.flat({2, 1, 1}) == 16);
  CHECK(spec.flat({4, 4, 4}) == 63);
  CellIndex i = spec.first();
  std::size_t f = 0;
  do {
    REQUIRE(spec.flat(i) == f);
    REQUIRE(spec.unflat(f) == i);
    ++f;
  } while (spec.next(i));
  CHECK(f == spec.cell_count());
  CHECK_THROWS_AS(spec.flat({5, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(spec.flat({1, 1}), InvalidArgument);
}

TEST_CASE("cell bounds") {
  auto [lo, hi] = cell_bounds({1, 1, 1}, GridSpec(3, 2));
  CHECK(lo == Point{0, 0, 0});
  CHECK(hi == Point{0.5, 0.5, 0.5});

  std::tie(lo, hi) = cell_bounds({2, 2}, GridSpec(2, 2));
  CHECK(lo == Point{0.5, 0.5});
  CHECK(hi == Point{1, 1});

  std::tie(lo, hi) = cell_bounds({3, 1}, GridSpec(2, 4));
  CHECK(lo == Point{0.5, 0});
  CHECK(hi == Point{0.75, 0.25});

  CHECK_THROWS_AS(cell_bounds({0, 1}, GridSpec(2, 4)), InvalidArgument);
  CHECK_THROWS_AS(cell_bounds({5, 1}, GridSpec(2, 4)), InvalidArgument);
}

TEST_CASE("every point of the cube belongs to exactly one cell") {
  const int n = 7;
  CHECK(cell_level(0.0, n) == 1);
  CHECK(cell_level(1.0, n) == n);
  for (int t = 0; t <= 700; ++t) {
    const double x = t / 700.0;
    const int l = cell_level(x, n);
    const auto [lo, hi] = cell_bounds({l, 1}, GridSpec(2, n));
    CHECK(lo[0] <= x);
    CHECK((x < hi[0] || (l == n && x == 1.0)));
  }
}
