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

#include <random>

#include "copulabounds/oracles.hpp"
#include "test_support.hpp"

using namespace copulabounds;
using copulabounds::testing::as_matrix;
using copulabounds::testing::random_integer_costs;
using copulabounds::testing::random_real_costs;

TEST_CASE("hungarian worked examples") {
  const Permutation2D a = solve_hungarian({{4, 1}, {2, 3}});
  CHECK(a.pi == std::vector<int>{2, 1});
  CHECK(a.value == 3.0);
  const Permutation2D b = solve_hungarian({{0, 1}, {1, 0}});
  CHECK(b.pi == std::vector<int>{1, 2});
  CHECK(b.value == 0.0);
  const Permutation2D c = solve_hungarian({{1, 2}, {3, 0}});
  CHECK(c.pi == std::vector<int>{1, 2});
  CHECK(c.value == 1.0);
  const Permutation2D one = solve_hungarian({{-5}});
  CHECK(one.pi == std::vector<int>{1});
  CHECK(one.value == -5.0);
}

TEST_CASE("hungarian maximizes") {
  const Permutation2D a = solve_hungarian({{4, 1}, {2, 3}}, Sense::kMaximize);
  CHECK(a.pi == std::vector<int>{1, 2});
  CHECK(a.value == 7.0);
}

TEST_CASE("hungarian agrees with brute force") {
  std::mt19937_64 rng(99);
  for (int n = 1; n <= 8; ++n)
    for (int rep = 0; rep < 25; ++rep) {
      const auto flat = rep % 2 ? random_integer_costs(static_cast<std::size_t>(n * n), rng, 0, 5)
                                : random_real_costs(static_cast<std::size_t>(n * n), rng);
      const CostMatrix a = as_matrix(flat, n);
      for (Sense sense : {Sense::kMinimize, Sense::kMaximize}) {
        const Permutation2D h = solve_hungarian(a, sense);
        const Permutation2D b = brute_force_2ap(a, sense);
        REQUIRE(h.value == Catch::Approx(b.value).margin(1e-9));
        REQUIRE(assignment_value(a, h.pi) == Catch::Approx(h.value).margin(1e-12));
        std::vector<int> sorted = h.pi;
        std::sort(sorted.begin(), sorted.end());
        for (int j = 0; j < n; ++j) REQUIRE(sorted[static_cast<std::size_t>(j)] == j + 1);
      }
    }
}

TEST_CASE("hungarian input validation") {
  CHECK_THROWS_AS(solve_hungarian({}), InvalidArgument);
  CHECK_THROWS_AS(solve_hungarian({{1, 2}, {3}}), InvalidArgument);
  CHECK_THROWS_AS(solve_hungarian({{1, std::numeric_limits<double>::infinity()}, {0, 0}}), InvalidArgument);
}
