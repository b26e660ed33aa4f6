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

#include "test_support.hpp"

using namespace copulabounds;

TEST_CASE("permutation enumeration examples") {
  const Permutation2D ones = brute_force_2ap(CostMatrix(4, std::vector<double>(4, 1.0)));
  CHECK(ones.value == 4.0);
  CHECK(ones.pi == std::vector<int>{1, 2, 3, 4});
  const Permutation2D id = brute_force_2ap({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  CHECK(id.value == 0.0);
  CHECK(id.pi == std::vector<int>{1, 2, 3});
  CHECK(brute_force_2ap({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, Sense::kMaximize).value == 3.0);
  CHECK_THROWS_AS(brute_force_2ap(CostMatrix(10, std::vector<double>(10, 0.0))), InvalidArgument);
}

TEST_CASE("vertex enumeration examples") {
  CHECK(brute_force_dap_vertices(DapInstance(GridSpec(2, 2), Sense::kMinimize, {0, 1, 1, 0}, 1.0)) == 0.0);
  CHECK(brute_force_dap_vertices(DapInstance(GridSpec(2, 2), Sense::kMaximize, {0, 1, 1, 0}, 1.0)) == 2.0);
  CHECK(brute_force_dap_vertices(DapInstance(GridSpec(3, 2), Sense::kMinimize, {3, 4, 4, 5, 4, 5, 5, 6}, 1.0)) ==
        Catch::Approx(9.0));
  // Fractional optimum: every integral assignment costs 0.5 here.
  const DapInstance frac(GridSpec(3, 2), Sense::kMinimize, {0, 1, 1, 0, 1, 0, 0, 1}, 0.5);
  CHECK(brute_force_dap_vertices(frac) == Catch::Approx(0.0).margin(1e-15));
  CHECK(solve_relaxed(frac).value == Catch::Approx(0.0).margin(1e-12));
  CHECK(brute_force_dap_vertices(DapInstance(GridSpec(2, 3), Sense::kMinimize, std::vector<double>(9, 2.0), 0.5)) ==
        Catch::Approx(3.0));
  CHECK_THROWS_AS(brute_force_dap_vertices(DapInstance(GridSpec(2, 4), Sense::kMinimize, std::vector<double>(16), 1.0)),
                  InvalidArgument);
}

TEST_CASE("cyclical monotonicity accepts optimal and rejects perturbed copulas") {
  const GridSpec spec(2, 2);
  const EnvelopeGrid grid(spec, EnvelopeKind::kLower, {0, 1, 1, 0}, 2);
  const DiscreteCopula optimal(spec, {{{1, 1}, 0.5}, {{2, 2}, 0.5}});
  const DiscreteCopula anti(spec, {{{1, 2}, 0.5}, {{2, 1}, 0.5}});

  const MonotonicityCertificate good = check_cyclical_monotonicity(optimal, grid, Sense::kMinimize, 200, 2, 1);
  CHECK(good.passed);
  CHECK(good.checked_tuples == 200);
  CHECK(good.worst_violation <= 0.0);

  const MonotonicityCertificate bad = check_cyclical_monotonicity(anti, grid, Sense::kMinimize, 200, 2, 1);
  CHECK_FALSE(bad.passed);
  CHECK(bad.worst_violation == Catch::Approx(2.0));
  // The antidiagonal is the maximizer.
  CHECK(check_cyclical_monotonicity(anti, grid, Sense::kMaximize, 200, 3, 9).passed);

  CHECK_THROWS_AS(check_cyclical_monotonicity(optimal, grid, Sense::kMinimize, 10, 0, 1), InvalidArgument);
  const EnvelopeGrid other(GridSpec(2, 3), EnvelopeKind::kLower, std::vector<double>(9, 0.0), 2);
  CHECK_THROWS_AS(check_cyclical_monotonicity(optimal, other, Sense::kMinimize, 10, 2, 1), InvalidArgument);
}

TEST_CASE("LP optima are cyclically monotone") {
  std::mt19937_64 rng(31);
  for (int d = 2; d <= 4; ++d) {
    const GridSpec spec(d, 5);
    const EnvelopeGrid grid(spec, EnvelopeKind::kLower, testing::random_real_costs(spec.cell_count(), rng), 2);
    for (Sense sense : {Sense::kMinimize, Sense::kMaximize}) {
      const DiscreteCopula c = from_solution(solve_relaxed(build_dap(grid, sense, 1.0 / 5)), spec);
      for (int N = 2; N <= 4; ++N)
        CHECK(check_cyclical_monotonicity(c, grid, sense, 1000, N, static_cast<std::uint64_t>(N)).passed);
    }
  }
}
