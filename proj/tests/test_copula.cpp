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

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace copulabounds;
using copulabounds::testing::random_real_costs;

namespace {

// Direct definition: each cell spreads its mass uniformly, so its share of
// [0, x] is the product of the covered fractions along each axis.
double cdf_oracle(const DiscreteCopula& c, const Point& x) {
  const double n = c.spec().n();
  double total = 0.0;
  for (const auto& e : c.support()) {
    double frac = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) frac *= std::clamp(n * x[k] - (e.index[k] - 1), 0.0, 1.0);
    total += e.mass * frac;
  }
  return total;
}

DiscreteCopula random_copula(int d, int n, std::mt19937_64& rng) {
  const GridSpec spec(d, n);
  const DapSolution sol = solve_relaxed(DapInstance(spec, Sense::kMinimize, random_real_costs(spec.cell_count(), rng), 1.0));
  return from_solution(sol, spec);
}

}  // namespace

TEST_CASE("copula from a solution rescales to 1/n slices") {
  const GridSpec spec(2, 2);
  const DapSolution sol = solve_relaxed(DapInstance(spec, Sense::kMinimize, {0, 1, 1, 0}, 1.0));
  const DiscreteCopula c = from_solution(sol, spec);
  CHECK(c.mass({1, 1}) == Catch::Approx(0.5));
  CHECK(c.mass({2, 2}) == Catch::Approx(0.5));
  CHECK(c.mass({1, 2}) == 0.0);
  CHECK(c.support_size() == 2);

  CHECK_THROWS_AS(DiscreteCopula(spec, {{{1, 1}, 0.5}, {{2, 1}, 0.5}}), NumericalError);
  CHECK_THROWS_AS(DiscreteCopula(spec, {{{1, 1}, 0.5}, {{2, 2}, 0.4}}), NumericalError);
  CHECK_THROWS_AS(DiscreteCopula(spec, {{{1, 3}, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(from_solution(sol, GridSpec(2, 3)), InvalidArgument);

  DapSolution stalled = sol;
  stalled.status = SolveStatus::kIterationLimit;
  CHECK_THROWS_AS(from_solution(stalled, spec), NumericalError);
}

TEST_CASE("cdf worked examples") {
  const GridSpec spec(2, 2);
  const DiscreteCopula m(spec, {{{1, 1}, 0.5}, {{2, 2}, 0.5}});
  CHECK(m.cdf({0.5, 0.5}) == Catch::Approx(0.5));
  CHECK(m.cdf({1, 1}) == Catch::Approx(1.0));
  CHECK(m.cdf({0.25, 0.25}) == Catch::Approx(0.125));
  CHECK(m.cdf({0.75, 0.5}) == Catch::Approx(0.5));
  CHECK(m.cdf({0, 0.7}) == 0.0);
  CHECK(m.c_volume({0, 0}, {0.5, 0.5}) == Catch::Approx(0.5));
  CHECK(m.c_volume({0.5, 0}, {1, 0.5}) == Catch::Approx(0.0).margin(1e-15));
  CHECK_THROWS_AS(m.cdf({1.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(m.cdf({0.5}), InvalidArgument);
  CHECK_THROWS_AS(m.c_volume({0.6, 0}, {0.5, 1}), InvalidArgument);

  const EnvelopeGrid a(spec, EnvelopeKind::kLower, {1, 0, 0, 3}, 2);
  CHECK(m.integrate_cellwise(a) == Catch::Approx(2.0));
}

TEST_CASE("cdf matches the direct cell-fraction formula") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int d = 2; d <= 4; ++d) {
    const DiscreteCopula c = random_copula(d, 5, rng);
    for (int rep = 0; rep < 200; ++rep) {
      Point x(static_cast<std::size_t>(d));
      for (auto& v : x) v = unif(rng);
      REQUIRE(c.cdf(x) == Catch::Approx(cdf_oracle(c, x)).margin(1e-12));
    }
  }
}

TEST_CASE("copula properties on random solved instances") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 6; ++rep) {
    const int d = 2 + rep % 3;
    const int n = 3 + rep;
    const DiscreteCopula c = random_copula(d, n, rng);
    const auto ud = static_cast<std::size_t>(d);

    // Uniform margins, groundedness and the top corner.
    for (int t = 0; t <= 100; ++t) {
      const double u = t / 100.0;
      for (std::size_t k = 0; k < ud; ++k) {
        Point x(ud, 1.0);
        x[k] = u;
        REQUIRE(c.cdf(x) == Catch::Approx(u).margin(1e-9));
        x.assign(ud, 0.7);
        x[k] = 0.0;
        REQUIRE(c.cdf(x) == Catch::Approx(0.0).margin(1e-12));
      }
    }
    CHECK(c.cdf(Point(ud, 1.0)) == Catch::Approx(1.0).margin(1e-12));

    // Cell volume equals cell mass.
    CellIndex i = c.spec().first();
    do {
      const auto [lo, hi] = cell_bounds(i, c.spec());
      REQUIRE(c.c_volume(lo, hi) == Catch::Approx(c.mass(i)).margin(1e-12));
    } while (c.spec().next(i));

    // Monotone along each axis.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < 50; ++s) {
      Point x(ud);
      for (auto& v : x) v = unif(rng);
      Point y = x;
      const std::size_t k = static_cast<std::size_t>(s) % ud;
      y[k] = std::min(1.0, x[k] + 0.1 * unif(rng));
      REQUIRE(c.cdf(y) >= c.cdf(x) - 1e-15);
    }
  }
}

TEST_CASE("sampling is deterministic and consistent with the integral") {
  std::mt19937_64 rng(21);
  const DiscreteCopula c = random_copula(3, 4, rng);
  const auto a = c.sample(5, 77), b = c.sample(5, 77);
  CHECK(a == b);
  CHECK(c.sample(0, 1).empty());

  const GridSpec& spec = c.spec();
  const EnvelopeGrid grid(spec, EnvelopeKind::kLower, random_real_costs(spec.cell_count(), rng), 2);
  const std::size_t count = 100000;
  const auto points = c.sample(count, 5);
  double sum = 0.0, sq = 0.0;
  for (const auto& p : points) {
    CellIndex cell;
    for (double v : p) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
      cell.push_back(cell_level(v, spec.n()));
    }
    REQUIRE(c.mass(cell) > 0.0);
    const double v = grid.at(cell);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / count;
  const double sigma = std::sqrt((sq / count - mean * mean) / count);
  CHECK(std::abs(mean - c.integrate_cellwise(grid)) <= 4.0 * sigma);
}

TEST_CASE("shuffles of M from 2D vertex solutions") {
  const GridSpec two(2, 2);
  const DapSolution swap = solve_relaxed(DapInstance(two, Sense::kMinimize, {1, 0, 0, 1}, 0.5));
  const ShuffleOfM s = to_shuffle_of_m(swap);
  CHECK(s.pi.pi == std::vector<int>{2, 1});
  CHECK(s.pi.value == Catch::Approx(0.0).margin(1e-12));

  const GridSpec three(2, 3);
  const DapSolution cyc = solve_relaxed(DapInstance(three, Sense::kMinimize, {1, 0, 1, 1, 1, 0, 0, 1, 1}, 1.0));
  const ShuffleOfM t = to_shuffle_of_m(cyc);
  CHECK(t.pi.pi == std::vector<int>{2, 3, 1});

  // The grid-level copula of a shuffle reproduces the shuffle's cell masses.
  const DiscreteCopula c = from_solution(cyc, three);
  for (const auto& e : t.cell_masses()) CHECK(c.mass(e.index) == Catch::Approx(e.mass));
  // On grid nodes the shuffle and the cellwise-uniform copula agree.
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      CHECK(t.cdf(a / 3.0, b / 3.0) == Catch::Approx(c.cdf({a / 3.0, b / 3.0})).margin(1e-12));
  CHECK(t.cdf(1.0 / 6, 0.5) == Catch::Approx(1.0 / 6));

  ShuffleOfM anti = t;
  anti.omega = {-1, -1, -1};
  CHECK(anti.cdf(1.0 / 6, 1.0 / 3 + 1.0 / 6) == Catch::Approx(0.0).margin(1e-15));
  CHECK(anti.cdf(1.0 / 3, 2.0 / 3) == Catch::Approx(1.0 / 3));

  CHECK_THROWS_AS(to_shuffle_of_m(solve_relaxed(DapInstance(GridSpec(3, 2), Sense::kMinimize,
                                                            std::vector<double>(8, 0.0), 1.0))),
                  InvalidArgument);
}
