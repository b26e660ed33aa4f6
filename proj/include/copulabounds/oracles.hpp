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

#pragma once

// Independent reference solvers and optimality certificates. Everything here
// is deliberately naive and shares no code path with the simplex solver.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "copulabounds/copula.hpp"
#include "copulabounds/dap.hpp"
#include "copulabounds/envelope.hpp"
#include "copulabounds/error.hpp"
#include "copulabounds/hungarian.hpp"

namespace copulabounds {

/// Enumerates all n! permutations; ties go to the lexicographically first.
inline Permutation2D brute_force_2ap(const CostMatrix& costs, Sense sense = Sense::kMinimize) {
  check_square(costs);
  if (costs.size() > 9) throw InvalidArgument("brute_force_2ap is limited to n <= 9");
  std::vector<int> pi(costs.size());
  std::iota(pi.begin(), pi.end(), 1);
  Permutation2D best{pi, assignment_value(costs, pi)};
  while (std::next_permutation(pi.begin(), pi.end())) {
    const double v = assignment_value(costs, pi);
    if (sense == Sense::kMinimize ? v < best.value : v > best.value) best = {pi, v};
  }
  return best;
}

/// Exact LP optimum of a tiny relaxed d-AP by enumerating every basic
/// feasible solution of the slice system in rational arithmetic.
inline double brute_force_dap_vertices(const DapInstance& inst) {
  using Rational = boost::multiprecision::cpp_rational;
  const GridSpec& spec = inst.spec();
  const std::size_t vars = spec.cell_count();
  if (vars > 12) throw InvalidArgument("brute_force_dap_vertices is limited to n^d <= 12 variables");
  const int d = spec.d(), n = spec.n();

  // Full d*n x n^d constraint matrix; one redundant row per extra axis is
  // removed below by keeping a maximal independent subset of rows.
  const std::size_t all_rows = spec.slice_count();
  std::vector<std::vector<Rational>> A(all_rows, std::vector<Rational>(vars, Rational(0)));
  for (std::size_t f = 0; f < vars; ++f) {
    const CellIndex i = spec.unflat(f);
    for (int k = 0; k < d; ++k) A[static_cast<std::size_t>(k * n + i[static_cast<std::size_t>(k)] - 1)][f] = 1;
  }
  // Row echelon selection of independent rows.
  std::vector<std::vector<Rational>> rows;
  {
    std::vector<std::vector<Rational>> echelon;
    std::vector<std::size_t> pivots;
    for (const auto& row : A) {
      std::vector<Rational> r = row;
      for (std::size_t e = 0; e < echelon.size(); ++e)
        if (r[pivots[e]] != 0) {
          const Rational factor = r[pivots[e]] / echelon[e][pivots[e]];
          for (std::size_t c = 0; c < vars; ++c) r[c] -= factor * echelon[e][c];
        }
      auto nz = std::find_if(r.begin(), r.end(), [](const Rational& x) { return x != 0; });
      if (nz == r.end()) continue;
      pivots.push_back(static_cast<std::size_t>(nz - r.begin()));
      echelon.push_back(r);
      rows.push_back(row);
    }
  }
  const std::size_t rank = rows.size();
  const Rational rhs(inst.rhs());
  std::vector<Rational> cost(vars);
  for (std::size_t f = 0; f < vars; ++f) cost[f] = Rational(inst.costs()[f]);

  std::optional<Rational> best;
  std::vector<char> pick(vars, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(rank), 1);
  do {
    std::vector<std::size_t> cols;
    for (std::size_t f = 0; f < vars; ++f)
      if (pick[f]) cols.push_back(f);
    // Gauss-Jordan on [B | b].
    std::vector<std::vector<Rational>> M(rank, std::vector<Rational>(rank + 1));
    for (std::size_t r = 0; r < rank; ++r) {
      for (std::size_t c = 0; c < rank; ++c) M[r][c] = rows[r][cols[c]];
      M[r][rank] = rhs;
    }
    bool singular = false;
    for (std::size_t c = 0; c < rank && !singular; ++c) {
      std::size_t p = c;
      while (p < rank && M[p][c] == 0) ++p;
      if (p == rank) {
        singular = true;
        break;
      }
      std::swap(M[p], M[c]);
      for (std::size_t r = 0; r < rank; ++r) {
        if (r == c || M[r][c] == 0) continue;
        const Rational factor = M[r][c] / M[c][c];
        for (std::size_t k = c; k <= rank; ++k) M[r][k] -= factor * M[c][k];
      }
    }
    if (singular) continue;
    bool feasible = true;
    Rational objective = 0;
    for (std::size_t c = 0; c < rank; ++c) {
      const Rational x = M[c][rank] / M[c][c];
      if (x < 0) {
        feasible = false;
        break;
      }
      objective += cost[cols[c]] * x;
    }
    if (!feasible) continue;
    if (!best || (inst.sense() == Sense::kMinimize ? objective < *best : objective > *best)) best = objective;
  } while (std::prev_permutation(pick.begin(), pick.end()));

  if (!best) throw NumericalError("no basic feasible solution found");
  return static_cast<double>(*best);
}

struct MonotonicityCertificate {
  long checked_tuples = 0;
  double worst_violation = 0.0;
  double tolerance = 1e-8;
  bool passed = true;
};

/// Samples N-tuples of support cells and permutations sigma_2..sigma_d, and
/// checks that recombining coordinates never beats the support at cell level:
///   sum_j a(c^j) <= sum_j a(c^j_1, c^{sigma_2(j)}_2, ..., c^{sigma_d(j)}_d)   (min)
/// with the inequality reversed for max. Cells are drawn with replacement.
inline MonotonicityCertificate check_cyclical_monotonicity(const DiscreteCopula& c, const EnvelopeGrid& grid,
                                                           Sense sense, long tuples, int tuple_size,
                                                           std::uint64_t seed, double tolerance = 1e-8) {
  if (!(grid.spec() == c.spec())) throw InvalidArgument("envelope grid does not match the copula grid");
  if (tuple_size < 1) throw InvalidArgument("tuple size must be positive");
  const std::vector<SupportEntry> support = c.support();
  if (support.empty()) throw InvalidArgument("copula has empty support");

  const auto d = static_cast<std::size_t>(c.spec().d());
  const auto N = static_cast<std::size_t>(tuple_size);
  const double sign = sense == Sense::kMinimize ? 1.0 : -1.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);

  MonotonicityCertificate cert;
  cert.tolerance = tolerance;
  std::vector<const CellIndex*> tuple(N);
  std::vector<std::vector<std::size_t>> sigma(d, std::vector<std::size_t>(N));
  CellIndex mixed(d);
  for (long t = 0; t < tuples; ++t) {
    for (auto& cell : tuple) cell = &support[pick(rng)].index;
    for (std::size_t k = 1; k < d; ++k) {
      std::iota(sigma[k].begin(), sigma[k].end(), std::size_t{0});
      std::shuffle(sigma[k].begin(), sigma[k].end(), rng);
    }
    double original = 0.0, permuted = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      original += grid.at(*tuple[j]);
      mixed[0] = (*tuple[j])[0];
      for (std::size_t k = 1; k < d; ++k) mixed[k] = (*tuple[sigma[k][j]])[k];
      permuted += grid.at(mixed);
    }
    cert.worst_violation = std::max(cert.worst_violation, sign * (original - permuted));
    ++cert.checked_tuples;
  }
  cert.passed = cert.worst_violation <= tolerance;
  return cert;
}

}  // namespace copulabounds
