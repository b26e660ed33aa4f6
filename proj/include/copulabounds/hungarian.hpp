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

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "copulabounds/dap.hpp"
#include "copulabounds/error.hpp"

namespace copulabounds {

using CostMatrix = std::vector<std::vector<double>>;

/// Optimal 2D assignment: row i is matched to column pi[i-1] (both 1-based).
struct Permutation2D {
  std::vector<int> pi;
  double value = 0.0;
};

inline void check_square(const CostMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) throw InvalidArgument("cost matrix is empty");
  for (const auto& row : a) {
    if (row.size() != n) throw InvalidArgument("cost matrix is not square");
    for (double v : row)
      if (!std::isfinite(v)) throw InvalidArgument("cost matrix entries must be finite");
  }
}

inline double assignment_value(const CostMatrix& a, const std::vector<int>& pi) {
  double v = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) v += a[i][static_cast<std::size_t>(pi[i] - 1)];
  return v;
}

/// Hungarian method with row/column potentials, O(n^3).
inline Permutation2D solve_hungarian(const CostMatrix& costs, Sense sense = Sense::kMinimize) {
  check_square(costs);
  const std::size_t n = costs.size();
  const double sign = sense == Sense::kMinimize ? 1.0 : -1.0;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based arrays; column 0 is a virtual column used to start each augmentation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col] = 1;
      const std::size_t r = match[col];
      double delta = kInf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = sign * costs[r - 1][j - 1] - u[r] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = col;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col = next;
    } while (match[col] != 0);
    do {
      const std::size_t prev = way[col];
      match[col] = match[prev];
      col = prev;
    } while (col != 0);
  }

  Permutation2D result;
  result.pi.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.pi[match[j] - 1] = static_cast<int>(j);
  result.value = assignment_value(costs, result.pi);
  return result;
}

}  // namespace copulabounds
