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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "copulabounds/error.hpp"

namespace copulabounds {

/// Multi-index (i_1, ..., i_d) of one grid cube, 1-based on every axis.
using CellIndex = std::vector<int>;

/// A point of the unit cube [0,1]^d.
using Point = std::vector<double>;

/// Uniform partition of [0,1]^d into n^d cubes.
///
/// Cells are addressed either by a CellIndex or by a flat offset in
/// mixed-radix order with axis 1 slowest, which is also the storage order of
/// every dense tensor in the library.
class GridSpec {
 public:
  GridSpec(int d, int n) : d_(d), n_(n) {
    if (d < 2) throw InvalidArgument("grid dimension d must be >= 2, got " + std::to_string(d));
    if (n < 1) throw InvalidArgument("cells per axis n must be >= 1, got " + std::to_string(n));
    // n^d doubles must be addressable.
    constexpr std::size_t limit = static_cast<std::size_t>(std::numeric_limits<std::ptrdiff_t>::max()) / sizeof(double);
    std::size_t count = 1;
    for (int k = 0; k < d; ++k) {
      if (count > limit / static_cast<std::size_t>(n))
        throw InvalidArgument("grid with n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                              " has more cells than can be addressed");
      count *= static_cast<std::size_t>(n);
    }
    cells_ = count;
  }

  int d() const noexcept { return d_; }
  int n() const noexcept { return n_; }
  std::size_t cell_count() const noexcept { return cells_; }
  /// Number of slice constraints d*n.
  std::size_t slice_count() const noexcept { return static_cast<std::size_t>(d_) * n_; }

  bool contains(const CellIndex& i) const noexcept {
    if (static_cast<int>(i.size()) != d_) return false;
    for (int c : i)
      if (c < 1 || c > n_) return false;
    return true;
  }

  std::size_t flat(const CellIndex& i) const {
    if (!contains(i)) throw InvalidArgument("cell index out of range for this grid");
    std::size_t f = 0;
    for (int c : i) f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c - 1);
    return f;
  }

  CellIndex unflat(std::size_t f) const {
    if (f >= cells_) throw InvalidArgument("flat cell offset out of range");
    CellIndex i(static_cast<std::size_t>(d_));
    for (int k = d_ - 1; k >= 0; --k) {
      i[static_cast<std::size_t>(k)] = static_cast<int>(f % static_cast<std::size_t>(n_)) + 1;
      f /= static_cast<std::size_t>(n_);
    }
    return i;
  }

  /// Advances i to the next cell in mixed-radix order; returns false after the last cell.
  bool next(CellIndex& i) const noexcept {
    for (int k = d_ - 1; k >= 0; --k) {
      auto& c = i[static_cast<std::size_t>(k)];
      if (c < n_) {
        ++c;
        return true;
      }
      c = 1;
    }
    return false;
  }

  CellIndex first() const { return CellIndex(static_cast<std::size_t>(d_), 1); }

  friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
    return a.d_ == b.d_ && a.n_ == b.n_;
  }

 private:
  int d_;
  int n_;
  std::size_t cells_ = 0;
};

/// Lower and upper corner of the cube I_i = [(i_1-1)/n, i_1/n) x ... .
/// The last cell on each axis is closed at 1, so the cells partition [0,1]^d.
inline std::pair<Point, Point> cell_bounds(const CellIndex& i, const GridSpec& spec) {
  if (!spec.contains(i)) throw InvalidArgument("cell index out of range for this grid");
  Point lo(i.size()), hi(i.size());
  const double n = spec.n();
  for (std::size_t k = 0; k < i.size(); ++k) {
    lo[k] = (i[k] - 1) / n;
    hi[k] = i[k] / n;
  }
  return {std::move(lo), std::move(hi)};
}

/// Level (1-based) of the cell containing coordinate x on an axis with n cells.
/// Consistent with cell_bounds: (l-1)/n <= x < l/n, or l = n when x = 1.
inline int cell_level(double x, int n) noexcept {
  int l = static_cast<int>(x * n) + 1;
  if (l > n) l = n;
  if (l < 1) l = 1;
  // x * n may round across a cell boundary.
  if (l < n && x >= static_cast<double>(l) / n) ++l;
  if (l > 1 && x < static_cast<double>(l - 1) / n) --l;
  return l;
}

}  // namespace copulabounds
