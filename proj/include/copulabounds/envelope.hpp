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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "copulabounds/error.hpp"
#include "copulabounds/expression.hpp"
#include "copulabounds/grid.hpp"

namespace copulabounds {

enum class EnvelopeKind { kLower, kUpper };

inline const char* to_string(EnvelopeKind k) { return k == EnvelopeKind::kLower ? "lower" : "upper"; }

/// Piecewise-constant envelope of an integrand: one coefficient a_i per cell,
/// the cell-wise minimum (kLower) or maximum (kUpper).
class EnvelopeGrid {
 public:
  EnvelopeGrid(GridSpec spec, EnvelopeKind kind, std::vector<double> coeffs, int sample_density)
      : spec_(spec), kind_(kind), coeffs_(std::move(coeffs)), sample_density_(sample_density) {
    if (coeffs_.size() != spec_.cell_count())
      throw InvalidArgument("envelope needs " + std::to_string(spec_.cell_count()) + " coefficients, got " +
                            std::to_string(coeffs_.size()));
    for (double a : coeffs_)
      if (!std::isfinite(a)) throw InvalidArgument("envelope coefficients must be finite");
  }

  const GridSpec& spec() const noexcept { return spec_; }
  EnvelopeKind kind() const noexcept { return kind_; }
  int sample_density() const noexcept { return sample_density_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  double operator[](std::size_t flat) const { return coeffs_[flat]; }
  double at(const CellIndex& i) const { return coeffs_[spec_.flat(i)]; }

  double max_abs() const {
    double m = 0.0;
    for (double a : coeffs_) m = std::max(m, std::abs(a));
    return m;
  }

 private:
  GridSpec spec_;
  EnvelopeKind kind_;
  std::vector<double> coeffs_;
  int sample_density_;
};

/// Builds f_n^min (kLower) or f_n^max (kUpper) by evaluating f on an m^d
/// lattice inside every cell, corners included. Exact whenever f attains its
/// cell extremum on the lattice, in particular for coordinatewise monotone f.
///
/// Cells are independent; the integrand is only read.
inline EnvelopeGrid build_envelope(const Integrand& f, const GridSpec& spec, EnvelopeKind kind,
                                   int sample_density = 2) {
  if (sample_density < 2) throw InvalidArgument("sample_density must be >= 2");
  if (f.arity() != spec.d())
    throw InvalidArgument("integrand arity " + std::to_string(f.arity()) + " does not match grid dimension " +
                          std::to_string(spec.d()));
  const int d = spec.d(), n = spec.n(), m = sample_density;
  const auto ud = static_cast<std::size_t>(d);
  const auto um = static_cast<std::size_t>(m);

  // Lattice coordinate t of level l: ((l-1)(m-1) + t) / ((m-1) n). Integer
  // numerators keep shared faces of neighbouring cells bit-identical.
  std::vector<double> coord(static_cast<std::size_t>(n) * um);
  const double denom = static_cast<double>(m - 1) * n;
  for (int l = 0; l < n; ++l)
    for (int t = 0; t < m; ++t)
      coord[static_cast<std::size_t>(l) * um + static_cast<std::size_t>(t)] =
          (static_cast<double>(l) * (m - 1) + t) / denom;

  std::vector<double> coeffs(spec.cell_count());
  CellIndex cell = spec.first();
  std::vector<int> tick(ud);
  Point p(ud);
  std::size_t flat = 0;
  do {
    std::fill(tick.begin(), tick.end(), 0);
    double best = kind == EnvelopeKind::kLower ? std::numeric_limits<double>::infinity()
                                               : -std::numeric_limits<double>::infinity();
    for (;;) {
      for (std::size_t k = 0; k < ud; ++k)
        p[k] = coord[static_cast<std::size_t>(cell[k] - 1) * um + static_cast<std::size_t>(tick[k])];
      double v;
      try {
        v = f(p);
      } catch (const DomainError& e) {
        std::string where = " inside cell (";
        for (std::size_t k = 0; k < ud; ++k) where += (k ? "," : "") + std::to_string(cell[k]);
        throw DomainError(e.reason(), e.point(), where + ")");
      }
      best = kind == EnvelopeKind::kLower ? std::min(best, v) : std::max(best, v);
      std::size_t k = ud;
      while (k > 0 && ++tick[k - 1] == m) tick[--k] = 0;
      if (k == 0) break;
    }
    coeffs[flat++] = best;
  } while (spec.next(cell));

  return EnvelopeGrid(spec, kind, std::move(coeffs), sample_density);
}

}  // namespace copulabounds
