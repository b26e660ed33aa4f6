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
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "copulabounds/dap.hpp"
#include "copulabounds/envelope.hpp"
#include "copulabounds/error.hpp"
#include "copulabounds/grid.hpp"
#include "copulabounds/hungarian.hpp"

namespace copulabounds {

/// A d-fold stochastic measure that is uniform inside every grid cube.
///
/// Immutable after construction. The cumulative mass tensor behind cdf() is
/// built once on first use and shared between copies.
class DiscreteCopula {
 public:
  static constexpr double kTolerance = 1e-9;

  /// Throws NumericalError unless the masses are nonnegative, sum to one, and
  /// every axis slice carries exactly 1/n.
  DiscreteCopula(GridSpec spec, std::vector<SupportEntry> support) : spec_(spec) {
    for (auto& e : support) {
      if (!spec_.contains(e.index)) throw InvalidArgument("support cell outside the grid");
      if (!(e.mass >= -kTolerance) || !std::isfinite(e.mass)) throw NumericalError("negative or non-finite cell mass");
      if (e.mass > 0.0) entries_.push_back({spec_.flat(e.index), e.mass});
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.flat < b.flat; });
    for (std::size_t j = 1; j < entries_.size(); ++j)
      if (entries_[j].flat == entries_[j - 1].flat) throw InvalidArgument("duplicate support cell");

    double total = 0.0;
    for (const auto& e : entries_) total += e.mass;
    if (std::abs(total - 1.0) > kTolerance)
      throw NumericalError("copula masses sum to " + std::to_string(total) + ", expected 1");
    const double target = 1.0 / spec_.n();
    const auto sums = slice_sums();
    for (std::size_t k = 0; k < sums.size(); ++k)
      for (std::size_t l = 0; l < sums[k].size(); ++l)
        if (std::abs(sums[k][l] - target) > kTolerance)
          throw NumericalError("measure is not d-fold stochastic: slice " + std::to_string(l + 1) + " of axis " +
                               std::to_string(k + 1) + " carries " + std::to_string(sums[k][l]) + ", expected 1/" +
                               std::to_string(spec_.n()));
    cache_ = std::make_shared<Cache>();
  }

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t support_size() const noexcept { return entries_.size(); }

  std::vector<SupportEntry> support() const {
    std::vector<SupportEntry> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back({spec_.unflat(e.flat), e.mass});
    return out;
  }

  double mass(const CellIndex& i) const {
    const std::size_t f = spec_.flat(i);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f,
                               [](const Entry& e, std::size_t key) { return e.flat < key; });
    return (it != entries_.end() && it->flat == f) ? it->mass : 0.0;
  }

  /// sums[k][l]: mass of the slice {i : i_{k+1} = l+1}.
  std::vector<std::vector<double>> slice_sums() const {
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(spec_.d()),
                                          std::vector<double>(static_cast<std::size_t>(spec_.n()), 0.0));
    for (const auto& e : entries_) {
      std::size_t f = e.flat;
      for (int k = spec_.d() - 1; k >= 0; --k) {
        sums[static_cast<std::size_t>(k)][f % static_cast<std::size_t>(spec_.n())] += e.mass;
        f /= static_cast<std::size_t>(spec_.n());
      }
    }
    return sums;
  }

  /// C(x) = mu([0,x_1] x ... x [0,x_d]); multilinear inside each cell.
  double cdf(const Point& x) const {
    const int d = spec_.d(), n = spec_.n();
    if (static_cast<int>(x.size()) != d) throw InvalidArgument("cdf point has wrong dimension");
    for (double v : x)
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("cdf point outside the unit cube");
    const std::vector<double>& cum = cumulative();

    const auto ud = static_cast<std::size_t>(d);
    std::vector<int> level(ud);
    std::vector<double> weight(ud);
    for (std::size_t k = 0; k < ud; ++k) {
      level[k] = cell_level(x[k], n);
      weight[k] = std::clamp(n * x[k] - (level[k] - 1), 0.0, 1.0);
    }
    // Expand prod_k ((1 - w_k) [l <= c_k - 1] + w_k [l <= c_k]) over the 2^d corners.
    double total = 0.0;
    const std::size_t corners = std::size_t{1} << ud;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      double coeff = 1.0;
      std::size_t flat = 0;
      bool empty = false;
      for (std::size_t k = 0; k < ud; ++k) {
        const bool upper = (mask >> (ud - 1 - k)) & 1U;
        const int l = upper ? level[k] : level[k] - 1;
        coeff *= upper ? weight[k] : 1.0 - weight[k];
        if (l == 0) empty = true;
        flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(std::max(l, 1) - 1);
      }
      if (!empty && coeff != 0.0) total += coeff * cum[flat];
    }
    return total;
  }

  /// Alternating vertex sum of the CDF over the box [lo, hi].
  double c_volume(const Point& lo, const Point& hi) const {
    const auto ud = static_cast<std::size_t>(spec_.d());
    if (lo.size() != ud || hi.size() != ud) throw InvalidArgument("box has wrong dimension");
    for (std::size_t k = 0; k < ud; ++k)
      if (!(lo[k] <= hi[k])) throw InvalidArgument("box corners must satisfy lo <= hi on every axis");
    double vol = 0.0;
    Point v(ud);
    for (std::size_t mask = 0; mask < (std::size_t{1} << ud); ++mask) {
      int lows = 0;
      for (std::size_t k = 0; k < ud; ++k) {
        const bool upper = (mask >> k) & 1U;
        v[k] = upper ? hi[k] : lo[k];
        if (!upper) ++lows;
      }
      vol += (lows % 2 == 0 ? 1.0 : -1.0) * cdf(v);
    }
    return vol;
  }

  /// sum_i a_i * mass_i: the integral of the piecewise-constant f_n.
  double integrate_cellwise(const EnvelopeGrid& grid) const {
    if (!(grid.spec() == spec_)) throw InvalidArgument("envelope grid does not match the copula grid");
    double s = 0.0;
    for (const auto& e : entries_) s += grid[e.flat] * e.mass;
    return s;
  }

  /// Draws cells proportionally to mass, then a uniform point inside the cell.
  std::vector<Point> sample(std::size_t count, std::uint64_t seed) const {
    std::vector<Point> out;
    if (count == 0) return out;
    out.reserve(count);
    std::vector<double> cum(entries_.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < entries_.size(); ++j) cum[j] = (acc += entries_[j].mass);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto ud = static_cast<std::size_t>(spec_.d());
    const double n = spec_.n();
    for (std::size_t s = 0; s < count; ++s) {
      const double u = unif(rng) * acc;
      std::size_t j = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
      if (j >= entries_.size()) j = entries_.size() - 1;
      const CellIndex cell = spec_.unflat(entries_[j].flat);
      Point p(ud);
      for (std::size_t k = 0; k < ud; ++k) p[k] = (cell[k] - 1 + unif(rng)) / n;
      out.push_back(std::move(p));
    }
    return out;
  }

 private:
  struct Entry {
    std::size_t flat;
    double mass;
  };
  struct Cache {
    std::once_flag once;
    std::vector<double> cumulative;
  };

  // cum[i] = sum of masses over cells i' <= i componentwise.
  const std::vector<double>& cumulative() const {
    std::call_once(cache_->once, [this] {
      std::vector<double> cum(spec_.cell_count(), 0.0);
      for (const auto& e : entries_) cum[e.flat] = e.mass;
      const auto n = static_cast<std::size_t>(spec_.n());
      std::size_t stride = 1;
      for (int k = spec_.d() - 1; k >= 0; --k) {
        for (std::size_t f = 0; f < cum.size(); ++f)
          if ((f / stride) % n != 0) cum[f] += cum[f - stride];
        stride *= n;
      }
      cache_->cumulative = std::move(cum);
    });
    return cache_->cumulative;
  }

  GridSpec spec_;
  std::vector<Entry> entries_;
  std::shared_ptr<Cache> cache_;
};

/// Builds the copula measure from a solved relaxed d-AP, rescaling the
/// masses so every slice carries 1/n whatever right-hand side was solved.
inline DiscreteCopula from_solution(const DapSolution& sol, const GridSpec& spec) {
  if (!(sol.spec == spec)) throw InvalidArgument("solution grid does not match the requested grid");
  if (!sol.optimal()) throw NumericalError(std::string("cannot build a copula from a ") + to_string(sol.status) + " solution");
  const double factor = (1.0 / spec.n()) / sol.rhs;
  std::vector<SupportEntry> support = sol.support;
  for (auto& e : support) e.mass *= factor;
  return DiscreteCopula(spec, std::move(support));
}

/// Shuffle of M on the equidistant partition s_i = i/n: the square
/// [(i-1)/n, i/n) x [(pi(i)-1)/n, pi(i)/n) carries mass 1/n spread along its
/// diagonal (omega = +1) or antidiagonal (omega = -1).
struct ShuffleOfM {
  int n = 1;
  Permutation2D pi;
  std::vector<int> omega;

  /// Cell masses of the shuffle, one per square (the grid-level view).
  std::vector<SupportEntry> cell_masses() const {
    std::vector<SupportEntry> out;
    for (int i = 1; i <= n; ++i) out.push_back({{i, pi.pi[static_cast<std::size_t>(i - 1)]}, 1.0 / n});
    return out;
  }

  /// Closed-form CDF of the shuffle.
  double cdf(double x, double y) const {
    double c = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double x0 = (i - 1.0) / n;
      const double y0 = (pi.pi[static_cast<std::size_t>(i - 1)] - 1.0) / n;
      // Mass on the segment inside the square, parameterized by t in [0, 1/n].
      const double tx = std::clamp(x - x0, 0.0, 1.0 / n);
      double ty;
      if (omega[static_cast<std::size_t>(i - 1)] > 0) {
        ty = std::clamp(y - y0, 0.0, 1.0 / n);
        c += std::min(tx, ty);
      } else {
        // Antidiagonal: point (x0 + t, y0 + 1/n - t) lies below y iff t >= y0 + 1/n - y.
        const double lo = std::clamp(y0 + 1.0 / n - y, 0.0, 1.0 / n);
        c += std::max(0.0, tx - lo);
      }
    }
    return c;
  }
};

/// Reads the permutation off an integral 2D vertex solution (masses in {0, rhs}).
inline ShuffleOfM to_shuffle_of_m(const DapSolution& sol) {
  if (sol.spec.d() != 2) throw InvalidArgument("a Shuffle of M exists only for d = 2");
  const int n = sol.spec.n();
  ShuffleOfM s;
  s.n = n;
  s.pi.pi.assign(static_cast<std::size_t>(n), 0);
  s.omega.assign(static_cast<std::size_t>(n), 1);
  const double tol = 1e-9 * std::max(1.0, sol.rhs);
  for (const auto& e : sol.support) {
    if (std::abs(e.mass - sol.rhs) > tol)
      throw NumericalError("2D solution is not integral: cell (" + std::to_string(e.index[0]) + "," +
                           std::to_string(e.index[1]) + ") has mass " + std::to_string(e.mass));
    auto& slot = s.pi.pi[static_cast<std::size_t>(e.index[0] - 1)];
    if (slot != 0) throw NumericalError("2D solution assigns a row twice");
    slot = e.index[1];
  }
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (int j : s.pi.pi) {
    if (j == 0 || seen[static_cast<std::size_t>(j)]) throw NumericalError("2D solution is not a permutation");
    seen[static_cast<std::size_t>(j)] = 1;
  }
  s.pi.value = sol.value / sol.rhs;
  return s;
}

}  // namespace copulabounds
