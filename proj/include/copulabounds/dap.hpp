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

// Continuous relaxation of the axial d-dimensional assignment problem
//
//   min / max  sum_i a_i x_i
//   s.t.       sum_{i : i_k = l} x_i = rhs     for every axis k and level l
//              x >= 0
//
// solved by a revised simplex method that never materializes the constraint
// matrix: the column of cell i has a one in row (k, i_k) for every axis k.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "copulabounds/envelope.hpp"
#include "copulabounds/error.hpp"
#include "copulabounds/grid.hpp"

namespace copulabounds {

enum class Sense { kMinimize, kMaximize };

inline const char* to_string(Sense s) { return s == Sense::kMinimize ? "min" : "max"; }

enum class SolveStatus { kOptimal, kUnboundedImpossible, kInfeasibleImpossible, kIterationLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kUnboundedImpossible: return "unbounded_impossible";
    case SolveStatus::kInfeasibleImpossible: return "infeasible_impossible";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

class DapInstance {
 public:
  DapInstance(GridSpec spec, Sense sense, std::vector<double> costs, double rhs)
      : spec_(spec), sense_(sense), costs_(std::move(costs)), rhs_(rhs) {
    if (costs_.size() != spec_.cell_count())
      throw InvalidArgument("d-AP needs " + std::to_string(spec_.cell_count()) + " costs, got " +
                            std::to_string(costs_.size()));
    for (double a : costs_)
      if (!std::isfinite(a)) throw InvalidArgument("d-AP costs must be finite");
    if (!(rhs_ > 0.0) || !std::isfinite(rhs_)) throw InvalidArgument("d-AP right-hand side must be positive");
  }

  const GridSpec& spec() const noexcept { return spec_; }
  Sense sense() const noexcept { return sense_; }
  const std::vector<double>& costs() const noexcept { return costs_; }
  double rhs() const noexcept { return rhs_; }

  std::size_t constraint_count() const noexcept { return spec_.slice_count(); }
  std::size_t variable_count() const noexcept { return spec_.cell_count(); }
  /// Rank of the slice system: d*n - (d - 1).
  std::size_t rank() const noexcept {
    return spec_.slice_count() - static_cast<std::size_t>(spec_.d() - 1);
  }

 private:
  GridSpec spec_;
  Sense sense_;
  std::vector<double> costs_;
  double rhs_;
};

inline DapInstance build_dap(const EnvelopeGrid& grid, Sense sense, double rhs) {
  return DapInstance(grid.spec(), sense, grid.coeffs(), rhs);
}

struct SupportEntry {
  CellIndex index;
  double mass = 0.0;
};

struct DapSolution {
  GridSpec spec{2, 1};
  Sense sense = Sense::kMinimize;
  double rhs = 1.0;
  SolveStatus status = SolveStatus::kOptimal;
  double value = 0.0;
  std::vector<SupportEntry> support;  // mass > 0, mixed-radix order
  long iterations = 0;
  /// duals[k][l] for the slice (axis k+1, level l+1); dropped rows carry 0.
  std::vector<std::vector<double>> duals;

  bool optimal() const noexcept { return status == SolveStatus::kOptimal; }
};

struct SolveOptions {
  /// Pivot budget; <= 0 selects max(1000, ceil(50 d n ln(n^d))).
  long max_iterations = 0;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degeneracy_streak = 0;  // <= 0: 2 * rank
  int refactor_interval = 50;
  double optimality_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
};

inline long default_pivot_budget(const GridSpec& spec) {
  const double budget =
      50.0 * spec.d() * spec.n() * spec.d() * std::log(static_cast<double>(spec.n()));
  return std::max<long>(1000, static_cast<long>(std::ceil(budget)));
}

namespace detail {

class AxialSimplex {
 public:
  AxialSimplex(const DapInstance& inst, const SolveOptions& opt) : inst_(inst), opt_(opt), spec_(inst.spec()) {
    d_ = spec_.d();
    n_ = spec_.n();
    rows_ = static_cast<int>(inst.rank());
    // Kept rows: all levels of axis 1, levels 1..n-1 of the other axes.
    row_of_.assign(static_cast<std::size_t>(d_), std::vector<int>(static_cast<std::size_t>(n_), -1));
    int r = 0;
    for (int k = 0; k < d_; ++k)
      for (int l = 0; l < n_; ++l)
        if (k == 0 || l < n_ - 1) row_of_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = r++;

    // Work on min c^T x with max |c| <= 1 and rhs = 1.
    const double sign = inst.sense() == Sense::kMinimize ? 1.0 : -1.0;
    double amax = 0.0;
    for (double a : inst.costs()) amax = std::max(amax, std::abs(a));
    scale_ = amax > 0.0 ? amax : 1.0;
    cost_.resize(inst.costs().size());
    for (std::size_t i = 0; i < cost_.size(); ++i) cost_[i] = sign * inst.costs()[i] / scale_;
    sign_ = sign;
  }

  DapSolution solve() {
    DapSolution sol;
    sol.spec = spec_;
    sol.sense = inst_.sense();
    sol.rhs = inst_.rhs();

    const long budget = opt_.max_iterations > 0 ? opt_.max_iterations : default_pivot_budget(spec_);
    const int streak_limit = opt_.degeneracy_streak > 0 ? opt_.degeneracy_streak : 2 * rows_;

    initial_basis();
    refactor();
    if (!primal_feasible()) {
      sol.status = SolveStatus::kInfeasibleImpossible;
      return finish(sol);
    }

    long it = 0;
    int degenerate = 0;
    int since_refactor = 0;
    bool bland = false;
    Eigen::VectorXd w(rows_);
    for (;;) {
      compute_duals();
      const std::int64_t q = price(bland);
      if (q < 0) {
        // Confirm optimality on a fresh factorization before stopping.
        if (since_refactor == 0) break;
        refactor();
        since_refactor = 0;
        continue;
      }
      if (it >= budget) {
        sol.status = SolveStatus::kIterationLimit;
        sol.iterations = it;
        return finish(sol);
      }

      column_times_inverse(static_cast<std::size_t>(q), w);
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        if (w[i] <= opt_.pivot_tolerance) continue;
        const double ratio = std::max(0.0, x_[i]) / w[i];
        if (leave < 0 || ratio < best_ratio - kRatioTie) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + kRatioTie &&
                   basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) {
        sol.status = SolveStatus::kUnboundedImpossible;
        sol.iterations = it;
        return finish(sol);
      }

      const double theta = std::max(0.0, x_[leave]) / w[leave];
      x_ -= theta * w;
      x_[leave] = theta;
      for (int i = 0; i < rows_; ++i)
        if (x_[i] < 0.0 && x_[i] > -opt_.feasibility_tolerance) x_[i] = 0.0;

      // Product-form update of the explicit inverse.
      const double piv = w[leave];
      Binv_.row(leave) /= piv;
      w[leave] = 0.0;
      const Eigen::RowVectorXd pivot_row = Binv_.row(leave);
      Binv_.noalias() -= w * pivot_row;

      in_basis_[basis_[static_cast<std::size_t>(leave)]] = 0;
      basis_[static_cast<std::size_t>(leave)] = static_cast<std::size_t>(q);
      in_basis_[static_cast<std::size_t>(q)] = 1;
      ++it;

      if (theta <= 1e-12) {
        if (++degenerate >= streak_limit) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      if (++since_refactor >= opt_.refactor_interval) {
        refactor();
        since_refactor = 0;
        if (!primal_feasible()) throw NumericalError("d-AP basis lost primal feasibility after refactorization");
      }
    }

    sol.status = SolveStatus::kOptimal;
    sol.iterations = it;
    return finish(sol);
  }

 private:
  static constexpr double kRatioTie = 1e-12;

  // Monotone staircase from (1,...,1) to (n,...,n), advancing one exhausted
  // axis at a time (north-west corner rule in d dimensions). It has exactly
  // d(n-1)+1 cells and is nonsingular on the kept rows.
  void initial_basis() {
    const auto ud = static_cast<std::size_t>(d_);
    std::vector<std::vector<double>> remaining(ud, std::vector<double>(static_cast<std::size_t>(n_), 1.0));
    CellIndex p(ud, 1);
    basis_.clear();
    in_basis_.assign(spec_.cell_count(), 0);
    for (;;) {
      const std::size_t f = spec_.flat(p);
      basis_.push_back(f);
      in_basis_[f] = 1;
      double amount = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ud; ++k) amount = std::min(amount, remaining[k][static_cast<std::size_t>(p[k] - 1)]);
      for (std::size_t k = 0; k < ud; ++k) remaining[k][static_cast<std::size_t>(p[k] - 1)] -= amount;
      bool advanced = false;
      for (std::size_t k = 0; k < ud && !advanced; ++k) {
        if (p[k] < n_ && remaining[k][static_cast<std::size_t>(p[k] - 1)] <= 0.0) {
          ++p[k];
          advanced = true;
        }
      }
      if (!advanced) break;
    }
    if (static_cast<int>(basis_.size()) != rows_)
      throw NumericalError("initial staircase basis has wrong size");
  }

  template <typename F>
  void for_each_row(std::size_t flat, F&& fn) const {
    for (int k = d_ - 1; k >= 0; --k) {
      const int l = static_cast<int>(flat % static_cast<std::size_t>(n_));
      flat /= static_cast<std::size_t>(n_);
      const int r = row_of_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      if (r >= 0) fn(r);
    }
  }

  void refactor() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rows_, rows_);
    for (int j = 0; j < rows_; ++j) for_each_row(basis_[static_cast<std::size_t>(j)], [&](int r) { B(r, j) = 1.0; });
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) throw NumericalError("d-AP basis became singular");
    Binv_ = lu.inverse();
    // b on the kept rows is all ones.
    x_ = Binv_.rowwise().sum();
    for (int i = 0; i < rows_; ++i)
      if (x_[i] < 0.0 && x_[i] > -opt_.feasibility_tolerance) x_[i] = 0.0;
  }

  bool primal_feasible() const {
    for (int i = 0; i < rows_; ++i)
      if (x_[i] < -opt_.feasibility_tolerance) return false;
    return true;
  }

  void column_times_inverse(std::size_t flat, Eigen::VectorXd& w) const {
    w.setZero();
    for_each_row(flat, [&](int r) { w += Binv_.col(r); });
  }

  // y^T = c_B^T B^{-1}, spread to one dual per (axis, level).
  void compute_duals() {
    Eigen::VectorXd cb(rows_);
    for (int j = 0; j < rows_; ++j) cb[j] = cost_[basis_[static_cast<std::size_t>(j)]];
    const Eigen::VectorXd y = Binv_.transpose() * cb;
    duals_.assign(static_cast<std::size_t>(d_) * static_cast<std::size_t>(n_), 0.0);
    for (int k = 0; k < d_; ++k)
      for (int l = 0; l < n_; ++l) {
        const int r = row_of_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
        if (r >= 0) duals_[static_cast<std::size_t>(k * n_ + l)] = y[r];
      }
  }

  // Dantzig: most negative reduced cost, smallest index on ties.
  // Bland: smallest index with a negative reduced cost.
  std::int64_t price(bool bland) const {
    best_rc_ = -opt_.optimality_tolerance;
    best_ = -1;
    sweep(0, 0, 0.0, bland);
    return best_;
  }

  // Returns true to stop the sweep early (Bland found its column).
  bool sweep(int axis, std::size_t prefix, double partial, bool bland) const {
    const double* y = duals_.data() + static_cast<std::size_t>(axis) * static_cast<std::size_t>(n_);
    if (axis == d_ - 1) {
      const std::size_t base = prefix * static_cast<std::size_t>(n_);
      for (int l = 0; l < n_; ++l) {
        const std::size_t f = base + static_cast<std::size_t>(l);
        if (in_basis_[f]) continue;
        const double rc = cost_[f] - partial - y[l];
        if (rc < best_rc_) {
          best_rc_ = rc;
          best_ = static_cast<std::int64_t>(f);
          if (bland) return true;
        }
      }
      return false;
    }
    for (int l = 0; l < n_; ++l)
      if (sweep(axis + 1, prefix * static_cast<std::size_t>(n_) + static_cast<std::size_t>(l), partial + y[l], bland))
        return true;
    return false;
  }

  DapSolution& finish(DapSolution& sol) {
    const double rhs = inst_.rhs();
    std::vector<std::pair<std::size_t, double>> entries;
    for (int j = 0; j < rows_; ++j)
      if (x_[j] > opt_.feasibility_tolerance) entries.emplace_back(basis_[static_cast<std::size_t>(j)], x_[j]);
    std::sort(entries.begin(), entries.end());
    double value = 0.0;
    sol.support.clear();
    for (const auto& [f, mass] : entries) {
      sol.support.push_back({spec_.unflat(f), mass * rhs});
      value += inst_.costs()[f] * mass;
    }
    sol.value = value * rhs;
    sol.duals.assign(static_cast<std::size_t>(d_), std::vector<double>(static_cast<std::size_t>(n_), 0.0));
    if (!duals_.empty())
      for (int k = 0; k < d_; ++k)
        for (int l = 0; l < n_; ++l)
          sol.duals[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
              sign_ * scale_ * duals_[static_cast<std::size_t>(k * n_ + l)];
    return sol;
  }

  const DapInstance& inst_;
  SolveOptions opt_;
  GridSpec spec_;
  int d_ = 0, n_ = 0, rows_ = 0;
  double scale_ = 1.0, sign_ = 1.0;
  std::vector<std::vector<int>> row_of_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  Eigen::MatrixXd Binv_;
  Eigen::VectorXd x_;
  std::vector<double> duals_;
  mutable double best_rc_ = 0.0;
  mutable std::int64_t best_ = -1;
};

}  // namespace detail

/// Solves the relaxed d-AP to optimality. The returned vertex is determined by
/// the deterministic pivot rules; status is kIterationLimit (never kOptimal)
/// when the pivot budget runs out.
inline DapSolution solve_relaxed(const DapInstance& instance, const SolveOptions& options = {}) {
  detail::AxialSimplex simplex(instance, options);
  return simplex.solve();
}

/// Largest violation |sum over slice - rhs| over all d*n slices.
inline double slice_residual(const GridSpec& spec, const std::vector<SupportEntry>& support, double rhs) {
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(spec.d()),
                                        std::vector<double>(static_cast<std::size_t>(spec.n()), 0.0));
  for (const auto& e : support)
    for (std::size_t k = 0; k < e.index.size(); ++k) sums[k][static_cast<std::size_t>(e.index[k] - 1)] += e.mass;
  double worst = 0.0;
  for (const auto& axis : sums)
    for (double s : axis) worst = std::max(worst, std::abs(s - rhs));
  return worst;
}

/// Optimality certificate built from the reported duals.
struct DualCertificate {
  /// min over cells of the reduced cost, sign-normalized so >= 0 means dual feasible.
  double worst_reduced_cost = 0.0;
  /// max over support cells of |reduced cost| (complementary slackness).
  double slackness_residual = 0.0;
  /// |primal value - rhs * sum of duals|.
  double duality_gap = 0.0;

  bool passed(double tol = 1e-8) const {
    return worst_reduced_cost >= -tol && slackness_residual <= tol && duality_gap <= tol;
  }
};

inline DualCertificate check_duals(const DapInstance& inst, const DapSolution& sol) {
  const GridSpec& spec = inst.spec();
  const double sign = inst.sense() == Sense::kMinimize ? 1.0 : -1.0;
  double amax = 0.0;
  for (double a : inst.costs()) amax = std::max(amax, std::abs(a));
  const double scale = amax > 0.0 ? amax : 1.0;

  DualCertificate cert;
  cert.worst_reduced_cost = std::numeric_limits<double>::infinity();
  auto reduced = [&](const CellIndex& i, double a) {
    double r = a;
    for (std::size_t k = 0; k < i.size(); ++k) r -= sol.duals[k][static_cast<std::size_t>(i[k] - 1)];
    return sign * r / scale;
  };
  CellIndex i = spec.first();
  std::size_t f = 0;
  do {
    cert.worst_reduced_cost = std::min(cert.worst_reduced_cost, reduced(i, inst.costs()[f++]));
  } while (spec.next(i));
  for (const auto& e : sol.support)
    cert.slackness_residual = std::max(cert.slackness_residual, std::abs(reduced(e.index, inst.costs()[spec.flat(e.index)])));
  double dual_value = 0.0;
  for (const auto& axis : sol.duals)
    for (double y : axis) dual_value += y;
  cert.duality_gap = std::abs(sol.value - inst.rhs() * dual_value) / scale;
  return cert;
}

}  // namespace copulabounds
