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

#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "copulabounds/copula.hpp"
#include "copulabounds/dap.hpp"
#include "copulabounds/envelope.hpp"
#include "copulabounds/error.hpp"
#include "copulabounds/expression.hpp"
#include "copulabounds/grid.hpp"

namespace copulabounds {

/// Multivariate Spearman's rho,
///   rho(C) = (d+1) / (2^d - (d+1)) * (2^d * int Pi dC - 1),
/// and the classical lower bound l_d = (2^d - (d+1)!) / (d! (2^d - (d+1))).
struct RhoSpec {
  int d = 2;
  double coefficient = 3.0;
  double l_d = -1.0;

  static RhoSpec for_dimension(int d) {
    if (d < 2) throw InvalidArgument("Spearman's rho needs d >= 2");
    const double two_d = std::ldexp(1.0, d);
    double fact = 1.0;
    for (int k = 2; k <= d; ++k) fact *= k;
    RhoSpec s;
    s.d = d;
    s.coefficient = (d + 1) / (two_d - (d + 1));
    s.l_d = (two_d - fact * (d + 1)) / (fact * (two_d - (d + 1)));
    return s;
  }
};

inline double rho_from_integral(double v, const RhoSpec& spec) {
  return spec.coefficient * (std::ldexp(v, spec.d) - 1.0);
}

/// Two-sided enclosure of opt_C int f dC at one grid size. lower_value is the
/// optimum over copulas of the lower envelope, upper_value of the upper one;
/// the true optimum lies between them for either sense.
struct BoundReport {
  int d = 2;
  int n = 1;
  Sense sense = Sense::kMinimize;
  double lower_value = 0.0;
  double upper_value = 0.0;
  double gap = 0.0;
  std::optional<double> rho_lower;
  std::optional<double> rho_upper;
  std::optional<double> l_d;
  std::size_t support_size = 0;
  long iterations = 0;
  double wall_time = 0.0;
  bool ok = true;
  std::string message;  // set when !ok
};

struct BoundRun {
  BoundReport report;
  EnvelopeGrid lower_grid;
  EnvelopeGrid upper_grid;
  DapInstance lower_instance;
  DapInstance upper_instance;
  DapSolution lower_solution;
  DapSolution upper_solution;
  DiscreteCopula lower_copula;
  DiscreteCopula upper_copula;
};

namespace detail {

inline DapSolution solve_or_throw(const DapInstance& inst, const SolveOptions& opt) {
  DapSolution sol = solve_relaxed(inst, opt);
  if (!sol.optimal())
    throw NumericalError(std::string("relaxed d-AP solve ended with status ") + to_string(sol.status) + " after " +
                         std::to_string(sol.iterations) + " pivots");
  return sol;
}

}  // namespace detail

/// Full pipeline at one grid size: envelopes, both LPs with rhs = 1/n, and
/// the optimal copula measures.
inline BoundRun bound(const Integrand& f, const GridSpec& spec, Sense sense, int sample_density = 2,
                      const SolveOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const double rhs = 1.0 / spec.n();
  EnvelopeGrid lower = build_envelope(f, spec, EnvelopeKind::kLower, sample_density);
  EnvelopeGrid upper = build_envelope(f, spec, EnvelopeKind::kUpper, sample_density);
  DapInstance lower_inst = build_dap(lower, sense, rhs);
  DapInstance upper_inst = build_dap(upper, sense, rhs);
  DapSolution lower_sol = detail::solve_or_throw(lower_inst, options);
  DapSolution upper_sol = detail::solve_or_throw(upper_inst, options);
  DiscreteCopula lower_cop = from_solution(lower_sol, spec);
  DiscreteCopula upper_cop = from_solution(upper_sol, spec);

  BoundReport r;
  r.d = spec.d();
  r.n = spec.n();
  r.sense = sense;
  r.lower_value = lower_sol.value;
  r.upper_value = upper_sol.value;
  r.gap = r.upper_value - r.lower_value;
  // Report the solution that bounds the optimum from the optimized side.
  r.support_size = sense == Sense::kMinimize ? lower_sol.support.size() : upper_sol.support.size();
  r.iterations = lower_sol.iterations + upper_sol.iterations;
  if (f.is_independence_product()) {
    const RhoSpec rho = RhoSpec::for_dimension(spec.d());
    r.rho_lower = rho_from_integral(r.lower_value, rho);
    r.rho_upper = rho_from_integral(r.upper_value, rho);
    r.l_d = rho.l_d;
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return BoundRun{std::move(r),
                  std::move(lower),
                  std::move(upper),
                  std::move(lower_inst),
                  std::move(upper_inst),
                  std::move(lower_sol),
                  std::move(upper_sol),
                  std::move(lower_cop),
                  std::move(upper_cop)};
}

/// Enclosure of min_C rho(C): bound() on the independence product.
inline BoundRun rho_bounds(const GridSpec& spec, const SolveOptions& options = {}) {
  return bound(independence_product(spec.d()), spec, Sense::kMinimize, 2, options);
}

/// One report per grid size. A failing grid size yields a report with
/// ok = false and the error message instead of aborting the sweep.
inline std::vector<BoundReport> convergence_sweep(const Integrand& f, int d, Sense sense, const std::vector<int>& n_list,
                                                  int sample_density = 2, const SolveOptions& options = {}) {
  if (n_list.empty()) throw InvalidArgument("sweep needs at least one grid size");
  for (std::size_t j = 1; j < n_list.size(); ++j)
    if (n_list[j] <= n_list[j - 1]) throw InvalidArgument("sweep grid sizes must be strictly increasing");
  std::vector<BoundReport> out;
  for (int n : n_list) {
    try {
      out.push_back(bound(f, GridSpec(d, n), sense, sample_density, options).report);
    } catch (const Error& e) {
      BoundReport r;
      r.d = d;
      r.n = n;
      r.sense = sense;
      r.ok = false;
      r.message = e.what();
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace copulabounds
