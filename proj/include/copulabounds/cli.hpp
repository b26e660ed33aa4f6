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

// Command-line driver. Kept header-only so the test suites can call run()
// directly and compare the produced output.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "copulabounds/copula.hpp"
#include "copulabounds/dap.hpp"
#include "copulabounds/envelope.hpp"
#include "copulabounds/error.hpp"
#include "copulabounds/expression.hpp"
#include "copulabounds/hungarian.hpp"
#include "copulabounds/io.hpp"
#include "copulabounds/measures.hpp"
#include "copulabounds/oracles.hpp"

namespace copulabounds::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

struct RunConfig {
  std::string command;
  std::string f;
  int d = 3;
  int n = 10;
  std::vector<int> n_list;
  std::string sense = "min";
  int sample_density = 2;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string output;
  // export-copula
  std::string envelope = "lower";
  std::string cdf_grid;
  int cdf_points = 11;
  long samples = 0;
  std::string samples_output;
  std::string grid_output;
  // verify
  long tuples = 1000;
  int tuple_size = 4;
};

inline Json to_json(const RunConfig& c) {
  Json j{{"command", c.command}, {"f", c.f}, {"d", c.d}};
  if (c.command == "sweep") j["n_list"] = c.n_list;
  else j["n"] = c.n;
  j["sense"] = c.sense;
  j["sample_density"] = c.sample_density;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["output"] = c.output;
  if (c.command == "export-copula") {
    j["envelope"] = c.envelope;
    j["cdf_grid"] = c.cdf_grid;
    j["cdf_points"] = c.cdf_points;
    j["samples"] = c.samples;
    j["samples_output"] = c.samples_output;
    j["grid_output"] = c.grid_output;
  }
  if (c.command == "verify") {
    j["tuples"] = c.tuples;
    j["tuple_size"] = c.tuple_size;
  }
  return j;
}

namespace detail {

inline Sense parse_sense(const std::string& s) {
  if (s == "min" || s == "minimize") return Sense::kMinimize;
  if (s == "max" || s == "maximize") return Sense::kMaximize;
  throw InvalidArgument("--sense must be 'min' or 'max', got '" + s + "'");
}

inline void validate(const RunConfig& c) {
  if (c.d < 2) throw InvalidArgument("--d must be >= 2");
  if (c.command == "sweep") {
    if (c.n_list.empty()) throw InvalidArgument("sweep needs --n-list");
  } else if (c.n < 1) {
    throw InvalidArgument("--n must be >= 1");
  }
  if (c.command != "rho" && c.f.empty()) throw InvalidArgument("--f is required for '" + c.command + "'");
  parse_sense(c.sense);
  if (c.sample_density < 2) throw InvalidArgument("--sample-density must be >= 2");
  if (c.format != "json" && c.format != "csv" && c.format != "human")
    throw InvalidArgument("--format must be json, csv or human");
  if (c.envelope != "lower" && c.envelope != "upper") throw InvalidArgument("--envelope must be lower or upper");
  if (c.tuple_size < 1) throw InvalidArgument("--tuple-size must be >= 1");
}

inline std::string sig6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

inline std::string enclosure(double lo, double hi) {
  return "[" + sig6(lo) + ", " + sig6(hi) + "] (gap " + sig6(hi - lo) + ")";
}

inline Integrand integrand_for(const RunConfig& c, std::ostream& err) {
  Integrand f = c.command == "rho" && c.f.empty() ? independence_product(c.d) : parse_integrand(c.f, c.d);
  if (f.monotonicity_hint() == Monotonicity::kUnknown && c.sample_density == 2)
    err << "warning: integrand is not provably coordinatewise monotone; cell extrema sampled at corners only "
           "(raise --sample-density for a finer lattice)\n";
  return f;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidArgument("cannot open output file '" + path + "'");
    }
    os_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline void print_report(const RunConfig& c, const BoundReport& r, std::ostream& os) {
  if (c.format == "json") {
    Json j = to_json(r);
    j["config"] = to_json(c);
    os << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    write_reports_csv(os, {r});
  } else {
    os << "n=" << r.n << " d=" << r.d << " sense=" << to_string(r.sense) << ": "
       << enclosure(r.lower_value, r.upper_value) << '\n';
    if (r.rho_lower)
      os << "rho: " << enclosure(*r.rho_lower, *r.rho_upper) << "  l_d = " << sig6(*r.l_d) << '\n';
  }
}

inline int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace detail

/// Executes one configured command and returns the process exit code.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    detail::validate(config);
    const Sense sense = detail::parse_sense(config.sense);

    if (config.command == "bound" || config.command == "rho") {
      const Integrand f = detail::integrand_for(config, err);
      const BoundRun run = bound(f, GridSpec(config.d, config.n), sense, config.sample_density);
      BoundReport r = run.report;
      if (config.command == "rho" && !r.rho_lower) {
        const RhoSpec rho = RhoSpec::for_dimension(config.d);
        r.rho_lower = rho_from_integral(r.lower_value, rho);
        r.rho_upper = rho_from_integral(r.upper_value, rho);
        r.l_d = rho.l_d;
      }
      detail::Output o(config.output, out);
      detail::print_report(config, r, o.stream());
      return kOk;
    }

    if (config.command == "sweep") {
      const Integrand f = detail::integrand_for(config, err);
      const auto reports = convergence_sweep(f, config.d, sense, config.n_list, config.sample_density);
      detail::Output o(config.output, out);
      if (config.format == "json") {
        Json arr = Json::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        o.stream() << Json{{"config", to_json(config)}, {"reports", arr}}.dump(2) << '\n';
      } else if (config.format == "csv") {
        write_reports_csv(o.stream(), reports);
      } else {
        for (const auto& r : reports) {
          if (r.ok) o.stream() << "n=" << r.n << ": " << detail::enclosure(r.lower_value, r.upper_value) << '\n';
          else o.stream() << "n=" << r.n << ": error: " << r.message << '\n';
        }
      }
      for (const auto& r : reports)
        if (!r.ok) {
          err << "error at n=" << r.n << ": " << r.message << '\n';
          return kNumerical;
        }
      return kOk;
    }

    if (config.command == "export-copula") {
      const Integrand f = detail::integrand_for(config, err);
      const BoundRun run = bound(f, GridSpec(config.d, config.n), sense, config.sample_density);
      const bool lower = config.envelope == "lower";
      const DiscreteCopula& cop = lower ? run.lower_copula : run.upper_copula;
      Json j = to_json(cop);
      j["config"] = to_json(config);
      {
        detail::Output o(config.output, out);
        o.stream() << j.dump(2) << '\n';
      }
      if (!config.cdf_grid.empty()) {
        detail::Output o(config.cdf_grid, out);
        write_cdf_grid_csv(o.stream(), cop, config.cdf_points);
      }
      if (config.samples > 0) {
        detail::Output o(config.samples_output, out);
        write_points_csv(o.stream(), cop.sample(static_cast<std::size_t>(config.samples), config.seed), config.d);
      }
      if (!config.grid_output.empty()) {
        detail::Output o(config.grid_output, out);
        const EnvelopeGrid& g = lower ? run.lower_grid : run.upper_grid;
        if (config.grid_output.ends_with(".csv")) write_csv(o.stream(), g);
        else o.stream() << to_json(g).dump() << '\n';
      }
      return kOk;
    }

    if (config.command == "verify") return detail::run_verify(config, out, err);

    throw InvalidArgument("unknown command '" + config.command + "'");
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

namespace detail {

inline int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Sense sense = parse_sense(c.sense);
  const Integrand f = integrand_for(c, err);
  const GridSpec spec(c.d, c.n);
  const BoundRun run = bound(f, spec, sense, c.sample_density);

  Json checks = Json::array();
  bool all_passed = true;
  auto record = [&](const std::string& name, bool passed, Json detail) {
    all_passed = all_passed && passed;
    checks.push_back(Json{{"check", name}, {"passed", passed}, {"detail", std::move(detail)}});
  };

  struct Side {
    const char* name;
    const EnvelopeGrid& grid;
    const DapInstance& inst;
    const DapSolution& sol;
    const DiscreteCopula& cop;
  };
  const Side sides[] = {
      {"lower", run.lower_grid, run.lower_instance, run.lower_solution, run.lower_copula},
      {"upper", run.upper_grid, run.upper_instance, run.upper_solution, run.upper_copula},
  };
  for (const Side& s : sides) {
    const std::string tag = std::string(s.name) + ": ";
    const double scale = std::max(1.0, s.grid.max_abs());

    const double residual = slice_residual(spec, s.sol.support, s.sol.rhs);
    record(tag + "slice sums", residual <= 1e-9, Json{{"max_residual", residual}});

    const DualCertificate dual = check_duals(s.inst, s.sol);
    record(tag + "dual certificate", dual.passed(1e-8),
           Json{{"worst_reduced_cost", dual.worst_reduced_cost},
                {"slackness_residual", dual.slackness_residual},
                {"duality_gap", dual.duality_gap}});

    for (int size = 2; size <= std::max(2, c.tuple_size); ++size) {
      const MonotonicityCertificate cert =
          check_cyclical_monotonicity(s.cop, s.grid, sense, c.tuples, size, c.seed + static_cast<std::uint64_t>(size));
      record(tag + "cyclical monotonicity N=" + std::to_string(size), cert.passed, to_json(cert));
    }

    double margin = 0.0;
    for (int k = 0; k < spec.d(); ++k)
      for (int t = 0; t <= 100; ++t) {
        Point p(static_cast<std::size_t>(spec.d()), 1.0);
        p[static_cast<std::size_t>(k)] = t / 100.0;
        margin = std::max(margin, std::abs(s.cop.cdf(p) - t / 100.0));
      }
    record(tag + "uniform margins", margin <= 1e-9, Json{{"max_error", margin}});

    if (spec.d() == 2) {
      CostMatrix a(static_cast<std::size_t>(spec.n()), std::vector<double>(static_cast<std::size_t>(spec.n())));
      for (int i = 1; i <= spec.n(); ++i)
        for (int j = 1; j <= spec.n(); ++j) a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = s.grid.at({i, j});
      const double hung = solve_hungarian(a, sense).value * s.sol.rhs;
      record(tag + "hungarian agreement", std::abs(hung - s.sol.value) <= 1e-9 * scale,
             Json{{"lp", s.sol.value}, {"hungarian", hung}});
      if (spec.n() <= 9) {
        const double brute = brute_force_2ap(a, sense).value * s.sol.rhs;
        record(tag + "permutation enumeration", std::abs(brute - s.sol.value) <= 1e-9 * scale,
               Json{{"lp", s.sol.value}, {"enumeration", brute}});
      }
    }
    if (spec.cell_count() <= 12) {
      const double brute = brute_force_dap_vertices(s.inst);
      record(tag + "vertex enumeration", std::abs(brute - s.sol.value) <= 1e-9 * scale,
             Json{{"lp", s.sol.value}, {"enumeration", brute}});
    }
  }

  Output o(c.output, out);
  if (c.format == "human") {
    for (const auto& ch : checks)
      o.stream() << (ch["passed"].get<bool>() ? "PASS " : "FAIL ") << ch["check"].get<std::string>() << '\n';
    o.stream() << (all_passed ? "all checks passed" : "verification FAILED") << '\n';
  } else {
    Json j{{"config", to_json(c)}, {"report", to_json(run.report)}, {"checks", checks}, {"passed", all_passed}};
    o.stream() << j.dump(2) << '\n';
  }
  return all_passed ? kOk : kVerification;
}

/// Fills options that were not given on the command line from a JSON config file.
inline void merge_config_file(const std::string& path, CLI::App& sub, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  const Json j = Json::parse(in);
  auto take = [&](const char* key, const char* flag, auto& field) {
    if (j.contains(key) && sub.count(flag) == 0) j.at(key).get_to(field);
  };
  take("f", "--f", c.f);
  take("d", "--d", c.d);
  take("n", "--n", c.n);
  take("n_list", "--n-list", c.n_list);
  take("sense", "--sense", c.sense);
  take("sample_density", "--sample-density", c.sample_density);
  take("seed", "--seed", c.seed);
  take("format", "--format", c.format);
  take("output", "--output", c.output);
  take("envelope", "--envelope", c.envelope);
  take("cdf_grid", "--cdf-grid", c.cdf_grid);
  take("cdf_points", "--cdf-points", c.cdf_points);
  take("samples", "--samples", c.samples);
  take("samples_output", "--samples-output", c.samples_output);
  take("grid_output", "--grid-output", c.grid_output);
  take("tuples", "--tuples", c.tuples);
  take("tuple_size", "--tuple-size", c.tuple_size);
}

}  // namespace detail

/// Parses argv and runs the selected command.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Best-possible bounds on integrals with respect to d-dimensional copulas"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunConfig config;
  std::string config_path;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"bound", "enclose min/max of the integral of f over all copulas"},
      {"rho", "enclose the minimum of multivariate Spearman's rho"},
      {"sweep", "run bound over increasing grid sizes"},
      {"export-copula", "write the optimal copula measure (JSON) and optional CDF grid / samples (CSV)"},
      {"verify", "rerun bound with oracles and optimality certificates"},
  };
  for (const Command& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    const std::string name = cmd.name;
    sub->add_option("--f", config.f, "integrand over x1..xd, e.g. \"x1*x2*x3\"");
    sub->add_option("--d", config.d, "dimension");
    if (name == "sweep") sub->add_option("--n-list", config.n_list, "strictly increasing grid sizes")->delimiter(',');
    else sub->add_option("--n", config.n, "cells per axis");
    sub->add_option("--sense", config.sense, "min or max");
    sub->add_option("--sample-density", config.sample_density, "lattice points per axis inside each cell (>= 2)");
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--format", config.format, "json, csv or human");
    sub->add_option("--output,-o", config.output, "write the report here instead of stdout");
    sub->add_option("--config", config_path, "JSON file with the same keys; flags win");
    if (name == "export-copula") {
      sub->add_option("--envelope", config.envelope, "lower or upper");
      sub->add_option("--cdf-grid", config.cdf_grid, "CSV path for CDF values on a regular grid");
      sub->add_option("--cdf-points", config.cdf_points, "CDF grid points per axis");
      sub->add_option("--samples", config.samples, "number of points to sample from the copula");
      sub->add_option("--samples-output", config.samples_output, "CSV path for the samples (default stdout)");
      sub->add_option("--grid-output", config.grid_output, "envelope export (.csv or JSON)");
    }
    if (name == "verify") {
      sub->add_option("--tuples", config.tuples, "random tuples per monotonicity check");
      sub->add_option("--tuple-size", config.tuple_size, "largest tuple size N checked");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  config.command = sub->get_name();
  if (!config_path.empty()) {
    try {
      detail::merge_config_file(config_path, *sub, config);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  return run(config, out, err);
}

}  // namespace copulabounds::cli
