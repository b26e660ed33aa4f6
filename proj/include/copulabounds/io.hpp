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

// JSON and CSV exchange formats. Flat coefficient arrays are in mixed-radix
// order with axis 1 slowest; cell indices are 1-based.

#include <charconv>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "copulabounds/copula.hpp"
#include "copulabounds/dap.hpp"
#include "copulabounds/envelope.hpp"
#include "copulabounds/measures.hpp"
#include "copulabounds/oracles.hpp"

namespace copulabounds {

using Json = nlohmann::ordered_json;

/// Shortest representation that round-trips.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline Json to_json(const EnvelopeGrid& g) {
  return Json{{"d", g.spec().d()}, {"n", g.spec().n()}, {"kind", to_string(g.kind())},
              {"sample_density", g.sample_density()}, {"coeffs", g.coeffs()}};
}

inline EnvelopeGrid envelope_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "lower" && kind != "upper") throw InvalidArgument("envelope kind must be 'lower' or 'upper'");
  return EnvelopeGrid(GridSpec(j.at("d").get<int>(), j.at("n").get<int>()),
                      kind == "lower" ? EnvelopeKind::kLower : EnvelopeKind::kUpper,
                      j.at("coeffs").get<std::vector<double>>(), j.value("sample_density", 2));
}

inline void write_csv(std::ostream& os, const EnvelopeGrid& g) {
  const GridSpec& spec = g.spec();
  for (int k = 1; k <= spec.d(); ++k) os << 'i' << k << ',';
  os << "a\n";
  CellIndex i = spec.first();
  std::size_t f = 0;
  do {
    for (int c : i) os << c << ',';
    os << format_double(g[f++]) << '\n';
  } while (spec.next(i));
}

inline Json support_to_json(const std::vector<SupportEntry>& support) {
  Json arr = Json::array();
  for (const auto& e : support) arr.push_back(Json{{"index", e.index}, {"mass", e.mass}});
  return arr;
}

inline std::vector<SupportEntry> support_from_json(const Json& arr) {
  std::vector<SupportEntry> out;
  for (const auto& e : arr) out.push_back({e.at("index").get<CellIndex>(), e.at("mass").get<double>()});
  return out;
}

inline Json to_json(const DapSolution& s) {
  return Json{{"value", s.value},
              {"status", to_string(s.status)},
              {"iterations", s.iterations},
              {"support", support_to_json(s.support)}};
}

/// Duals as one object per (axis, level).
inline Json duals_to_json(const DapSolution& s) {
  Json arr = Json::array();
  for (std::size_t k = 0; k < s.duals.size(); ++k)
    for (std::size_t l = 0; l < s.duals[k].size(); ++l)
      arr.push_back(Json{{"axis", k + 1}, {"level", l + 1}, {"dual", s.duals[k][l]}});
  return arr;
}

inline Json to_json(const DiscreteCopula& c) {
  return Json{{"d", c.spec().d()}, {"n", c.spec().n()}, {"support", support_to_json(c.support())}};
}

inline DiscreteCopula copula_from_json(const Json& j) {
  return DiscreteCopula(GridSpec(j.at("d").get<int>(), j.at("n").get<int>()), support_from_json(j.at("support")));
}

/// CDF on the regular grid {0, 1/(m-1), ..., 1}^d, one row per point.
inline void write_cdf_grid_csv(std::ostream& os, const DiscreteCopula& c, int points_per_axis) {
  if (points_per_axis < 2) throw InvalidArgument("CDF grid needs at least two points per axis");
  const int d = c.spec().d();
  for (int k = 1; k <= d; ++k) os << 'x' << k << ',';
  os << "cdf\n";
  const GridSpec lattice(d, points_per_axis);
  CellIndex t = lattice.first();
  Point p(static_cast<std::size_t>(d));
  do {
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = (t[k] - 1) / static_cast<double>(points_per_axis - 1);
    for (double v : p) os << format_double(v) << ',';
    os << format_double(c.cdf(p)) << '\n';
  } while (lattice.next(t));
}

inline void write_points_csv(std::ostream& os, const std::vector<Point>& points, int d) {
  for (int k = 1; k <= d; ++k) os << (k > 1 ? "," : "") << 'x' << k;
  os << '\n';
  for (const auto& p : points) {
    for (std::size_t k = 0; k < p.size(); ++k) os << (k ? "," : "") << format_double(p[k]);
    os << '\n';
  }
}

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json to_json(const BoundReport& r) {
  Json j{{"n", r.n},
         {"sense", to_string(r.sense)},
         {"lower_value", r.lower_value},
         {"upper_value", r.upper_value},
         {"gap", r.gap},
         {"rho_lower", optional_json(r.rho_lower)},
         {"rho_upper", optional_json(r.rho_upper)},
         {"l_d", optional_json(r.l_d)},
         {"support_size", r.support_size},
         {"wall_time", r.wall_time},
         {"d", r.d},
         {"iterations", r.iterations}};
  if (!r.ok) {
    j["status"] = "error";
    j["message"] = r.message;
  }
  return j;
}

inline void write_reports_csv(std::ostream& os, const std::vector<BoundReport>& reports) {
  os << "n,sense,lower_value,upper_value,gap,rho_lower,rho_upper,l_d,support_size,wall_time,status\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : reports) {
    os << r.n << ',' << to_string(r.sense) << ',';
    if (r.ok)
      os << format_double(r.lower_value) << ',' << format_double(r.upper_value) << ',' << format_double(r.gap) << ','
         << opt(r.rho_lower) << ',' << opt(r.rho_upper) << ',' << opt(r.l_d) << ',' << r.support_size << ','
         << format_double(r.wall_time) << ",ok\n";
    else
      os << ",,,,,,,,error\n";
  }
}

inline Json to_json(const MonotonicityCertificate& c) {
  return Json{{"checked_tuples", c.checked_tuples},
              {"worst_violation", c.worst_violation},
              {"tolerance", c.tolerance},
              {"passed", c.passed}};
}

}  // namespace copulabounds
