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
#include <stdexcept>
#include <string>
#include <vector>

namespace copulabounds {

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something malformed (bad grid size, bad box, bad index).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// An integrand could not be evaluated at a point (log of a non-positive
// number, division by zero, non-finite result, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& reason, std::vector<double> point, const std::string& suffix = "")
      : Error(reason + " at " + format_point(point) + suffix), reason_(reason), point_(std::move(point)) {}

  const std::string& reason() const noexcept { return reason_; }
  const std::vector<double>& point() const noexcept { return point_; }

  static std::string format_point(const std::vector<double>& p) {
    std::string s = "(";
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) s += ", ";
      s += std::to_string(p[k]);
    }
    return s + ")";
  }

 private:
  std::string reason_;
  std::vector<double> point_;
};

// The solver or a structural check failed: iteration limit, a measure that is
// not d-fold stochastic, a non-integral 2D vertex. These indicate a numerical
// pathology, not user error.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace copulabounds
