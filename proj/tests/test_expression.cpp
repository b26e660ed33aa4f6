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

#include <catch2/catch_amalgamated.hpp>

#include "copulabounds/expression.hpp"

using namespace copulabounds;
using Catch::Approx;

TEST_CASE("parse_integrand examples") {
  const Integrand pi3 = parse_integrand("x1*x2*x3", 3);
  CHECK(pi3({0.5, 0.5, 0.5}) == 0.125);
  CHECK(pi3({1, 1, 1}) == 1.0);
  CHECK(parse_integrand("min(x1,x2)", 2)({0.3, 0.7}) == 0.3);
  CHECK(pi3.arity() == 3);
  CHECK(pi3.source() == "x1*x2*x3");
}

TEST_CASE("operator precedence and associativity") {
  auto eval = [](const char* src, std::initializer_list<double> x = {0.5, 0.25}) {
    return parse_integrand(src, 2)(x);
  };
  CHECK(eval("1+2*3") == 7);
  CHECK(eval("(1+2)*3") == 9);
  CHECK(eval("10-4-3") == 3);
  CHECK(eval("16/4/2") == 2);
  CHECK(eval("2^3^2") == 64);  // left-associative
  CHECK(eval("-x1^2") == -0.25);  // ^ binds tighter than unary minus
  CHECK(eval("(-x1)^2") == 0.25);
  CHECK(eval("2*-x2") == -0.5);
  CHECK(eval("x1^-1") == 2);
  CHECK(eval("--x1") == 0.5);
  CHECK(eval("+x1") == 0.5);
  CHECK(eval("1.5e1 + .5") == 15.5);
  CHECK(eval("max(x1, x2, 0.7)") == 0.7);
  CHECK(eval("min(x1, x2, 0.7)") == 0.25);
  CHECK(eval("abs(x2 - x1)") == 0.25);
  CHECK(eval("exp(0)") == 1);
  CHECK(eval("log(exp(2))") == Approx(2));
  CHECK(eval("sqrt(x2)") == 0.5);
  CHECK(eval("  x1 *\tx2 ") == 0.125);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_integrand("x1*", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);
  }
  try {
    parse_integrand("x1 + (x2", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 8);
  }
  try {
    parse_integrand("x1 $ x2", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(parse_integrand("", 2), ParseError);
  CHECK_THROWS_AS(parse_integrand("sin(x1)", 2), ParseError);
  CHECK_THROWS_AS(parse_integrand("min(x1)", 2), ParseError);
  CHECK_THROWS_AS(parse_integrand("exp(x1, x2)", 2), ParseError);
  CHECK_THROWS_AS(parse_integrand("x0", 2), ParseError);
  CHECK_THROWS_AS(parse_integrand("1..2", 2), ParseError);
  CHECK_THROWS_AS(parse_integrand("x1 x2", 2), ParseError);
}

TEST_CASE("variables beyond the dimension are rejected") {
  try {
    parse_integrand("x1*x4", 3);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);
    CHECK(std::string(e.what()).find("x4") != std::string::npos);
  }
  CHECK_NOTHROW(parse_integrand("x3", 3));
}

TEST_CASE("domain violations are reported at evaluation with the point") {
  const Integrand lg = parse_integrand("log(x1)", 2);
  CHECK_NOTHROW(lg({0.5, 0.5}));
  try {
    lg({0.0, 0.3});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.point() == std::vector<double>{0.0, 0.3});
  }
  CHECK_THROWS_AS(parse_integrand("1/x2", 2)({0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(parse_integrand("sqrt(x1-1)", 2)({0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(parse_integrand("(x1-1)^0.5", 2)({0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(parse_integrand("exp(1000*x1)", 2)({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(parse_integrand("x1", 2)({0.5}), InvalidArgument);
}

TEST_CASE("evaluation is deterministic") {
  const Integrand f = parse_integrand("exp(x1*x2) - sqrt(x3) / (1 + x1)", 3);
  const double a = f({0.3, 0.6, 0.9});
  for (int k = 0; k < 10; ++k) CHECK(f({0.3, 0.6, 0.9}) == a);
}

TEST_CASE("monotonicity hints") {
  auto hint = [](const char* src, int d) { return parse_integrand(src, d).monotonicity_hint(); };
  CHECK(hint("x1*x2*x3", 3) == Monotonicity::kNondecreasing);
  CHECK(hint("7", 2) == Monotonicity::kNondecreasing);
  CHECK(hint("min(x1,x2)", 2) == Monotonicity::kNondecreasing);
  CHECK(hint("max(x1,x2) + exp(x1) + sqrt(x2) + log(1 + x1)", 2) == Monotonicity::kNondecreasing);
  CHECK(hint("x1^2 * x2^0.5", 2) == Monotonicity::kNondecreasing);
  CHECK(hint("x1*(1-x2)", 2) == Monotonicity::kNonincreasingInSome);
  CHECK(hint("exp(-x1) + x2", 2) == Monotonicity::kNonincreasingInSome);
  CHECK(hint("x1 / (1 + x2)", 2) == Monotonicity::kNonincreasingInSome);
  CHECK(hint("-2*x1*x2", 2) == Monotonicity::kNonincreasingInSome);
  CHECK(hint("(x1-0.5)^2", 2) == Monotonicity::kUnknown);
  CHECK(hint("abs(x1-x2)", 2) == Monotonicity::kUnknown);
  CHECK(hint("x1 - x1^2", 2) == Monotonicity::kUnknown);
  CHECK(hint("1/x1", 2) == Monotonicity::kUnknown);
}

TEST_CASE("independence product detection") {
  CHECK(parse_integrand("x1*x2*x3", 3).is_independence_product());
  CHECK(parse_integrand("x3*(x1*x2)", 3).is_independence_product());
  CHECK(independence_product(4).is_independence_product());
  CHECK_FALSE(parse_integrand("x1*x1*x2", 3).is_independence_product());
  CHECK_FALSE(parse_integrand("x1*x2", 3).is_independence_product());
  CHECK_FALSE(parse_integrand("2*x1*x2", 2).is_independence_product());
}
