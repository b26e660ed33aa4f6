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

// Integrand expressions: a small arithmetic language over x1..xd.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' ['-' | '+'] primary)*        (left-associative)
//   primary := number | 'x' digits | func '(' expr (',' expr)* ')' | '(' expr ')'
//   func    := min | max | abs | exp | log | sqrt
//
// Domain problems (log of a non-positive value, division by zero, ...) are
// only detected at evaluation time and reported with the offending point.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "copulabounds/error.hpp"
#include "copulabounds/grid.hpp"

namespace copulabounds {

enum class Monotonicity {
  kNondecreasing,        // nondecreasing in every coordinate
  kNonincreasingInSome,  // monotone in every coordinate, nonincreasing in at least one
  kUnknown,
};

inline const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::kNondecreasing: return "coordinatewise-nondecreasing";
    case Monotonicity::kNonincreasingInSome: return "coordinatewise-nonincreasing-in-some";
    case Monotonicity::kUnknown: return "unknown";
  }
  return "unknown";
}

namespace detail {

enum class Op { kLiteral, kVariable, kNeg, kAdd, kSub, kMul, kDiv, kPow, kMin, kMax, kAbs, kExp, kLog, kSqrt };

struct Node {
  Op op = Op::kLiteral;
  double value = 0.0;  // kLiteral
  int var = 0;         // kVariable, 0-based
  std::vector<int> args;
};

// Nodes are stored in post-order; the root is the last node.
struct Expression {
  std::vector<Node> nodes;

  double eval(int id, std::span<const double> x) const {
    const Node& nd = nodes[static_cast<std::size_t>(id)];
    auto arg = [&](std::size_t k) { return eval(nd.args[k], x); };
    switch (nd.op) {
      case Op::kLiteral: return nd.value;
      case Op::kVariable: return x[static_cast<std::size_t>(nd.var)];
      case Op::kNeg: return -arg(0);
      case Op::kAdd: return arg(0) + arg(1);
      case Op::kSub: return arg(0) - arg(1);
      case Op::kMul: return arg(0) * arg(1);
      case Op::kDiv: {
        const double den = arg(1);
        if (den == 0.0) throw DomainError("division by zero", {x.begin(), x.end()});
        return arg(0) / den;
      }
      case Op::kPow: {
        const double b = arg(0), e = arg(1);
        const double r = std::pow(b, e);
        if (std::isnan(r)) throw DomainError("power of a negative base with non-integer exponent", {x.begin(), x.end()});
        if (b == 0.0 && e < 0.0) throw DomainError("zero raised to a negative power", {x.begin(), x.end()});
        return r;
      }
      case Op::kMin: {
        double r = arg(0);
        for (std::size_t k = 1; k < nd.args.size(); ++k) r = std::min(r, arg(k));
        return r;
      }
      case Op::kMax: {
        double r = arg(0);
        for (std::size_t k = 1; k < nd.args.size(); ++k) r = std::max(r, arg(k));
        return r;
      }
      case Op::kAbs: return std::abs(arg(0));
      case Op::kExp: return std::exp(arg(0));
      case Op::kLog: {
        const double v = arg(0);
        if (!(v > 0.0)) throw DomainError("log of a non-positive value", {x.begin(), x.end()});
        return std::log(v);
      }
      case Op::kSqrt: {
        const double v = arg(0);
        if (v < 0.0) throw DomainError("sqrt of a negative value", {x.begin(), x.end()});
        return std::sqrt(v);
      }
    }
    return 0.0;
  }

  int root() const { return static_cast<int>(nodes.size()) - 1; }
};

class Parser {
 public:
  Parser(std::string_view src, int d) : src_(src), d_(d) {}

  Expression parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    parse_expr();
    skip_ws();
    if (pos_ < src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return std::move(expr_);
  }

 private:
  int emit(Node n) {
    expr_.nodes.push_back(std::move(n));
    return static_cast<int>(expr_.nodes.size()) - 1;
  }
  int emit(Op op, std::vector<int> args) {
    Node n;
    n.op = op;
    n.args = std::move(args);
    return emit(std::move(n));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = emit(Op::kAdd, {lhs, parse_term()});
      else if (accept('-')) lhs = emit(Op::kSub, {lhs, parse_term()});
      else return lhs;
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = emit(Op::kMul, {lhs, parse_unary()});
      else if (accept('/')) lhs = emit(Op::kDiv, {lhs, parse_unary()});
      else return lhs;
    }
  }

  int parse_unary() {
    if (accept('-')) return emit(Op::kNeg, {parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    while (accept('^')) {
      int exponent;
      if (accept('-')) exponent = emit(Op::kNeg, {parse_primary()});
      else {
        accept('+');
        exponent = parse_primary();
      }
      base = emit(Op::kPow, {base, exponent});
    }
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  int parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + text + "'", start);
    }
    if (used != text.size()) throw ParseError("malformed number '" + text + "'", start);
    Node n;
    n.op = Op::kLiteral;
    n.value = v;
    return emit(std::move(n));
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      if (name.size() > 10) throw ParseError("variable index too large in '" + std::string(name) + "'", start);
      const long idx = std::stol(std::string(name.substr(1)));
      if (idx < 1) throw ParseError("variables are numbered from x1", start);
      if (idx > d_)
        throw ParseError("variable " + std::string(name) + " exceeds dimension d=" + std::to_string(d_), start);
      Node n;
      n.op = Op::kVariable;
      n.var = static_cast<int>(idx - 1);
      return emit(std::move(n));
    }

    struct Fn {
      std::string_view name;
      Op op;
      bool variadic;
    };
    static constexpr Fn kFunctions[] = {
        {"min", Op::kMin, true}, {"max", Op::kMax, true}, {"abs", Op::kAbs, false},
        {"exp", Op::kExp, false}, {"log", Op::kLog, false}, {"sqrt", Op::kSqrt, false},
    };
    for (const Fn& fn : kFunctions) {
      if (fn.name != name) continue;
      expect('(');
      std::vector<int> args{parse_expr()};
      while (accept(',')) args.push_back(parse_expr());
      expect(')');
      if (fn.variadic && args.size() < 2)
        throw ParseError(std::string(fn.name) + " needs at least two arguments", start);
      if (!fn.variadic && args.size() != 1)
        throw ParseError(std::string(fn.name) + " takes exactly one argument", start);
      return emit(fn.op, std::move(args));
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  int d_;
  std::size_t pos_ = 0;
  Expression expr_;
};

// Conservative range and derivative-sign analysis over [0,1]^d, used to
// decide whether corner sampling is exact for an integrand.
class MonotonicityAnalysis {
 public:
  enum class Sign { kZero, kPos, kNeg, kUnknown };

  struct Info {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::vector<Sign> slope;  // sign of the partial derivative per variable
  };

  MonotonicityAnalysis(const Expression& e, int d) : e_(e), d_(d) {}

  Monotonicity run() const {
    const Info info = visit(e_.root());
    bool some_dec = false;
    for (Sign s : info.slope) {
      if (s == Sign::kUnknown) return Monotonicity::kUnknown;
      if (s == Sign::kNeg) some_dec = true;
    }
    return some_dec ? Monotonicity::kNonincreasingInSome : Monotonicity::kNondecreasing;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static Sign negate(Sign s) {
    if (s == Sign::kPos) return Sign::kNeg;
    if (s == Sign::kNeg) return Sign::kPos;
    return s;
  }
  static Sign add(Sign a, Sign b) {
    if (a == Sign::kZero) return b;
    if (b == Sign::kZero) return a;
    return a == b ? a : Sign::kUnknown;
  }
  static Sign mul(Sign a, Sign b) {
    if (a == Sign::kZero || b == Sign::kZero) return Sign::kZero;
    if (a == Sign::kUnknown || b == Sign::kUnknown) return Sign::kUnknown;
    return a == b ? Sign::kPos : Sign::kNeg;
  }
  static Sign range_sign(const Info& i) {
    if (i.lo == 0.0 && i.hi == 0.0) return Sign::kZero;
    if (i.lo >= 0.0) return Sign::kPos;
    if (i.hi <= 0.0) return Sign::kNeg;
    return Sign::kUnknown;
  }
  static double safe_mul(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

  Info constant(double v) const {
    Info r;
    r.lo = r.hi = v;
    r.slope.assign(static_cast<std::size_t>(d_), Sign::kZero);
    return r;
  }
  static bool is_constant(const Info& i) {
    return std::all_of(i.slope.begin(), i.slope.end(), [](Sign s) { return s == Sign::kZero; });
  }
  Info unknown() const {
    Info r;
    r.slope.assign(static_cast<std::size_t>(d_), Sign::kUnknown);
    return r;
  }
  // Composition with an increasing (dir = kPos) or decreasing univariate map.
  static Info compose(Info a, Sign dir, double lo, double hi) {
    for (auto& s : a.slope) s = mul(s, dir);
    a.lo = lo;
    a.hi = hi;
    return a;
  }

  Info visit(int id) const {
    const Node& nd = e_.nodes[static_cast<std::size_t>(id)];
    std::vector<Info> a;
    for (int c : nd.args) a.push_back(visit(c));
    const auto nvars = static_cast<std::size_t>(d_);

    // Fold constant subtrees by evaluating them.
    if (nd.op != Op::kLiteral && !a.empty() &&
        std::all_of(a.begin(), a.end(), [](const Info& i) { return is_constant(i); })) {
      try {
        const std::vector<double> dummy(nvars, 0.0);
        const double v = e_.eval(id, dummy);
        if (std::isfinite(v)) return constant(v);
      } catch (const DomainError&) {
      }
      return unknown();
    }

    switch (nd.op) {
      case Op::kLiteral: return constant(nd.value);
      case Op::kVariable: {
        Info r = constant(0.0);
        r.lo = 0.0;
        r.hi = 1.0;
        r.slope[static_cast<std::size_t>(nd.var)] = Sign::kPos;
        return r;
      }
      case Op::kNeg: return compose(a[0], Sign::kNeg, -a[0].hi, -a[0].lo);
      case Op::kAdd:
      case Op::kSub: {
        Info rhs = a[1];
        if (nd.op == Op::kSub) rhs = compose(rhs, Sign::kNeg, -rhs.hi, -rhs.lo);
        Info r;
        r.lo = a[0].lo + rhs.lo;
        r.hi = a[0].hi + rhs.hi;
        if (std::isnan(r.lo)) r.lo = -kInf;
        if (std::isnan(r.hi)) r.hi = kInf;
        for (std::size_t k = 0; k < nvars; ++k) r.slope.push_back(add(a[0].slope[k], rhs.slope[k]));
        return r;
      }
      case Op::kMul: return product(a[0], a[1]);
      case Op::kDiv: {
        const Info& den = a[1];
        if (den.lo <= 0.0 && den.hi >= 0.0) return unknown();
        // 1/den is monotone decreasing on each sign branch.
        Info recip = compose(den, Sign::kNeg, 1.0 / den.hi, 1.0 / den.lo);
        return product(a[0], recip);
      }
      case Op::kPow: {
        if (!is_constant(a[1]) || a[0].lo < 0.0) return unknown();
        const double p = a[1].lo;
        if (p == 0.0) return constant(1.0);
        if (p > 0.0) return compose(a[0], Sign::kPos, std::pow(a[0].lo, p), std::pow(a[0].hi, p));
        const double hi = a[0].lo > 0.0 ? std::pow(a[0].lo, p) : kInf;
        return compose(a[0], Sign::kNeg, std::pow(a[0].hi, p), hi);
      }
      case Op::kMin:
      case Op::kMax: {
        Info r = a[0];
        for (std::size_t j = 1; j < a.size(); ++j) {
          for (std::size_t k = 0; k < nvars; ++k) r.slope[k] = add(r.slope[k], a[j].slope[k]);
          if (nd.op == Op::kMin) {
            r.lo = std::min(r.lo, a[j].lo);
            r.hi = std::min(r.hi, a[j].hi);
          } else {
            r.lo = std::max(r.lo, a[j].lo);
            r.hi = std::max(r.hi, a[j].hi);
          }
        }
        return r;
      }
      case Op::kAbs: {
        const Sign s = range_sign(a[0]);
        if (s == Sign::kPos || s == Sign::kZero) return a[0];
        if (s == Sign::kNeg) return compose(a[0], Sign::kNeg, -a[0].hi, -a[0].lo);
        Info r = unknown();
        r.lo = 0.0;
        r.hi = std::max(std::abs(a[0].lo), std::abs(a[0].hi));
        return r;
      }
      case Op::kExp: return compose(a[0], Sign::kPos, std::exp(a[0].lo), std::exp(a[0].hi));
      case Op::kLog: {
        if (a[0].hi <= 0.0) return unknown();
        const double lo = a[0].lo > 0.0 ? std::log(a[0].lo) : -kInf;
        return compose(a[0], Sign::kPos, lo, std::log(a[0].hi));
      }
      case Op::kSqrt: {
        if (a[0].hi < 0.0) return unknown();
        return compose(a[0], Sign::kPos, std::sqrt(std::max(0.0, a[0].lo)), std::sqrt(a[0].hi));
      }
    }
    return unknown();
  }

  // d(fg) = f' g + f g'
  Info product(const Info& f, const Info& g) const {
    Info r;
    const double c[] = {safe_mul(f.lo, g.lo), safe_mul(f.lo, g.hi), safe_mul(f.hi, g.lo), safe_mul(f.hi, g.hi)};
    r.lo = *std::min_element(std::begin(c), std::end(c));
    r.hi = *std::max_element(std::begin(c), std::end(c));
    const Sign fs = range_sign(f), gs = range_sign(g);
    for (std::size_t k = 0; k < f.slope.size(); ++k)
      r.slope.push_back(add(mul(f.slope[k], gs), mul(fs, g.slope[k])));
    return r;
  }

  const Expression& e_;
  int d_;
};

}  // namespace detail

/// A parsed integrand f : [0,1]^d -> R.
///
/// Cheap to copy; the expression tree is shared and immutable, so an
/// Integrand may be evaluated concurrently from several threads.
class Integrand {
 public:
  Integrand(std::string source, int arity, std::shared_ptr<const detail::Expression> expr)
      : source_(std::move(source)), arity_(arity), expr_(std::move(expr)) {
    hint_ = detail::MonotonicityAnalysis(*expr_, arity_).run();
  }

  const std::string& source() const noexcept { return source_; }
  int arity() const noexcept { return arity_; }
  Monotonicity monotonicity_hint() const noexcept { return hint_; }

  /// Evaluates f at x; throws DomainError on a domain violation or a non-finite result.
  double operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != arity_)
      throw InvalidArgument("integrand of arity " + std::to_string(arity_) + " evaluated at a point of dimension " +
                            std::to_string(x.size()));
    const double v = expr_->eval(expr_->root(), x);
    if (!std::isfinite(v)) throw DomainError("non-finite value", {x.begin(), x.end()});
    return v;
  }
  double operator()(std::initializer_list<double> x) const { return (*this)(std::span<const double>(x.begin(), x.size())); }

  /// True when the expression is literally x1*x2*...*xd (in any order or grouping).
  bool is_independence_product() const {
    std::vector<int> seen(static_cast<std::size_t>(arity_), 0);
    if (!collect_product(expr_->root(), seen)) return false;
    return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
  }

 private:
  bool collect_product(int id, std::vector<int>& seen) const {
    const auto& nd = expr_->nodes[static_cast<std::size_t>(id)];
    if (nd.op == detail::Op::kVariable) {
      ++seen[static_cast<std::size_t>(nd.var)];
      return true;
    }
    if (nd.op == detail::Op::kMul) return collect_product(nd.args[0], seen) && collect_product(nd.args[1], seen);
    return false;
  }

  std::string source_;
  int arity_;
  std::shared_ptr<const detail::Expression> expr_;
  Monotonicity hint_ = Monotonicity::kUnknown;
};

inline Integrand parse_integrand(std::string_view source, int d) {
  if (d < 1) throw InvalidArgument("integrand dimension must be positive");
  auto expr = std::make_shared<detail::Expression>(detail::Parser(source, d).parse());
  return Integrand(std::string(source), d, std::move(expr));
}

/// The independence copula Pi(u) = u_1 * ... * u_d as an integrand.
inline Integrand independence_product(int d) {
  std::string src = "x1";
  for (int k = 2; k <= d; ++k) src += "*x" + std::to_string(k);
  return parse_integrand(src, d);
}

}  // namespace copulabounds
