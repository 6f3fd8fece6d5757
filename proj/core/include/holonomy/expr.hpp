// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "holonomy/error.hpp"

namespace holonomy {

/// Symbols of the expression language: coordinates x1..x8 (ids 0..7), the
/// path parameter t (id 8), family parameters s1..s4 (ids 9..12).
struct Symbol {
  std::uint8_t id = 0;

  static constexpr std::uint8_t kCount = 13;
  static Symbol coord(std::size_t i);  // x(i+1), i < 8
  static Symbol t() { return Symbol{8}; }
  static Symbol s(std::size_t i);  // s(i+1), i < 4

  bool operator==(const Symbol& o) const { return id == o.id; }
  bool operator<(const Symbol& o) const { return id < o.id; }
  std::string name() const;
};

/// Evaluation environment: one complex value per symbol.
struct EvalEnv {
  std::array<std::complex<double>, Symbol::kCount> values{};

  void set(Symbol s, std::complex<double> v) { values[s.id] = v; }
  void set_coords(const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size() && i < 8; ++i) values[i] = x[i];
  }
  std::complex<double> get(Symbol s) const { return values[s.id]; }
};

/// Immutable symbolic expression over complex scalars. Construction applies
/// only light normalization (constant folding and unit laws); differentiation
/// is exact and never numeric.
class Expr {
 public:
  enum class Op : std::uint8_t {
    Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sin, Cos
  };

  /// The zero constant.
  Expr();

  static Expr constant(std::complex<double> v);
  static Expr constant(double v) { return constant(std::complex<double>(v)); }
  static Expr var(Symbol s);
  static Expr pi();
  static Expr imag_unit();

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr pow(std::int64_t n) const;

  static Expr exp(const Expr& a);
  static Expr log(const Expr& a);
  static Expr sin(const Expr& a);
  static Expr cos(const Expr& a);

  Op op() const;
  bool is_zero() const;
  bool is_one() const;
  bool is_const() const { return op() == Op::Const; }
  std::complex<double> const_value() const;

  std::complex<double> eval(const EvalEnv& env) const;

  /// Exact partial derivative.
  Expr diff(Symbol s) const;

  /// Substitutes expressions for symbols (simultaneously).
  Expr subst(const std::map<std::uint8_t, Expr>& map) const;

  bool depends_on(Symbol s) const;

  /// Structural certificate that the expression has no zeros: nonzero
  /// constants, exponentials, and their products, quotients, powers and
  /// negations. Everything else is conservatively rejected.
  bool certified_nonvanishing() const;

  /// Parses the documented grammar; Errc::SyntaxError carries the byte
  /// offset of the first offending character.
  static Expr parse(std::string_view text);

  std::string str() const;

  /// Expression tree node; defined in the implementation file.
  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Derivative of each component expression with respect to t.
std::vector<Expr> diff_t(const std::vector<Expr>& components);

}  // namespace holonomy
