// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace holonomy {

Symbol Symbol::coord(std::size_t i) {
  if (i >= 8) fail(Errc::InvalidArgument, "coordinate symbols are x1..x8");
  return Symbol{static_cast<std::uint8_t>(i)};
}

Symbol Symbol::s(std::size_t i) {
  if (i >= 4) fail(Errc::InvalidArgument, "family parameters are s1..s4");
  return Symbol{static_cast<std::uint8_t>(9 + i)};
}

std::string Symbol::name() const {
  if (id < 8) return "x" + std::to_string(id + 1);
  if (id == 8) return "t";
  return "s" + std::to_string(id - 8);
}

struct Expr::Node {
  Op op = Op::Const;
  std::complex<double> value{0.0, 0.0};
  Symbol sym{};
  std::int64_t exponent = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(std::complex<double> v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Const;
  n->value = v;
  return n;
}

bool node_is_const(const NodePtr& n, std::complex<double> v) {
  return n->op == Expr::Op::Const && n->value == v;
}

}  // namespace

Expr::Expr() : node_(make_const(0.0)) {}

Expr Expr::constant(std::complex<double> v) { return Expr(make_const(v)); }

Expr Expr::var(Symbol s) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->sym = s;
  return Expr(std::move(n));
}

Expr Expr::pi() { return constant(M_PI); }
Expr Expr::imag_unit() { return constant(std::complex<double>(0.0, 1.0)); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const()) {
    return Expr::constant(a.const_value() + b.const_value());
  }
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Add;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_const() && b.is_const()) {
    return Expr::constant(a.const_value() - b.const_value());
  }
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Sub;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_const() && b.is_const()) {
    return Expr::constant(a.const_value() * b.const_value());
  }
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Mul;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return Expr();
  if (a.is_const() && b.is_const() && b.const_value() != 0.0) {
    return Expr::constant(a.const_value() / b.const_value());
  }
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Div;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr Expr::operator-() const {
  if (is_const()) return constant(-const_value());
  if (node_->op == Op::Neg) return Expr(node_->a);
  auto n = std::make_shared<Node>();
  n->op = Op::Neg;
  n->a = node_;
  return Expr(std::move(n));
}

Expr Expr::pow(std::int64_t k) const {
  if (k == 0) return constant(1.0);
  if (k == 1) return *this;
  if (is_const()) {
    return constant(std::pow(const_value(), static_cast<double>(k)));
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->a = node_;
  n->exponent = k;
  return Expr(std::move(n));
}

Expr Expr::exp(const Expr& a) {
  if (a.is_zero()) return constant(1.0);
  if (a.is_const()) return constant(std::exp(a.const_value()));
  auto n = std::make_shared<Node>();
  n->op = Op::Exp;
  n->a = a.node_;
  return Expr(std::move(n));
}

Expr Expr::log(const Expr& a) {
  if (a.is_one()) return Expr();
  if (a.is_const() && a.const_value() != 0.0) {
    return constant(std::log(a.const_value()));
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Log;
  n->a = a.node_;
  return Expr(std::move(n));
}

Expr Expr::sin(const Expr& a) {
  if (a.is_const()) return constant(std::sin(a.const_value()));
  auto n = std::make_shared<Node>();
  n->op = Op::Sin;
  n->a = a.node_;
  return Expr(std::move(n));
}

Expr Expr::cos(const Expr& a) {
  if (a.is_const()) return constant(std::cos(a.const_value()));
  auto n = std::make_shared<Node>();
  n->op = Op::Cos;
  n->a = a.node_;
  return Expr(std::move(n));
}

Expr::Op Expr::op() const { return node_->op; }

bool Expr::is_zero() const { return node_is_const(node_, 0.0); }
bool Expr::is_one() const { return node_is_const(node_, 1.0); }

std::complex<double> Expr::const_value() const {
  if (!is_const()) fail(Errc::InvalidArgument, "not a constant expression");
  return node_->value;
}

std::complex<double> Expr::eval(const EvalEnv& env) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return env.get(n.sym);
    case Op::Add: return Expr(n.a).eval(env) + Expr(n.b).eval(env);
    case Op::Sub: return Expr(n.a).eval(env) - Expr(n.b).eval(env);
    case Op::Mul: return Expr(n.a).eval(env) * Expr(n.b).eval(env);
    case Op::Div: return Expr(n.a).eval(env) / Expr(n.b).eval(env);
    case Op::Neg: return -Expr(n.a).eval(env);
    case Op::Pow: {
      std::complex<double> base = Expr(n.a).eval(env);
      // Integer powers by repeated squaring keeps real data real.
      std::int64_t k = n.exponent;
      bool invert = k < 0;
      if (invert) k = -k;
      std::complex<double> acc = 1.0, cur = base;
      while (k) {
        if (k & 1) acc *= cur;
        cur *= cur;
        k >>= 1;
      }
      return invert ? 1.0 / acc : acc;
    }
    case Op::Exp: return std::exp(Expr(n.a).eval(env));
    case Op::Log: return std::log(Expr(n.a).eval(env));
    case Op::Sin: return std::sin(Expr(n.a).eval(env));
    case Op::Cos: return std::cos(Expr(n.a).eval(env));
  }
  fail(Errc::InvalidArgument, "corrupt expression node");
}

Expr Expr::diff(Symbol s) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return Expr();
    case Op::Var: return n.sym == s ? constant(1.0) : Expr();
    case Op::Add: return Expr(n.a).diff(s) + Expr(n.b).diff(s);
    case Op::Sub: return Expr(n.a).diff(s) - Expr(n.b).diff(s);
    case Op::Mul:
      return Expr(n.a).diff(s) * Expr(n.b) + Expr(n.a) * Expr(n.b).diff(s);
    case Op::Div:
      return (Expr(n.a).diff(s) * Expr(n.b) - Expr(n.a) * Expr(n.b).diff(s)) /
             (Expr(n.b) * Expr(n.b));
    case Op::Neg: return -Expr(n.a).diff(s);
    case Op::Pow:
      return constant(static_cast<double>(n.exponent)) *
             Expr(n.a).pow(n.exponent - 1) * Expr(n.a).diff(s);
    case Op::Exp: return Expr(*this) * Expr(n.a).diff(s);
    case Op::Log: return Expr(n.a).diff(s) / Expr(n.a);
    case Op::Sin: return cos(Expr(n.a)) * Expr(n.a).diff(s);
    case Op::Cos: return -(sin(Expr(n.a)) * Expr(n.a).diff(s));
  }
  fail(Errc::InvalidArgument, "corrupt expression node");
}

Expr Expr::subst(const std::map<std::uint8_t, Expr>& map) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return *this;
    case Op::Var: {
      auto it = map.find(n.sym.id);
      return it == map.end() ? *this : it->second;
    }
    case Op::Add: return Expr(n.a).subst(map) + Expr(n.b).subst(map);
    case Op::Sub: return Expr(n.a).subst(map) - Expr(n.b).subst(map);
    case Op::Mul: return Expr(n.a).subst(map) * Expr(n.b).subst(map);
    case Op::Div: return Expr(n.a).subst(map) / Expr(n.b).subst(map);
    case Op::Neg: return -Expr(n.a).subst(map);
    case Op::Pow: return Expr(n.a).subst(map).pow(n.exponent);
    case Op::Exp: return exp(Expr(n.a).subst(map));
    case Op::Log: return log(Expr(n.a).subst(map));
    case Op::Sin: return sin(Expr(n.a).subst(map));
    case Op::Cos: return cos(Expr(n.a).subst(map));
  }
  fail(Errc::InvalidArgument, "corrupt expression node");
}

bool Expr::depends_on(Symbol s) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return false;
    case Op::Var: return n.sym == s;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return Expr(n.a).depends_on(s) || Expr(n.b).depends_on(s);
    default: return Expr(n.a).depends_on(s);
  }
}

bool Expr::certified_nonvanishing() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return n.value != std::complex<double>(0.0, 0.0);
    case Op::Exp: return true;
    case Op::Mul:
    case Op::Div:
      return Expr(n.a).certified_nonvanishing() &&
             Expr(n.b).certified_nonvanishing();
    case Op::Neg: return Expr(n.a).certified_nonvanishing();
    case Op::Pow: return Expr(n.a).certified_nonvanishing();
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | postfix
//   postfix:= atom ('^' intlit)?
//   atom   := number | 'pi' | 'i' | 't' | 'x'digit | 's'digit
//           | ('exp'|'log'|'sin'|'cos') '(' expr ')' | '(' expr ')'
// '^' binds tighter than unary minus; intlit may carry a sign.

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    fail(Errc::SyntaxError,
         what + " at byte " + std::to_string(pos_) + " in '" +
             std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr expr() {
    Expr e = term();
    while (true) {
      if (eat('+')) {
        e = e + term();
      } else if (eat('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = factor();
    while (true) {
      if (eat('*')) {
        e = e * factor();
      } else if (eat('/')) {
        e = e / factor();
      } else {
        return e;
      }
    }
  }

  Expr factor() {
    if (eat('-')) return -factor();
    return postfix();
  }

  Expr postfix() {
    Expr e = atom();
    if (eat('^')) {
      skip_ws();
      bool neg = false;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
        neg = text_[pos_] == '-';
        ++pos_;
      }
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        error("expected integer exponent");
      }
      std::int64_t k = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        k = k * 10 + (text_[pos_] - '0');
        if (k > 1'000'000) error("exponent too large");
        ++pos_;
      }
      e = e.pow(neg ? -k : k);
    }
    return e;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    error("unexpected character");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      } else {
        pos_ = mark;  // 'e' belongs to a following name, not this number
      }
    }
    const std::string lit(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(lit.c_str(), &end);
    if (end != lit.c_str() + lit.size()) {
      pos_ = start;
      error("malformed number");
    }
    return Expr::constant(v);
  }

  Expr word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])))) {
      ++pos_;
    }
    const std::string_view w = text_.substr(start, pos_ - start);
    if (w == "pi") return Expr::pi();
    if (w == "i") return Expr::imag_unit();
    if (w == "t") return Expr::var(Symbol::t());
    if (w.size() == 2 && w[0] == 'x' && w[1] >= '1' && w[1] <= '8') {
      return Expr::var(Symbol::coord(static_cast<std::size_t>(w[1] - '1')));
    }
    if (w.size() == 2 && w[0] == 's' && w[1] >= '1' && w[1] <= '4') {
      return Expr::var(Symbol::s(static_cast<std::size_t>(w[1] - '1')));
    }
    if (w == "exp" || w == "log" || w == "sin" || w == "cos") {
      if (!eat('(')) error("expected '(' after function name");
      Expr arg = expr();
      if (!eat(')')) error("expected ')'");
      if (w == "exp") return Expr::exp(arg);
      if (w == "log") return Expr::log(arg);
      if (w == "sin") return Expr::sin(arg);
      return Expr::cos(arg);
    }
    pos_ = start;
    error("unknown name '" + std::string(w) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_node(const Expr& e, std::string& out, int parent_prec);

}  // namespace

Expr Expr::parse(std::string_view text) { return Parser(text).run(); }

namespace {

int precedence(Expr::Op op) {
  switch (op) {
    case Expr::Op::Add:
    case Expr::Op::Sub: return 1;
    case Expr::Op::Mul:
    case Expr::Op::Div: return 2;
    case Expr::Op::Neg: return 3;
    case Expr::Op::Pow: return 4;
    default: return 5;
  }
}

}  // namespace

std::string Expr::str() const {
  const Node& n = *node_;
  auto wrap = [&](const Expr& child, int prec) {
    std::string s = child.str();
    if (precedence(child.op()) < prec) return "(" + s + ")";
    return s;
  };
  switch (n.op) {
    case Op::Const: {
      char buf[64];
      if (n.value.imag() == 0.0) {
        std::snprintf(buf, sizeof(buf), "%.12g", n.value.real());
        return buf;
      }
      std::snprintf(buf, sizeof(buf), "(%.12g%+.12g*i)", n.value.real(),
                    n.value.imag());
      return buf;
    }
    case Op::Var: return n.sym.name();
    case Op::Add: return wrap(Expr(n.a), 1) + " + " + wrap(Expr(n.b), 2);
    case Op::Sub: return wrap(Expr(n.a), 1) + " - " + wrap(Expr(n.b), 2);
    case Op::Mul: return wrap(Expr(n.a), 2) + "*" + wrap(Expr(n.b), 3);
    case Op::Div: return wrap(Expr(n.a), 2) + "/" + wrap(Expr(n.b), 3);
    case Op::Neg: return "-" + wrap(Expr(n.a), 3);
    case Op::Pow:
      return wrap(Expr(n.a), 5) + "^" + std::to_string(n.exponent);
    case Op::Exp: return "exp(" + Expr(n.a).str() + ")";
    case Op::Log: return "log(" + Expr(n.a).str() + ")";
    case Op::Sin: return "sin(" + Expr(n.a).str() + ")";
    case Op::Cos: return "cos(" + Expr(n.a).str() + ")";
  }
  return "?";
}

std::vector<Expr> diff_t(const std::vector<Expr>& components) {
  std::vector<Expr> out;
  out.reserve(components.size());
  for (const Expr& e : components) out.push_back(e.diff(Symbol::t()));
  return out;
}

}  // namespace holonomy
