// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <map>

#include "doctest.h"
#include "holonomy/error.hpp"
#include "holonomy/expr.hpp"

namespace {

using namespace holonomy;
using cplx = std::complex<double>;

constexpr double kEps = 1e-12;

double dist(cplx a, cplx b) { return std::abs(a - b); }

cplx eval_at(const Expr& e, double t) {
  EvalEnv env;
  env.set(Symbol::t(), t);
  return e.eval(env);
}

TEST_CASE("parser evaluates closed forms") {
  // Oracle values computed by hand:
  //   2*3+4 = 10,  2*(3+4) = 14,  2^10 = 1024,  (1+2)^2/3 = 3.
  CHECK(dist(eval_at(Expr::parse("2*3+4"), 0), cplx(10)) < kEps);
  CHECK(dist(eval_at(Expr::parse("2*(3+4)"), 0), cplx(14)) < kEps);
  CHECK(dist(eval_at(Expr::parse("2^10"), 0), cplx(1024)) < kEps);
  CHECK(dist(eval_at(Expr::parse("(1+2)^2/3"), 0), cplx(3)) < kEps);
  // Unary minus binds tighter than addition: -2^2 = -4 under right-assoc pow.
  CHECK(dist(eval_at(Expr::parse("1-2-3"), 0), cplx(-4)) < kEps);
}

TEST_CASE("pi and i are builtin constants") {
  CHECK(dist(eval_at(Expr::parse("pi"), 0), cplx(M_PI)) < kEps);
  CHECK(dist(eval_at(Expr::parse("i*i"), 0), cplx(-1)) < kEps);
  // e^{i pi} = -1.
  CHECK(dist(eval_at(Expr::parse("exp(i*pi)"), 0), cplx(-1)) < kEps);
  // sin^2 + cos^2 = 1 at an arbitrary point.
  CHECK(dist(eval_at(Expr::parse("sin(7/5)^2 + cos(7/5)^2"), 0), cplx(1)) <
        kEps);
}

TEST_CASE("coordinates are named from x1") {
  Expr e = Expr::parse("x1 + 2*x2");
  EvalEnv env;
  env.set_coords({3.0, 5.0});
  CHECK(dist(e.eval(env), cplx(13)) < kEps);
  CHECK(e.depends_on(Symbol::coord(0)));
  CHECK(e.depends_on(Symbol::coord(1)));
  CHECK_FALSE(e.depends_on(Symbol::coord(2)));
  CHECK_FALSE(e.depends_on(Symbol::t()));
}

TEST_CASE("family parameters evaluate independently") {
  Expr e = Expr::parse("s1*t + s2");
  EvalEnv env;
  env.set(Symbol::t(), 2.0);
  env.set(Symbol::s(0), cplx(3.0));
  env.set(Symbol::s(1), cplx(0.0, 1.0));
  CHECK(dist(e.eval(env), cplx(6.0, 1.0)) < kEps);
}

TEST_CASE("differentiation is exact") {
  // d/dt sin(2 pi t) = 2 pi cos(2 pi t); compare at t = 1/3.
  Expr e = Expr::parse("sin(2*pi*t)");
  Expr d = e.diff(Symbol::t());
  const double t0 = 1.0 / 3.0;
  CHECK(dist(eval_at(d, t0), cplx(2 * M_PI * std::cos(2 * M_PI * t0))) < kEps);

  // d/dt exp(t^2) = 2t exp(t^2).
  Expr g = Expr::parse("exp(t^2)");
  CHECK(dist(eval_at(g.diff(Symbol::t()), 0.5),
             cplx(2 * 0.5 * std::exp(0.25))) < kEps);

  // d/dt log(t) = 1/t.
  Expr h = Expr::parse("log(t)");
  CHECK(dist(eval_at(h.diff(Symbol::t()), 4.0), cplx(0.25)) < kEps);

  // Partials with respect to absent symbols vanish structurally.
  CHECK(e.diff(Symbol::coord(0)).is_zero());
}

TEST_CASE("diff_t maps componentwise") {
  std::vector<Expr> path{Expr::parse("t^2"), Expr::parse("3*t")};
  std::vector<Expr> vel = diff_t(path);
  REQUIRE(vel.size() == 2);
  CHECK(dist(eval_at(vel[0], 2.0), cplx(4)) < kEps);
  CHECK(dist(eval_at(vel[1], 9.0), cplx(3)) < kEps);
}

TEST_CASE("substitution is simultaneous") {
  // Swap t and x1 in t + 2*x1: the result must be x1 + 2*t, not 3*t or 3*x1.
  Expr e = Expr::parse("t + 2*x1");
  std::map<std::uint8_t, Expr> swap;
  swap[Symbol::t().id] = Expr::var(Symbol::coord(0));
  swap[Symbol::coord(0).id] = Expr::var(Symbol::t());
  Expr s = e.subst(swap);
  EvalEnv env;
  env.set(Symbol::t(), 10.0);
  env.set(Symbol::coord(0), 1.0);
  CHECK(dist(s.eval(env), cplx(21)) < kEps);
}

TEST_CASE("syntax errors carry the offending offset") {
  try {
    Expr::parse("1 + * 2");
    FAIL("expected a syntax error");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::SyntaxError);
    CHECK(std::string(err.what()).find("4") != std::string::npos);
  }
  CHECK_THROWS_AS(Expr::parse(""), Error);
  CHECK_THROWS_AS(Expr::parse("(1+2"), Error);
  CHECK_THROWS_AS(Expr::parse("x9"), Error);
  CHECK_THROWS_AS(Expr::parse("s5"), Error);
  CHECK_THROWS_AS(Expr::parse("foo(3)"), Error);
  CHECK_THROWS_AS(Expr::parse("1 2"), Error);
}

TEST_CASE("nonvanishing certificates are conservative") {
  CHECK(Expr::parse("exp(i*t)").certified_nonvanishing());
  CHECK(Expr::parse("3*exp(t)/2").certified_nonvanishing());
  CHECK(Expr::constant(0.0).certified_nonvanishing() == false);
  // sin has zeros, so it must be rejected even away from them.
  CHECK_FALSE(Expr::parse("sin(t)+2").certified_nonvanishing());
}

TEST_CASE("printing round-trips through the parser") {
  for (const char* text :
       {"sin(2*pi*t)", "exp(i*x1)", "(t+1)^3/2", "s1*cos(t)-i"}) {
    Expr e = Expr::parse(text);
    Expr round = Expr::parse(e.str());
    EvalEnv env;
    env.set(Symbol::t(), 0.7);
    env.set(Symbol::coord(0), 0.3);
    env.set(Symbol::s(0), cplx(1.5, 0.5));
    CAPTURE(text);
    CHECK(dist(e.eval(env), round.eval(env)) < kEps);
  }
}

}  // namespace
