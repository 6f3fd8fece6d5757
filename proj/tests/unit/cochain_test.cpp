// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "holonomy/cochain.hpp"
#include "holonomy/error.hpp"
#include "holonomy/group.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/rational.hpp"
#include "holonomy/scalar.hpp"
#include "holonomy/sectors.hpp"
#include "holonomy/space.hpp"

namespace {

using namespace holonomy;

Groupoid two_points_swap() {
  const SpaceModel pts = SpaceModel::points(2);
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  std::vector<std::vector<std::uint32_t>> swap{{0, 1}, {1, 0}};
  return Groupoid::quotient(pts, z2, AffineAction(pts, z2, swap));
}

Groupoid circle_half_shift() {
  const SpaceModel space = SpaceModel::torus(1);
  const FiniteGroup g = FiniteGroup::cyclic(2);
  AffineMap shift;
  shift.linear = {{1}};
  shift.translation = {Rational(1, 2)};
  std::vector<AffineMap> maps{AffineMap::identity(1), shift};
  return Groupoid::quotient(space, g, AffineAction(space, g, maps));
}

NerveTuple tuple_at(std::size_t point, std::vector<GroupElement> elems) {
  NerveTuple t;
  t.base = Point::at(point);
  t.elems = std::move(elems);
  return t;
}

TEST_CASE("level-0 coboundary divides target by source values") {
  const Groupoid gpd = two_points_swap();
  std::map<TupleKey, Scalar> values;
  values[{0}] = Scalar::exact_phase(Rational(1, 8));
  values[{1}] = Scalar::exact_phase(Rational(1, 4));
  const CochainFunction f =
      CochainFunction::point_table(gpd, 0, std::move(values));

  const CochainFunction df = cech_delta(gpd, f);
  CHECK(df.level() == 1);
  // (delta f)(x, g) = f(x.g) / f(x): at (0, swap) the quotient of the two
  // phases is 1/4 - 1/8 = 1/8 of a turn.
  CHECK(df.eval(gpd, tuple_at(0, {1}))
            .exact_eq(Scalar::exact_phase(Rational(1, 8))));
  CHECK(df.eval(gpd, tuple_at(1, {1}))
            .exact_eq(Scalar::exact_phase(Rational(-1, 8))));
  CHECK(df.eval(gpd, tuple_at(0, {0})).dist_one() == 0.0);
}

TEST_CASE("coboundaries of coboundaries are identically one") {
  const Groupoid gpd = two_points_swap();
  std::map<TupleKey, Scalar> values;
  values[{0}] = Scalar::exact_phase(Rational(3, 7));
  values[{1}] = Scalar::exact_phase(Rational(1, 5));
  const CochainFunction f =
      CochainFunction::point_table(gpd, 0, std::move(values));
  const CochainFunction ddf = cech_delta(gpd, cech_delta(gpd, f));
  for (const NerveTuple& tup : gpd.enumerate_nerve(2)) {
    CHECK(ddf.eval(gpd, tup).dist_one() == 0.0);
  }
}

TEST_CASE("gauge coboundaries verify as line cocycles") {
  const Groupoid gpd = two_points_swap();
  std::map<TupleKey, Scalar> values;
  values[{0}] = Scalar::exact_phase(Rational(1, 3));
  values[{1}] = Scalar::of({0.6, 0.8});
  const LineData line = gauge_coboundary(
      gpd, CochainFunction::point_table(gpd, 0, std::move(values)));
  const VerifyReport report = verify_cocycle(gpd, line);
  CHECK(report.pass());
  CHECK(report.max_residual() < 1e-12);
  CHECK(line.A.is_zero());
}

TEST_CASE("expression gauges verify on the circle and iterate to gerbes") {
  const Groupoid gpd = circle_half_shift();
  std::map<TupleKey, Expr> values;
  values[{}] = Expr::parse("exp(2*pi*i*x1)");
  const CochainFunction f = CochainFunction::group_expr(gpd, 0, values);
  const LineData line = gauge_coboundary(gpd, f);
  CHECK_FALSE(line.A.is_zero());

  VerifyOptions opt;
  opt.tol = 1e-8;
  opt.seed = 7;
  const VerifyReport line_report = verify_cocycle(gpd, line, opt);
  CHECK(line_report.pass());

  // The half shift multiplies the gauge by exp(pi i) = -1.
  CHECK(std::abs(line.h.eval(gpd, tuple_at(0, {1})).value() -
                 std::complex<double>(-1.0, 0.0)) < 1e-12);

  const GerbeData gerbe = total_coboundary(gpd, line);
  const VerifyReport gerbe_report = verify_cocycle(gpd, gerbe, opt);
  CHECK(gerbe_report.pass());
}

TEST_CASE("verification rejects a non-multiplicative transition") {
  const SpaceModel pt = SpaceModel::points(1);
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  const Groupoid gpd = Groupoid::quotient(pt, z3, AffineAction(pt, z3));

  // h(1) = h(2) = -1 is not a character of Z/3: h(1)h(1) != h(2).
  std::map<TupleKey, Scalar> values;
  values[{0}] = Scalar();
  values[{1}] = Scalar::exact_phase(Rational(1, 2));
  values[{2}] = Scalar::exact_phase(Rational(1, 2));
  LineData line;
  line.h = CochainFunction::group_table(gpd, 1, std::move(values));
  line.A = FormFamily(FormFamily::Keying::Action, 0, 1, 0);

  const VerifyReport report = verify_cocycle(gpd, line);
  CHECK_FALSE(report.pass());
  bool found = false;
  for (const CheckResult& check : report.checks) {
    if (check.name.find("mult") == std::string::npos) continue;
    found = true;
    CHECK_FALSE(check.pass);
    CHECK(check.residual == doctest::Approx(2.0));
    CHECK_FALSE(check.witness.empty());
  }
  CHECK(found);
}

TEST_CASE("products promote representations and stay verified") {
  const Groupoid gpd = two_points_swap();
  std::map<TupleKey, Scalar> character;
  character[{0}] = Scalar();
  character[{1}] = Scalar::exact_phase(Rational(1, 2));
  LineData sign;
  sign.h = CochainFunction::group_table(gpd, 1, std::move(character));
  sign.A = FormFamily(FormFamily::Keying::Action, 0, 1, 0);
  CHECK(verify_cocycle(gpd, sign).pass());

  std::map<TupleKey, Scalar> gauge;
  gauge[{0}] = Scalar::exact_phase(Rational(1, 7));
  gauge[{1}] = Scalar::exact_phase(Rational(2, 7));
  const LineData shifted = sign.product(
      gpd, gauge_coboundary(
               gpd, CochainFunction::point_table(gpd, 0, std::move(gauge))));
  CHECK(shifted.h.rep() == CochainFunction::Rep::PointTable);
  CHECK(verify_cocycle(gpd, shifted).pass());
  CHECK(verify_cocycle(gpd, shifted.product(gpd, shifted.inverse())).pass());

  // The product of h with its own inverse is exactly one everywhere.
  const CochainFunction unit =
      shifted.h.product(gpd, shifted.h.inverse());
  for (const NerveTuple& tup : gpd.enumerate_nerve(1)) {
    CHECK(unit.eval(gpd, tup).dist_one() == 0.0);
  }
}

TEST_CASE("construction validates completeness and nonvanishing") {
  const Groupoid gpd = two_points_swap();
  std::map<TupleKey, Scalar> partial;
  partial[{0}] = Scalar();
  CHECK_THROWS_AS(CochainFunction::point_table(gpd, 0, std::move(partial)),
                  Error);

  std::map<TupleKey, Scalar> zero;
  zero[{0}] = Scalar();
  zero[{1}] = Scalar::of({0.0, 0.0});
  CHECK_THROWS_AS(CochainFunction::point_table(gpd, 0, std::move(zero)),
                  Error);

  std::map<TupleKey, Expr> vanishing;
  vanishing[{}] = Expr::constant(0.0);
  CHECK_THROWS_AS(
      CochainFunction::group_expr(circle_half_shift(), 0, vanishing), Error);
}

TEST_CASE("chart cochains evaluate per chain and reject missing chains") {
  const SpaceModel t1 = SpaceModel::torus(1);
  std::vector<Chart> charts(2);
  charts[0].lo = {Rational(-1, 4)};
  charts[0].hi = {Rational(3, 8)};
  charts[1].lo = {Rational(1, 4)};
  charts[1].hi = {Rational(7, 8)};
  const Groupoid gpd = Groupoid::cover(t1, charts);

  std::map<TupleKey, Expr> values;
  values[{0}] = Expr::parse("exp(i*2*pi*x1)");
  const CochainFunction f = CochainFunction::chart_expr(gpd, 0, values);

  NerveTuple in_zero;
  in_zero.base = Point::at({0.25});
  in_zero.charts = {0};
  CHECK(std::abs(f.eval(gpd, in_zero).value() -
                 std::complex<double>(0.0, 1.0)) < 1e-12);

  NerveTuple in_one = in_zero;
  in_one.charts = {1};
  try {
    f.eval(gpd, in_one);
    FAIL("expected a missing-chain rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::DomainMismatch);
  }
}

TEST_CASE("logarithmic differentials of tables vanish") {
  const Groupoid gpd = two_points_swap();
  std::map<TupleKey, Scalar> values;
  values[{0}] = Scalar::exact_phase(Rational(1, 8));
  values[{1}] = Scalar::exact_phase(Rational(1, 4));
  const CochainFunction f =
      CochainFunction::point_table(gpd, 0, std::move(values));
  CHECK(dlog_family(gpd, f, 0).is_zero());
}

TEST_CASE("logarithmic differentials of expressions match hand forms") {
  const Groupoid gpd = circle_half_shift();
  std::map<TupleKey, Expr> values;
  values[{0}] = Expr::constant(1.0);
  values[{1}] = Expr::parse("exp(i*2*pi*x1)");
  const CochainFunction h = CochainFunction::group_expr(gpd, 1, values);
  const FormFamily w = dlog_family(gpd, h, 1);
  CHECK(w.level() == 1);
  CHECK(w.degree() == 1);
  CHECK(w.at({0}).is_zero());
  CHECK(std::abs(eval_form(w.at({1}), {0.3}, {{1.0}}) -
                 std::complex<double>(0.0, 2 * M_PI)) < 1e-12);
}

TEST_CASE("form coboundaries follow the target-over-source convention") {
  const SpaceModel t1 = SpaceModel::torus(1);
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  AffineMap inv;
  inv.linear = {{-1}};
  inv.translation = {Rational(0)};
  const Groupoid gpd = Groupoid::quotient(
      t1, z2, AffineAction(t1, z2, {AffineMap::identity(1), inv}));

  PForm w(1, 1);
  w.set({0}, Expr::parse("cos(2*pi*x1)"));
  const FormFamily dw = cech_delta_form(gpd, FormFamily::single(w));
  CHECK(dw.level() == 1);
  CHECK(dw.at({0}).is_zero());
  // (delta w)(g) = g*w - w; under x -> -x the cosine is even and the
  // differential flips sign, so the g entry is -2 cos(2 pi x1) dx1.
  CHECK(std::abs(eval_form(dw.at({1}), {0.0}, {{1.0}}) -
                 std::complex<double>(-2.0, 0.0)) < 1e-12);

  // The second coboundary vanishes identically.
  const FormFamily ddw = cech_delta_form(gpd, dw);
  for (const auto& [key, form] : ddw.forms()) {
    CHECK(form.is_zero());
  }
}

// Independent classification of H^2 for the Klein four-group by literal
// enumeration. A sign-valued 2-cochain is a 16-bit word, one bit per pair
// (a, b); the cocycle identity is a 4-bit parity per triple. Coboundaries
// may require fourth roots of unity in the gauge even when the cocycle
// itself is sign-valued, so gauges range over all 4^4 maps into i^Z.
TEST_CASE("sign-valued enumeration classifies the Klein four-group") {
  const auto mul = [](std::uint32_t a, std::uint32_t b) { return a ^ b; };
  const auto bit = [](std::uint32_t word, std::uint32_t a, std::uint32_t b) {
    return (word >> (4 * a + b)) & 1u;
  };

  std::set<std::uint32_t> cocycles;
  for (std::uint32_t word = 0; word < (1u << 16); ++word) {
    bool ok = true;
    for (std::uint32_t a = 0; a < 4 && ok; ++a) {
      for (std::uint32_t b = 0; b < 4 && ok; ++b) {
        for (std::uint32_t c = 0; c < 4 && ok; ++c) {
          const std::uint32_t parity = bit(word, b, c) ^ bit(word, mul(a, b), c) ^
                                       bit(word, a, mul(b, c)) ^ bit(word, a, b);
          ok = parity == 0;
        }
      }
    }
    if (ok) cocycles.insert(word);
  }
  CHECK(cocycles.size() == 32);

  // delta f(a, b) = f(a) f(b) / f(ab) with f(a) = i^{v[a]}; keep the
  // sign-valued ones.
  std::set<std::uint32_t> coboundaries;
  for (std::uint32_t code = 0; code < 256; ++code) {
    const std::uint32_t v[4] = {code & 3u, (code >> 2) & 3u, (code >> 4) & 3u,
                                (code >> 6) & 3u};
    std::uint32_t word = 0;
    bool sign_valued = true;
    for (std::uint32_t a = 0; a < 4 && sign_valued; ++a) {
      for (std::uint32_t b = 0; b < 4; ++b) {
        const std::uint32_t quarter = (v[a] + v[b] + 4 - v[mul(a, b)]) & 3u;
        if (quarter & 1u) {
          sign_valued = false;
          break;
        }
        word |= (quarter >> 1) << (4 * a + b);
      }
    }
    if (sign_valued) coboundaries.insert(word);
  }
  CHECK(coboundaries.size() == 16);

  // Coboundaries are cocycles, and the quotient has order exactly two.
  for (std::uint32_t word : coboundaries) {
    CHECK(cocycles.count(word) == 1);
  }
  CHECK(cocycles.size() / coboundaries.size() == 2);

  // The computed classification agrees: one invariant factor of order two,
  // and the representative lies in the nontrivial coset (after gauging it
  // into sign values if it uses fourth roots).
  const SchurData schur = h2_finite_group(FiniteGroup::parse("Z/2xZ/2"));
  CHECK(schur.invariant_factors == std::vector<std::uint64_t>{2});
  REQUIRE(schur.representatives.size() == 1);
  const TorsionCocycle& rep = schur.representatives[0];

  std::vector<std::uint32_t> quarters(16);
  for (std::uint32_t a = 0; a < 4; ++a) {
    for (std::uint32_t b = 0; b < 4; ++b) {
      const Rational angle = rep.angle(a, b);
      const Rational scaled = angle * Rational(4);
      REQUIRE(scaled.den() == 1);
      quarters[4 * a + b] =
          static_cast<std::uint32_t>(((scaled.num() % 4) + 4) % 4);
    }
  }
  bool matched = false;
  for (std::uint32_t code = 0; code < 256 && !matched; ++code) {
    const std::uint32_t v[4] = {code & 3u, (code >> 2) & 3u, (code >> 4) & 3u,
                                (code >> 6) & 3u};
    std::uint32_t word = 0;
    bool sign_valued = true;
    for (std::uint32_t a = 0; a < 4 && sign_valued; ++a) {
      for (std::uint32_t b = 0; b < 4; ++b) {
        const std::uint32_t quarter =
            (quarters[4 * a + b] + v[a] + v[b] + 8 - v[mul(a, b)]) & 3u;
        if (quarter & 1u) {
          sign_valued = false;
          break;
        }
        word |= (quarter >> 1) << (4 * a + b);
      }
    }
    if (!sign_valued) continue;
    REQUIRE(cocycles.count(word) == 1);
    CHECK(coboundaries.count(word) == 0);
    matched = true;
  }
  CHECK(matched);
}

}  // namespace
