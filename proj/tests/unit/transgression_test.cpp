// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "holonomy/cochain.hpp"
#include "holonomy/error.hpp"
#include "holonomy/expr.hpp"
#include "holonomy/group.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/loop.hpp"
#include "holonomy/rational.hpp"
#include "holonomy/scalar.hpp"
#include "holonomy/sectors.hpp"
#include "holonomy/space.hpp"
#include "holonomy/transgression.hpp"

namespace {

using namespace holonomy;
using cplx = std::complex<double>;

Groupoid circle_half_shift() {
  const SpaceModel space = SpaceModel::torus(1);
  const FiniteGroup g = FiniteGroup::cyclic(2);
  AffineMap shift;
  shift.linear = {{1}};
  shift.translation = {Rational(1, 2)};
  std::vector<AffineMap> maps{AffineMap::identity(1), shift};
  return Groupoid::quotient(space, g, AffineAction(space, g, maps));
}

Groupoid point_group(const FiniteGroup& g) {
  const SpaceModel pt = SpaceModel::points(1);
  return Groupoid::quotient(pt, g, AffineAction(pt, g));
}

PathSegment unit_interval_path(const char* expr) {
  return PathSegment::parametric(Rational(0), Rational(1),
                                 {Expr::parse(expr)});
}

SegmentedLoop constant_loop(const Groupoid& gpd, GroupElement g) {
  const PathSegment rest =
      PathSegment::constant(Rational(0), Rational(1), Point::at(std::size_t{0}));
  return build_one_segment_loop(gpd, rest, g);
}

TEST_CASE("holonomy of a line on the circle matches the closed form") {
  const Groupoid gpd = circle_half_shift();
  // h(identity) = 1, h(shift) = exp(pi i x1) is multiplicative up to the
  // shift; A = (3/2) i dx1. Around the full circle phi(t) = t the holonomy
  // is exp(int_0^1 (3/2) i dt) / h(wrap = identity at 0) = exp(1.5 i).
  LineData line;
  std::map<TupleKey, Expr> h;
  h[{0}] = Expr::constant(1.0);
  h[{1}] = Expr::parse("exp(pi*i*x1)");
  line.h = CochainFunction::group_expr(gpd, 1, h);
  FormFamily a(FormFamily::Keying::Action, 0, 1, 1);
  PForm w(1, 1);
  w.set({0}, Expr::parse("i*3/2"));
  a.set({}, w);
  line.A = a;

  const SegmentedLoop around =
      build_one_segment_loop(gpd, unit_interval_path("t"), 0);
  const Scalar value = tau1_eval(gpd, line, around);
  CHECK(std::abs(value.value() - std::exp(cplx(0.0, 1.5))) < 1e-9);

  // The half loop phi(t) = t/2 closes via the shift; the wrap contributes
  // h(shift at x = 1/2)^{-1} = exp(-pi i / 2) = -i and the integral
  // contributes exp(3 i / 4).
  const SegmentedLoop half =
      build_one_segment_loop(gpd, unit_interval_path("t/2"), 1);
  const Scalar half_value = tau1_eval(gpd, line, half);
  CHECK(std::abs(half_value.value() -
                 std::exp(cplx(0.0, 0.75)) * cplx(0.0, -1.0)) < 1e-9);

  // The functor form agrees with the free function.
  const HolonomyMap H(line);
  CHECK(std::abs(H(gpd, around).value() - value.value()) < 1e-15);
}

TEST_CASE("holonomy is exact for flat table data") {
  const FiniteGroup z4 = FiniteGroup::cyclic(4);
  const Groupoid gpd = point_group(z4);
  // The character g -> i^g as a flat line bundle.
  std::map<TupleKey, Scalar> h;
  for (std::uint32_t g = 0; g < 4; ++g) {
    h[{g}] = Scalar::exact_phase(Rational(g, 4));
  }
  LineData line;
  line.h = CochainFunction::group_table(gpd, 1, std::move(h));
  line.A = FormFamily(FormFamily::Keying::Action, 0, 1, 0);

  const SegmentedLoop loop = constant_loop(gpd, 1);
  const Scalar value = tau1_eval(gpd, line, loop);
  CHECK(value.is_exact());
  // H((x, g)) = h(g)^{-1} = exp(-2 pi i / 4).
  CHECK(value.exact_eq(Scalar::exact_phase(Rational(-1, 4))));

  // Holonomy is multiplicative in the data.
  const Scalar twice = tau1_eval(gpd, line.product(gpd, line), loop);
  CHECK(twice.exact_eq(Scalar::exact_phase(Rational(-1, 2))));
}

TEST_CASE("transgressed transition values match the torsion closed form") {
  const FiniteGroup klein = FiniteGroup::parse("Z/2xZ/2");
  const Groupoid gpd = point_group(klein);
  // eps(a, b) = (-1)^{a_1 b_2} represents the nontrivial class.
  std::vector<std::vector<Rational>> angles(4, std::vector<Rational>(4));
  for (std::uint32_t a = 0; a < 4; ++a) {
    for (std::uint32_t b = 0; b < 4; ++b) {
      angles[a][b] = Rational(static_cast<std::int64_t>((a & 1) * (b >> 1)), 2);
    }
  }
  const TorsionCocycle eps =
      TorsionCocycle::from_angles(klein, angles, "sign-class");
  const GerbeData gerbe = torsion_gerbe(gpd, eps);
  CHECK(verify_cocycle(gpd, gerbe).pass());

  const TransgressedBundle bundle = tau2_build(gerbe);
  for (GroupElement g = 0; g < 4; ++g) {
    const SegmentedLoop loop = constant_loop(gpd, g);
    for (GroupElement k = 0; k < 4; ++k) {
      const LoopArrow arrow = transported_loop_arrow(gpd, loop, {k});
      const Scalar value = F_eval(gpd, bundle, arrow);
      // F = eps(g, k) / eps(k, g) in an abelian group.
      const Scalar expect = eps.eval(g, k) / eps.eval(k, g);
      CHECK(value.is_exact());
      CHECK(value.exact_eq(expect));
    }
  }

  // The wrap-by-transport table is multiplicative in the transport element.
  const SegmentedLoop loop = constant_loop(gpd, 3);
  const LoopArrow by1 = transported_loop_arrow(gpd, loop, {1});
  const LoopArrow by2 = transported_loop_arrow(gpd, by1.target(), {2});
  const Scalar composed = F_eval(gpd, bundle,
                                 compose_loop_arrows(gpd, by1, by2));
  const Scalar split = F_eval(gpd, bundle, by1) * F_eval(gpd, bundle, by2);
  CHECK(composed.exact_eq(split));
}

TEST_CASE("connection pairing reduces to the B integral for A = 0") {
  const SpaceModel t2 = SpaceModel::torus(2);
  const FiniteGroup z1 = FiniteGroup::cyclic(1);
  const Groupoid gpd = Groupoid::quotient(t2, z1, AffineAction(t2, z1));

  GerbeData gerbe;
  gerbe.h = CochainFunction::constant_one(2);
  gerbe.A = FormFamily(FormFamily::Keying::Action, 1, 1, 2);
  FormFamily b_family(FormFamily::Keying::Action, 0, 2, 2);
  PForm b(2, 2);
  b.set({0, 1}, Expr::constant(1.0));
  b_family.set({}, b);
  gerbe.B = b_family;

  // psi(t) = (t, 0) with field xi = (0, sin^2(2 pi t)):
  // B(dpsi/dt, xi) = sin^2, integrating to 1/2.
  const SegmentedLoop loop = build_one_segment_loop(
      gpd,
      PathSegment::parametric(Rational(0), Rational(1),
                              {Expr::parse("t"), Expr::constant(0.0)}),
      0);
  const LoopTangent xi = build_loop_tangent(
      gpd, loop, {{Expr::constant(0.0), Expr::parse("sin(2*pi*t)^2")}});
  const TransgressedBundle bundle = tau2_build(gerbe);
  CHECK(std::abs(Delta_eval(gpd, bundle, loop, xi) - cplx(0.5)) < 1e-9);

  // The pairing is linear in the field.
  const LoopTangent xi2 = build_loop_tangent(
      gpd, loop, {{Expr::constant(0.0), Expr::parse("2*sin(2*pi*t)^2")}});
  CHECK(std::abs(Delta_eval(gpd, bundle, loop, xi2) - cplx(1.0)) < 1e-9);
}

TEST_CASE("finite differences of log F guard against branch jumps") {
  const Groupoid gpd = circle_half_shift();
  std::map<TupleKey, Expr> f;
  f[{}] = Expr::parse("exp(2*pi*i*x1)");
  const LineData line =
      gauge_coboundary(gpd, CochainFunction::group_expr(gpd, 0, f));
  const GerbeData gerbe = total_coboundary(gpd, line);
  const TransgressedBundle bundle = tau2_build(gerbe);

  const LoopFamily family = build_loop_family(
      gpd, Partition({Rational(0), Rational(1)}),
      {{Expr::parse("t/2 + s1*sin(2*pi*t)/10")}}, {1}, {0}, 1, 1e-3);
  // The derivative exists and is finite at a small step.
  const cplx d = dlogF_fd(gpd, bundle, family, 1e-3);
  CHECK(std::isfinite(d.real()));
  CHECK(std::isfinite(d.imag()));

  // For cocycle data the derivative cancels the Delta coboundary to the
  // order of the step.
  CHECK(std::abs(d + delta_Delta_eval(gpd, bundle, family)) < 1e-4);
}

TEST_CASE("the commutation square holds even off the cocycle locus") {
  const Groupoid gpd = circle_half_shift();
  std::map<TupleKey, Expr> f;
  f[{}] = Expr::parse("exp(2*pi*i*x1)");
  const LineData line =
      gauge_coboundary(gpd, CochainFunction::group_expr(gpd, 0, f));

  const SegmentedLoop around =
      build_one_segment_loop(gpd, unit_interval_path("t"), 0);
  std::vector<LoopArrow> arrows;
  arrows.push_back(transported_loop_arrow(gpd, around, {1}));
  arrows.push_back(identity_loop_arrow(gpd, around));
  const VerifyReport straight = check_commutation_square(gpd, line, arrows);
  CHECK(straight.pass());
  CHECK(straight.max_residual() < 1e-9);

  // Skew h by a non-multiplicative factor. The skewed data fails the
  // cocycle conditions, yet the square is an algebraic identity in the
  // data and must keep commuting.
  LineData skewed = line;
  std::map<TupleKey, Expr> bump;
  bump[{0}] = Expr::constant(1.0);
  bump[{1}] = Expr::parse("exp(i*sin(2*pi*x1))");
  skewed.h =
      skewed.h.product(gpd, CochainFunction::group_expr(gpd, 1, bump));
  CHECK_FALSE(verify_cocycle(gpd, skewed).pass());
  CHECK(check_commutation_square(gpd, skewed, arrows).pass());
}

TEST_CASE("flat transgression at degree two matches the bundle") {
  const FiniteGroup klein = FiniteGroup::parse("Z/2xZ/2");
  const Groupoid gpd = point_group(klein);
  const SchurData schur = h2_finite_group(klein);
  REQUIRE(schur.representatives.size() == 1);
  const GerbeData gerbe = torsion_gerbe(gpd, schur.representatives[0]);

  FlatNData flat;
  flat.n = 2;
  flat.omega = gerbe.h;
  const FlatTransgression tau(flat);
  const TransgressedBundle bundle = tau2_build(gerbe);

  for (GroupElement g = 0; g < 4; ++g) {
    const SegmentedLoop loop = constant_loop(gpd, g);
    for (GroupElement k = 0; k < 4; ++k) {
      const LoopArrow arrow = transported_loop_arrow(gpd, loop, {k});
      CHECK(tau.F(gpd, {arrow}).exact_eq(F_eval(gpd, bundle, arrow)));
    }
  }

  // Chain length must be n - 1.
  const LoopArrow arrow =
      transported_loop_arrow(gpd, constant_loop(gpd, 1), {2});
  CHECK_THROWS_AS(tau.F(gpd, {arrow, arrow}), Error);
}

TEST_CASE("degree-three flat values are coboundary-free on chains") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const Groupoid gpd = point_group(z2);
  // omega(g1, g2, g3) = (-1)^{g1 g2 g3} is a 3-cocycle on Z/2.
  std::map<TupleKey, Scalar> omega;
  for (std::uint32_t a = 0; a < 2; ++a) {
    for (std::uint32_t b = 0; b < 2; ++b) {
      for (std::uint32_t c = 0; c < 2; ++c) {
        omega[{a, b, c}] =
            Scalar::exact_phase(Rational(static_cast<std::int64_t>(a * b * c), 2));
      }
    }
  }
  FlatNData flat;
  flat.n = 3;
  flat.omega = CochainFunction::group_table(gpd, 3, std::move(omega));
  CHECK(verify_cocycle(gpd, flat).pass());

  const FlatTransgression tau(flat);
  const SegmentedLoop loop = constant_loop(gpd, 1);
  const LoopArrow first = transported_loop_arrow(gpd, loop, {1});
  const LoopArrow second = transported_loop_arrow(gpd, first.target(), {1});
  const Scalar value = tau.F(gpd, {first, second});
  CHECK(value.is_exact());

  // A degree-3 chain needs exactly two arrows.
  CHECK_THROWS_AS(tau.F(gpd, {first}), Error);
  // Arrows based at loops with different wrap labels do not compose.
  const LoopArrow on_trivial =
      transported_loop_arrow(gpd, constant_loop(gpd, 0), {1});
  CHECK_THROWS_AS(tau.F(gpd, {first, on_trivial}), Error);
}

}  // namespace
