// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "holonomy/error.hpp"
#include "holonomy/expr.hpp"
#include "holonomy/group.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/loop.hpp"
#include "holonomy/pform.hpp"
#include "holonomy/rational.hpp"
#include "holonomy/space.hpp"

namespace {

using namespace holonomy;

Groupoid circle_half_shift() {
  const SpaceModel space = SpaceModel::torus(1);
  const FiniteGroup g = FiniteGroup::cyclic(2);
  AffineMap shift;
  shift.linear = {{1}};
  shift.translation = {Rational(1, 2)};
  std::vector<AffineMap> maps{AffineMap::identity(1), shift};
  return Groupoid::quotient(space, g, AffineAction(space, g, maps));
}

Groupoid four_points_rotation() {
  const SpaceModel pts = SpaceModel::points(4);
  const FiniteGroup z4 = FiniteGroup::cyclic(4);
  std::vector<std::vector<std::uint32_t>> perms{
      {0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
  return Groupoid::quotient(pts, z4, AffineAction(pts, z4, perms));
}

PathSegment unit_interval_path(const char* expr) {
  return PathSegment::parametric(Rational(0), Rational(1),
                                 {Expr::parse(expr)});
}

TEST_CASE("partitions validate their breakpoints") {
  const Partition p({Rational(0), Rational(1, 3), Rational(1)});
  CHECK(p.segments() == 2);
  CHECK(p.value(1) == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(Partition({Rational(0)}), Error);
  CHECK_THROWS_AS(Partition({Rational(1, 4), Rational(1)}), Error);
  CHECK_THROWS_AS(Partition({Rational(0), Rational(1, 2)}), Error);
  CHECK_THROWS_AS(
      Partition({Rational(0), Rational(2, 3), Rational(1, 3), Rational(1)}),
      Error);

  const Partition refined = p.refined({Rational(2, 3)});
  CHECK(refined.segments() == 3);
  try {
    p.refined({Rational(1, 3)});
    FAIL("expected a duplicate-breakpoint rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::DuplicateBreakpoint);
  }
  CHECK_THROWS_AS(p.refined({Rational(3, 2)}), Error);
}

TEST_CASE("parametric segments evaluate coordinates and velocity") {
  const PathSegment seg = PathSegment::parametric(
      Rational(0), Rational(1, 2), {Expr::parse("t^2"), Expr::parse("3*t")});
  CHECK(seg.dim() == 2);
  CHECK(seg.at(0.25)[0] == doctest::Approx(0.0625));
  CHECK(seg.at(0.25)[1] == doctest::Approx(0.75));
  CHECK(seg.velocity(0.25)[0] == doctest::Approx(0.5));
  CHECK(seg.velocity(0.25)[1] == doctest::Approx(3.0));
  CHECK_THROWS_AS(seg.at(0.75), Error);

  // Points reduce into [0, 1)^d even when the cover coordinate runs past 1.
  const PathSegment wind = unit_interval_path("2*t");
  const Point p = wind.point_at(SpaceModel::torus(1), 0.75);
  CHECK(p.coords[0] == doctest::Approx(0.5));
  CHECK(wind.at(0.75)[0] == doctest::Approx(1.5));
}

TEST_CASE("polyline segments interpolate linearly") {
  const PathSegment seg = PathSegment::polyline(
      Rational(0), Rational(1),
      {{0.0, {0.0}}, {0.5, {0.2}}, {1.0, {1.0}}});
  CHECK(seg.at(0.25)[0] == doctest::Approx(0.1));
  CHECK(seg.at(0.75)[0] == doctest::Approx(0.6));
  CHECK(seg.velocity(0.25)[0] == doctest::Approx(0.4));
  CHECK(seg.velocity(0.75)[0] == doctest::Approx(1.6));

  // Samples must cover the domain.
  CHECK_THROWS_AS(PathSegment::polyline(Rational(0), Rational(1),
                                        {{0.0, {0.0}}, {0.5, {0.2}}}),
                  Error);
}

TEST_CASE("segments split preserving geometry") {
  const PathSegment seg = unit_interval_path("t^2");
  const auto [left, right] = seg.split_at(Rational(1, 3));
  CHECK(left.t1() == doctest::Approx(1.0 / 3.0));
  CHECK(right.t0() == doctest::Approx(1.0 / 3.0));
  CHECK(left.at(0.2)[0] == doctest::Approx(0.04));
  CHECK(right.at(0.9)[0] == doctest::Approx(0.81));
}

TEST_CASE("one-segment loops demand a closing wrap arrow") {
  const Groupoid gpd = circle_half_shift();
  // phi(t) = t/2 ends at 1/2; the shift g = 1 carries 1/2 back to 0.
  const SegmentedLoop loop =
      build_one_segment_loop(gpd, unit_interval_path("t/2"), 1);
  CHECK(loop.size() == 1);
  CHECK(loop.connecting_arrow(0).g == 1);

  // With the identity label the endpoints stay half a circle apart.
  try {
    build_one_segment_loop(gpd, unit_interval_path("t/2"), 0);
    FAIL("expected an endpoint mismatch");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::EndpointMismatch);
  }
  // phi(t) = t/3 closes under neither label.
  CHECK_THROWS_AS(build_one_segment_loop(gpd, unit_interval_path("t/3"), 0),
                  Error);
  CHECK_THROWS_AS(build_one_segment_loop(gpd, unit_interval_path("t/3"), 1),
                  Error);
}

TEST_CASE("multi-segment loops validate counts and breakpoints") {
  const Groupoid gpd = four_points_rotation();
  const Partition p({Rational(0), Rational(1, 2), Rational(1)});
  std::vector<PathSegment> segs;
  segs.push_back(
      PathSegment::constant(Rational(0), Rational(1, 2), Point::at(std::size_t{0})));
  segs.push_back(
      PathSegment::constant(Rational(1, 2), Rational(1), Point::at(std::size_t{1})));

  // Arrow 0 carries point 0 to point 1 (g = 1); arrow 1 returns via g = 3.
  Arrow a0;
  a0.src = Point::at(std::size_t{0});
  a0.g = 1;
  Arrow a1;
  a1.src = Point::at(std::size_t{1});
  a1.g = 3;
  const SegmentedLoop loop = build_loop(gpd, p, segs, {a0, a1});
  CHECK(loop.size() == 2);

  // Wrong arrow count.
  CHECK_THROWS_AS(build_loop(gpd, p, segs, {a0}), Error);
  // Segment domains must match the partition intervals.
  std::vector<PathSegment> misaligned;
  misaligned.push_back(
      PathSegment::constant(Rational(0), Rational(1, 3), Point::at(std::size_t{0})));
  misaligned.push_back(
      PathSegment::constant(Rational(1, 3), Rational(1), Point::at(std::size_t{1})));
  CHECK_THROWS_AS(build_loop(gpd, p, misaligned, {a0, a1}), Error);
  // A wrap arrow landing on the wrong point is an endpoint mismatch.
  Arrow bad = a1;
  bad.g = 2;
  CHECK_THROWS_AS(build_loop(gpd, p, segs, {a0, bad}), Error);
}

TEST_CASE("refinement inserts unit arrows without moving the loop") {
  const Groupoid gpd = circle_half_shift();
  const SegmentedLoop loop =
      build_one_segment_loop(gpd, unit_interval_path("t/2"), 1);
  const SegmentedLoop fine = refine_loop(gpd, loop, {Rational(1, 4), Rational(5, 8)});
  CHECK(fine.size() == 3);
  CHECK(fine.partition().point(1) == Rational(1, 4));
  // Interior connecting arrows are units; the wrap arrow keeps its label.
  CHECK(gpd.is_unit(fine.connecting_arrow(0)));
  CHECK(gpd.is_unit(fine.connecting_arrow(1)));
  CHECK(fine.connecting_arrow(2).g == 1);
  // Geometry is unchanged across the cut.
  CHECK(fine.segment(1).at(0.5)[0] == doctest::Approx(0.25));
}

TEST_CASE("loop arrows transport segments and conjugate wraps") {
  const Groupoid gpd = circle_half_shift();
  const SegmentedLoop loop =
      build_one_segment_loop(gpd, unit_interval_path("t/2"), 1);
  const LoopArrow moved = transported_loop_arrow(gpd, loop, {1});
  CHECK(moved.elem(0) == 1);
  // The target segment is the source shifted by one half.
  CHECK(moved.target().segment(0).at(0.5)[0] == doctest::Approx(0.75));
  // Conjugation in an abelian group keeps the wrap label.
  CHECK(moved.target().connecting_arrow(0).g == 1);

  const LoopArrow unit = identity_loop_arrow(gpd, loop);
  CHECK(unit.elem(0) == 0);
  const LoopArrow square = compose_loop_arrows(gpd, moved,
                                               transported_loop_arrow(
                                                   gpd, moved.target(), {1}));
  // Shifting twice is the identity element again.
  CHECK(square.elem(0) == 0);
  CHECK(square.target().segment(0).at(0.0)[0] == doctest::Approx(0.0));

  // Composition demands matching middle loops.
  CHECK_THROWS_AS(compose_loop_arrows(gpd, moved, moved), Error);
}

TEST_CASE("explicit loop arrows check the pointwise relation") {
  const Groupoid gpd = circle_half_shift();
  const SegmentedLoop loop =
      build_one_segment_loop(gpd, unit_interval_path("t/2"), 1);
  const SegmentedLoop shifted =
      build_one_segment_loop(gpd, unit_interval_path("t/2 + 1/2"), 1);
  const LoopArrow arrow = build_loop_arrow(gpd, loop, shifted, {1});
  CHECK(arrow.at(gpd, 0, 0.25).g == 1);

  // The identity element does not relate the two loops pointwise.
  CHECK_THROWS_AS(build_loop_arrow(gpd, loop, shifted, {0}), Error);

  // Partition mismatch is detected before any sampling.
  const SegmentedLoop fine = refine_loop(gpd, loop, {Rational(1, 2)});
  try {
    build_loop_arrow(gpd, fine, shifted, {1, 1});
    FAIL("expected a partition mismatch");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::PartitionMismatch);
  }
}

TEST_CASE("loop tangents validate boundary compatibility") {
  const Groupoid gpd = circle_half_shift();
  const SegmentedLoop loop =
      build_one_segment_loop(gpd, unit_interval_path("t/2"), 1);
  // A periodic field matches itself through the wrap arrow.
  const LoopTangent xi =
      build_loop_tangent(gpd, loop, {{Expr::parse("sin(2*pi*t)")}});
  CHECK(xi.at(0, 0.25)[0] == doctest::Approx(1.0));

  // cos(pi t) is 1 at t = 0 but -1 at t = 1: incompatible around the wrap.
  try {
    build_loop_tangent(gpd, loop, {{Expr::parse("cos(pi*t)")}});
    FAIL("expected a boundary incompatibility");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::EndpointMismatch);
  }

  // Over finite point sets only empty fields are tangent.
  const Groupoid pts = four_points_rotation();
  const PathSegment rest =
      PathSegment::constant(Rational(0), Rational(1), Point::at(std::size_t{0}));
  const SegmentedLoop still = build_one_segment_loop(pts, rest, 0);
  const LoopTangent empty =
      build_loop_tangent(pts, still, std::vector<std::vector<Expr>>{{}});
  CHECK(empty.at(0, 0.5).empty());
}

TEST_CASE("loop families slice into validated arrows and tangents") {
  const Groupoid gpd = circle_half_shift();
  // phi_s(t) = t/2 + s1 sin(2 pi t) / 10, moved by the shift element.
  const LoopFamily family = build_loop_family(
      gpd, Partition({Rational(0), Rational(1)}),
      {{Expr::parse("t/2 + s1*sin(2*pi*t)/10")}}, {1}, {1}, 1, 0.05);
  const LoopArrow base = family.base(gpd);
  CHECK(base.elem(0) == 1);
  const LoopArrow near = family.arrow_at(gpd, {0.03});
  CHECK(near.source().segment(0).at(0.25)[0] ==
        doctest::Approx(0.125 + 0.03 / 10.0));
  CHECK_THROWS_AS(family.arrow_at(gpd, {0.2}), Error);

  const LoopTangent xi = family.source_tangent(gpd, 0);
  CHECK(xi.at(0, 0.25)[0] == doctest::Approx(0.1));
}

TEST_CASE("segment integrals match closed forms") {
  // Along phi(t) = 2t the constant form 3 dx1 pulls back to 6 dt, and
  // cos(2 pi x1) dx1 pulls back to 2 cos(4 pi t) dt with integral zero.
  PForm w(1, 1);
  w.set({0}, Expr::constant(3.0));
  const PathSegment wind = unit_interval_path("2*t");
  CHECK(std::abs(integrate_along(w, wind) - std::complex<double>(6.0)) <
        1e-9);

  PForm cosw(1, 1);
  cosw.set({0}, Expr::parse("cos(2*pi*x1)"));
  CHECK(std::abs(integrate_along(cosw, wind)) < 1e-9);

  // B(dphi/dt, xi) with B = dx1 ^ dx2, phi = (t, 0), xi = (0, sin(2 pi t)):
  // the integrand is sin(2 pi t), and over the segment domain [0, 1/2] the
  // integral is 1/pi.
  const SpaceModel t2 = SpaceModel::torus(2);
  const FiniteGroup z1 = FiniteGroup::cyclic(1);
  const Groupoid gpd =
      Groupoid::quotient(t2, z1, AffineAction(t2, z1));
  const Partition p({Rational(0), Rational(1, 2), Rational(1)});
  std::vector<PathSegment> segs;
  segs.push_back(PathSegment::parametric(
      Rational(0), Rational(1, 2), {Expr::parse("t"), Expr::constant(0.0)}));
  segs.push_back(PathSegment::parametric(
      Rational(1, 2), Rational(1), {Expr::parse("t"), Expr::constant(0.0)}));
  std::vector<Arrow> arrows(2);
  arrows[0].src = Point::at({0.5, 0.0});
  arrows[1].src = Point::at({0.0, 0.0});
  const SegmentedLoop loop = build_loop(gpd, p, segs, arrows);
  const LoopTangent xi = build_loop_tangent(
      gpd, loop,
      {{Expr::constant(0.0), Expr::parse("sin(2*pi*t)")},
       {Expr::constant(0.0), Expr::parse("sin(2*pi*t)")}});
  PForm b(2, 2);
  b.set({0, 1}, Expr::constant(1.0));
  CHECK(std::abs(integrate_along(b, loop.segment(0), xi, 0) -
                 std::complex<double>(1.0 / M_PI)) < 1e-9);
}

}  // namespace
