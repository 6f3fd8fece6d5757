// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "holonomy/error.hpp"
#include "holonomy/group.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/rational.hpp"
#include "holonomy/space.hpp"

namespace {

using namespace holonomy;

AffineMap torus_map(std::vector<std::vector<std::int64_t>> linear,
                    std::vector<Rational> translation) {
  AffineMap m;
  m.linear = std::move(linear);
  m.translation = std::move(translation);
  return m;
}

// Z/2 acting on T^1 by x -> -x.
Groupoid circle_inversion() {
  const SpaceModel space = SpaceModel::torus(1);
  const FiniteGroup g = FiniteGroup::cyclic(2);
  std::vector<AffineMap> maps;
  maps.push_back(AffineMap::identity(1));
  maps.push_back(torus_map({{-1}}, {Rational(0)}));
  return Groupoid::quotient(space, g, AffineAction(space, g, maps));
}

// Z/2 acting on T^1 by the half shift x -> x + 1/2.
Groupoid circle_half_shift() {
  const SpaceModel space = SpaceModel::torus(1);
  const FiniteGroup g = FiniteGroup::cyclic(2);
  std::vector<AffineMap> maps;
  maps.push_back(AffineMap::identity(1));
  maps.push_back(torus_map({{1}}, {Rational(1, 2)}));
  return Groupoid::quotient(space, g, AffineAction(space, g, maps));
}

TEST_CASE("mod1 reduces into the half-open unit interval") {
  CHECK(mod1(0.0) == 0.0);
  CHECK(mod1(1.0) == 0.0);
  CHECK(mod1(-0.25) == doctest::Approx(0.75));
  CHECK(mod1(3.5) == doctest::Approx(0.5));
  // Values within the snapping tolerance of an integer reduce to exactly 0.
  CHECK(mod1(1.0 - 1e-15) == 0.0);
}

TEST_CASE("torus distance is the shortest arc per coordinate") {
  const SpaceModel t2 = SpaceModel::torus(2);
  CHECK(point_dist(t2, Point::at({0.1, 0.9}), Point::at({0.9, 0.1})) ==
        doctest::Approx(std::sqrt(0.08)));
  const SpaceModel pts = SpaceModel::points(3);
  CHECK(point_dist(pts, Point::at(std::size_t{1}), Point::at(std::size_t{1})) == 0.0);
  CHECK(point_dist(pts, Point::at(std::size_t{1}), Point::at(std::size_t{2})) == 1.0);
}

TEST_CASE("affine maps compose and push tangents linearly") {
  // f(x) = -x + 1/3, g(x) = x + 1/4; g after f sends x to -x + 7/12.
  const AffineMap f = torus_map({{-1}}, {Rational(1, 3)});
  const AffineMap g = torus_map({{1}}, {Rational(1, 4)});
  const AffineMap gf = g.compose_after(f);
  CHECK(gf.apply({0.25})[0] == doctest::Approx(1.0 / 3.0));
  // The unreduced image keeps the cover coordinate: -0.25 + 7/12.
  CHECK(gf.apply_unreduced({0.25})[0] == doctest::Approx(1.0 / 3.0));
  CHECK(gf.apply_unreduced({0.75})[0] == doctest::Approx(-1.0 / 6.0));
  CHECK(f.push({2.0})[0] == doctest::Approx(-2.0));
}

TEST_CASE("permutation actions validate compatibility") {
  const SpaceModel pts = SpaceModel::points(3);
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  // Rotation i -> i+1 mod 3 for the generator: a genuine action.
  std::vector<std::vector<std::uint32_t>> good{
      {0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  const AffineAction act(pts, z3, good);
  CHECK(act.act(Point::at(std::size_t{0}), 1).index == 1);
  CHECK(act.act(Point::at(std::size_t{2}), 2).index == 1);

  // Sending the generator to a transposition breaks (x.g).g = x.g^2.
  std::vector<std::vector<std::uint32_t>> bad{
      {0, 1, 2}, {1, 0, 2}, {2, 0, 1}};
  CHECK_THROWS_AS(AffineAction(pts, z3, bad), Error);
}

TEST_CASE("torus actions validate unimodularity and compatibility") {
  const SpaceModel t1 = SpaceModel::torus(1);
  const FiniteGroup z2 = FiniteGroup::cyclic(2);

  // Linear part 2 is not invertible over the integers.
  std::vector<AffineMap> scaling{AffineMap::identity(1),
                                 torus_map({{2}}, {Rational(0)})};
  CHECK_THROWS_AS(AffineAction(t1, z2, scaling), Error);

  // A third shift does not square to the identity, so Z/2 cannot act by it.
  std::vector<AffineMap> third{AffineMap::identity(1),
                               torus_map({{1}}, {Rational(1, 3)})};
  try {
    AffineAction(t1, z2, third);
    FAIL("expected an incompatible-action error");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::ActionNotCompatible);
  }
}

TEST_CASE("quotient groupoid composes arrows over point sets") {
  const SpaceModel pts = SpaceModel::points(2);
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  std::vector<std::vector<std::uint32_t>> swap{{0, 1}, {1, 0}};
  const Groupoid gpd =
      Groupoid::quotient(pts, z2, AffineAction(pts, z2, swap));

  Arrow a;
  a.src = Point::at(std::size_t{0});
  a.g = 1;
  CHECK(gpd.target(a).index == 1);

  Arrow b;
  b.src = Point::at(std::size_t{1});
  b.g = 1;
  const Arrow ab = gpd.compose(a, b);
  CHECK(gpd.is_unit(ab));

  // b is not composable after itself: its target is point 0, not 1.
  CHECK_THROWS_AS(gpd.compose(b, b), Error);
  const Arrow ainv = gpd.inverse(a);
  CHECK(ainv.src.index == 1);
  CHECK(gpd.is_unit(gpd.compose(a, ainv)));
}

TEST_CASE("nerve enumeration counts points times group powers") {
  const SpaceModel pts = SpaceModel::points(3);
  const FiniteGroup z4 = FiniteGroup::cyclic(4);
  const Groupoid gpd = Groupoid::quotient(pts, z4, AffineAction(pts, z4));

  // |M| * |G|^k at each level; level 0 lists the objects themselves.
  CHECK(gpd.enumerate_nerve(0).size() == 3);
  CHECK(gpd.enumerate_nerve(1).size() == 12);
  CHECK(gpd.enumerate_nerve(2).size() == 48);
  CHECK(gpd.enumerate_nerve(3).size() == 192);

  // Every enumerated tuple carries the full element chain.
  for (const NerveTuple& tup : gpd.enumerate_nerve(2)) {
    CHECK(tup.elems.size() == 2);
    CHECK(tup.charts.empty());
  }

  // The last tuple at level 2 is (point 2, g1 = 3, g2 = 3): enumeration is
  // lexicographic and terminates exactly at the expected count.
  const auto level2 = gpd.enumerate_nerve(2);
  CHECK(level2.back().base.index == 2);
  CHECK(level2.back().elems == std::vector<GroupElement>{3, 3});

  CHECK_THROWS_AS(circle_inversion().enumerate_nerve(1), Error);
}

TEST_CASE("nerve enumeration refuses to exceed its cap") {
  const SpaceModel pts = SpaceModel::points(100);
  const FiniteGroup g = FiniteGroup::parse("Z/2xZ/2xZ/2");
  const Groupoid gpd = Groupoid::quotient(pts, g, AffineAction(pts, g));
  // 100 * 8^8 > 10^7.
  try {
    gpd.enumerate_nerve(8);
    FAIL("expected a level cap error");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::LevelTooLarge);
  }
}

TEST_CASE("inversion on the circle has four isolated fixed objects") {
  const Groupoid gpd = circle_inversion();
  const InertiaGroupoid inertia = gpd.inertia();
  REQUIRE(inertia.fixed.size() == 2);

  // The identity fixes the whole circle: one 1-dimensional component.
  REQUIRE(inertia.fixed[0].size() == 1);
  CHECK(inertia.fixed[0][0].dim() == 1);

  // x -> -x fixes x = 0 and x = 1/2 only.
  REQUIRE(inertia.fixed[1].size() == 2);
  for (const FixedComponent& c : inertia.fixed[1]) {
    CHECK(c.dim() == 0);
  }
  CHECK(inertia.fixed[1][0].offset[0] == Rational(0));
  CHECK(inertia.fixed[1][1].offset[0] == Rational(1, 2));
}

TEST_CASE("free shifts contribute no twisted fixed sets") {
  const InertiaGroupoid inertia = circle_half_shift().inertia();
  REQUIRE(inertia.fixed.size() == 2);
  CHECK(inertia.fixed[0].size() == 1);
  CHECK(inertia.fixed[1].empty());
}

TEST_CASE("inertia conjugation follows the action") {
  const SpaceModel pts = SpaceModel::points(1);
  const FiniteGroup s3 = FiniteGroup::symmetric3();
  const Groupoid gpd = Groupoid::quotient(pts, s3, AffineAction(pts, s3));
  const InertiaGroupoid inertia = gpd.inertia();
  CHECK(inertia.objects.size() == 6);
  for (GroupElement v = 0; v < s3.order(); ++v) {
    for (GroupElement h = 0; h < s3.order(); ++h) {
      const auto [y, w] = inertia_conjugate(gpd, Point::at(std::size_t{0}), v, h);
      CHECK(y.index == 0);
      CHECK(w == s3.conj(v, h));
    }
  }
}

TEST_CASE("cover groupoids read one point in two charts") {
  const SpaceModel t1 = SpaceModel::torus(1);
  std::vector<Chart> charts(2);
  charts[0].lo = {Rational(-1, 4)};
  charts[0].hi = {Rational(3, 8)};
  charts[1].lo = {Rational(1, 4)};
  charts[1].hi = {Rational(7, 8)};
  const Groupoid gpd = Groupoid::cover(t1, charts);

  CHECK(gpd.chart_contains(0, Point::at({0.9})));
  CHECK_FALSE(gpd.chart_contains(0, Point::at({0.5})));
  CHECK(gpd.chart_contains(1, Point::at({0.5})));

  Arrow a;
  a.src = Point::at({0.3});
  a.chart_from = 0;
  a.chart_to = 1;
  CHECK(point_dist(t1, gpd.target(a), a.src) == 0.0);
  const Arrow u = gpd.unit(Point::at({0.3}), 1);
  const Arrow au = gpd.compose(a, u);
  CHECK(au.chart_from == 0);
  CHECK(au.chart_to == 1);
  CHECK(gpd.is_unit(gpd.compose(a, gpd.inverse(a))));
}

}  // namespace
