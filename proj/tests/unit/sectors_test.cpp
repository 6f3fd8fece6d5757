// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "holonomy/cochain.hpp"
#include "holonomy/error.hpp"
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

Groupoid point_group(const FiniteGroup& g) {
  const SpaceModel pt = SpaceModel::points(1);
  return Groupoid::quotient(pt, g, AffineAction(pt, g));
}

Groupoid circle_inversion() {
  const SpaceModel t1 = SpaceModel::torus(1);
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  AffineMap inv;
  inv.linear = {{-1}};
  inv.translation = {Rational(0)};
  return Groupoid::quotient(
      t1, z2, AffineAction(t1, z2, {AffineMap::identity(1), inv}));
}

SegmentedLoop constant_loop(const Groupoid& gpd, GroupElement g) {
  const PathSegment rest =
      PathSegment::constant(Rational(0), Rational(1), Point::at(std::size_t{0}));
  return build_one_segment_loop(gpd, rest, g);
}

TEST_CASE("second cohomology matches the classical table") {
  const std::vector<std::pair<const char*, std::vector<std::uint64_t>>>
      expected{{"Z/1", {}},
               {"Z/2", {}},
               {"Z/3", {}},
               {"Z/4", {}},
               {"Z/2xZ/2", {2}},
               {"Z/5", {}},
               {"Z/6", {}},
               {"Z/2xZ/3", {}},
               {"S3", {}},
               {"Z/7", {}},
               {"Z/8", {}},
               {"Z/2xZ/4", {2}},
               {"Z/2xZ/2xZ/2", {2, 2, 2}},
               {"D4", {2}},
               {"Q8", {}}};
  for (const auto& [spec, factors] : expected) {
    CAPTURE(spec);
    const SchurData schur = h2_finite_group(FiniteGroup::parse(spec));
    CHECK(schur.invariant_factors == factors);
    CHECK(schur.representatives.size() == factors.size());
  }
}

TEST_CASE("cohomology representatives are genuine nontrivial cocycles") {
  for (const char* spec : {"Z/2xZ/2", "Z/2xZ/4", "Z/2xZ/2xZ/2", "D4"}) {
    CAPTURE(spec);
    const FiniteGroup g = FiniteGroup::parse(spec);
    const Groupoid gpd = point_group(g);
    for (const TorsionCocycle& rep : h2_finite_group(g).representatives) {
      CHECK_FALSE(rep.is_trivial());
      CHECK(verify_cocycle(gpd, torsion_gerbe(gpd, rep)).pass());
    }
  }
}

TEST_CASE("representative pairings of abelian groups are alternating") {
  // For abelian G the ratio beta(g, k) = eps(g, k) / eps(k, g) of any
  // 2-cocycle is an alternating bicharacter; this is what weights the
  // twisted sectors.
  for (const char* spec : {"Z/2xZ/2", "Z/2xZ/4", "Z/2xZ/2xZ/2"}) {
    CAPTURE(spec);
    const FiniteGroup g = FiniteGroup::parse(spec);
    for (const TorsionCocycle& rep : h2_finite_group(g).representatives) {
      const auto beta = [&](GroupElement a, GroupElement b) {
        return rep.eval(a, b) / rep.eval(b, a);
      };
      bool nontrivial = false;
      for (GroupElement a = 0; a < g.order(); ++a) {
        CHECK(beta(a, a).dist_one() == 0.0);
        for (GroupElement b = 0; b < g.order(); ++b) {
          if (beta(a, b).dist_one() != 0.0) nontrivial = true;
          CHECK((beta(a, b) * beta(b, a)).dist_one() == 0.0);
          for (GroupElement c = 0; c < g.order(); ++c) {
            const Scalar lhs = beta(g.mul(a, c), b);
            const Scalar rhs = beta(a, b) * beta(c, b);
            CHECK(lhs.exact_eq(rhs));
          }
        }
      }
      // A trivial pairing would leave every twisted sector unweighted.
      CHECK(nontrivial);
    }
  }
}

TEST_CASE("torsion cocycles normalize and validate") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  // The constant table at angle 1/3 is a cocycle and normalizes to one.
  std::vector<std::vector<Rational>> constant(
      2, std::vector<Rational>(2, Rational(1, 3)));
  const TorsionCocycle c = TorsionCocycle::from_angles(z2, constant);
  CHECK(c.is_trivial());
  CHECK(TorsionCocycle::trivial(z2).is_trivial());

  // Flipping a single entry breaks the cocycle identity.
  std::vector<std::vector<Rational>> broken(2, std::vector<Rational>(2));
  broken[1][1] = Rational(1, 3);
  broken[1][0] = Rational(1, 7);
  try {
    TorsionCocycle::from_angles(z2, broken);
    FAIL("expected a cocycle validation error");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::InvalidArgument);
  }
}

TEST_CASE("cohomology respects the order cap") {
  try {
    h2_finite_group(FiniteGroup::parse("Z/8"), 4);
    FAIL("expected a cap rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::GroupTooLarge);
  }
}

TEST_CASE("torsion gerbes demand a matching group") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const Groupoid gpd = point_group(FiniteGroup::cyclic(4));
  try {
    torsion_gerbe(gpd, TorsionCocycle::trivial(z2));
    FAIL("expected a group mismatch");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::DomainMismatch);
  }
}

TEST_CASE("restricted gluing agrees with loop-groupoid transition values") {
  const FiniteGroup klein = FiniteGroup::parse("Z/2xZ/2");
  const Groupoid gpd = point_group(klein);
  const SchurData schur = h2_finite_group(klein);
  REQUIRE(schur.representatives.size() == 1);
  const TransgressedBundle bundle =
      tau2_build(torsion_gerbe(gpd, schur.representatives[0]));
  const LocalSystem ls = restrict_to_inertia(gpd, bundle);
  CHECK(ls.flat());

  for (GroupElement g = 0; g < 4; ++g) {
    const SegmentedLoop loop = constant_loop(gpd, g);
    for (GroupElement h = 0; h < 4; ++h) {
      const Scalar via_inertia = ls.f(gpd, Point::at(std::size_t{0}), g, h);
      const Scalar via_loops =
          F_eval(gpd, bundle, transported_loop_arrow(gpd, loop, {h}));
      CHECK(via_inertia.exact_eq(via_loops));
    }
  }

  const VerifyReport axioms = check_inner_local_system(gpd, ls);
  CHECK(axioms.pass());
  CHECK(axioms.max_residual() == 0.0);
}

TEST_CASE("a corrupted gluing value fails the axioms with a witness") {
  const FiniteGroup d4 = FiniteGroup::dihedral4();
  const Groupoid gpd = point_group(d4);
  const SchurData schur = h2_finite_group(d4);
  REQUIRE(schur.representatives.size() == 1);
  LocalSystem ls = restrict_to_inertia(
      gpd, tau2_build(torsion_gerbe(gpd, schur.representatives[0])));
  CHECK(check_inner_local_system(gpd, ls).pass());

  ls.override_value(0, 1, 2, Scalar::exact_phase(Rational(1, 5)));
  const VerifyReport report = check_inner_local_system(gpd, ls);
  CHECK_FALSE(report.pass());
  bool witnessed = false;
  for (const CheckResult& check : report.checks) {
    if (check.pass) continue;
    CHECK(check.residual > 1e-3);
    if (!check.witness.empty()) witnessed = true;
  }
  CHECK(witnessed);
}

TEST_CASE("sector decomposition follows the conjugacy classes") {
  const Groupoid klein = point_group(FiniteGroup::parse("Z/2xZ/2"));
  const SectorDecomposition abelian = sector_decomposition(klein);
  REQUIRE(abelian.sectors.size() == 4);
  for (const Sector& s : abelian.sectors) {
    CHECK(s.class_members.size() == 1);
    CHECK(s.centralizer.size() == 4);
    CHECK(s.fixed_points == std::vector<std::size_t>{0});
  }

  const Groupoid s3 = point_group(FiniteGroup::symmetric3());
  const SectorDecomposition perms = sector_decomposition(s3);
  REQUIRE(perms.sectors.size() == 3);
  std::multiset<std::pair<std::size_t, std::size_t>> shapes;
  for (const Sector& s : perms.sectors) {
    shapes.insert({s.class_members.size(), s.centralizer.size()});
    CHECK(s.class_members.size() * s.centralizer.size() == 6);
  }
  CHECK(shapes == std::multiset<std::pair<std::size_t, std::size_t>>{
                      {1, 6}, {2, 3}, {3, 2}});

  const SectorDecomposition trivial =
      sector_decomposition(point_group(FiniteGroup::cyclic(1)));
  CHECK(trivial.sectors.size() == 1);
}

TEST_CASE("sector values tabulate the restricted bundle") {
  const FiniteGroup klein = FiniteGroup::parse("Z/2xZ/2");
  const Groupoid gpd = point_group(klein);
  const SchurData schur = h2_finite_group(klein);
  const TransgressedBundle bundle =
      tau2_build(torsion_gerbe(gpd, schur.representatives[0]));
  const LocalSystem ls = restrict_to_inertia(gpd, bundle);

  const SectorDecomposition dec = sector_decomposition(gpd, &bundle);
  REQUIRE(dec.sectors.size() == 4);
  bool any_nontrivial = false;
  for (const Sector& s : dec.sectors) {
    REQUIRE(s.values.size() == 1);
    REQUIRE(s.values[0].size() == s.centralizer.size());
    for (std::size_t j = 0; j < s.centralizer.size(); ++j) {
      const Scalar expect =
          ls.f(gpd, Point::at(std::size_t{0}), s.rep, s.centralizer[j]);
      CHECK(s.values[0][j].exact_eq(expect));
      if (expect.dist_one() != 0.0) any_nontrivial = true;
    }
  }
  CHECK(any_nontrivial);
}

TEST_CASE("torus sectors carry fixed components instead of points") {
  const Groupoid gpd = circle_inversion();
  const SectorDecomposition dec = sector_decomposition(gpd);
  REQUIRE(dec.sectors.size() == 2);
  CHECK(dec.sectors[0].components.size() == 1);
  CHECK(dec.sectors[0].components[0].dim() == 1);
  CHECK(dec.sectors[1].components.size() == 2);
  CHECK(dec.sectors[1].components[0].dim() == 0);
  CHECK(dec.sectors[1].components[1].dim() == 0);
}

TEST_CASE("restriction requires a quotient groupoid") {
  const SpaceModel t1 = SpaceModel::torus(1);
  std::vector<Chart> charts(1);
  charts[0].lo = {Rational(0)};
  charts[0].hi = {Rational(1)};
  const Groupoid cover = Groupoid::cover(t1, charts);
  GerbeData data;
  data.h = CochainFunction::constant_one(2);
  data.A = FormFamily(FormFamily::Keying::Cover, 1, 1, 1);
  data.B = FormFamily(FormFamily::Keying::Cover, 0, 2, 1);
  try {
    restrict_to_inertia(cover, tau2_build(data));
    FAIL("expected a backend rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::InvalidArgument);
  }
}

}  // namespace
