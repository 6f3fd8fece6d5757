// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <vector>

#include "doctest.h"
#include "holonomy/error.hpp"
#include "holonomy/rational.hpp"
#include "holonomy/scalar.hpp"
#include "holonomy/snf.hpp"

namespace {

using namespace holonomy;

TEST_CASE("rationals normalize and compare") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-5, 3) < Rational(-1, 3));
}

TEST_CASE("rational arithmetic stays exact") {
  const Rational a(1, 6);
  const Rational b(1, 10);
  CHECK(a + b == Rational(4, 15));
  CHECK(a - b == Rational(1, 15));
  CHECK(a * b == Rational(1, 60));
  CHECK(a / b == Rational(5, 3));
  CHECK((a + b) - b == a);
}

TEST_CASE("mod1 lands in the unit interval") {
  CHECK(Rational(7, 3).mod1() == Rational(1, 3));
  CHECK(Rational(-1, 3).mod1() == Rational(2, 3));
  CHECK(Rational(-2).mod1() == Rational(0));
  CHECK(Rational(1).mod1() == Rational(0));
}

TEST_CASE("rational parsing round-trips") {
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("5") == Rational(5));
  CHECK(Rational::parse("3/4").str() == "3/4");
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("a/b"), Error);
  CHECK_THROWS_AS(Rational::parse(""), Error);
}

TEST_CASE("exact phases multiply by adding turns") {
  const Scalar a = Scalar::exact_phase(Rational(1, 3));
  const Scalar b = Scalar::exact_phase(Rational(1, 6));
  const Scalar c = a * b;
  CHECK(c.is_exact());
  CHECK(c.phase().turns() == Rational(1, 2));
  CHECK(c.dist(Scalar::of({-1.0, 0.0})) < 1e-15);
  CHECK((a * a.inverse()).dist_one() == 0.0);
}

TEST_CASE("mixing exact and floating scalars drops exactness") {
  const Scalar a = Scalar::exact_phase(Rational(1, 4));
  const Scalar b = Scalar::of(std::complex<double>(0.0, 1.0));
  CHECK(a.is_exact());
  CHECK_FALSE((a * b).is_exact());
  CHECK((a * b).dist(Scalar::of({-1.0, 0.0})) < 1e-15);
}

// Oracle: hand-reduced normal forms.
//   [[2,0],[0,3]]   -> diag (1, 6)   (gcd spreading)
//   [[2,4],[4,8]]   -> diag (2, 0)   (rank 1)
//   [[0,1],[1,0]]   -> diag (1, 1)
TEST_CASE("smith normal form matches hand-reduced matrices") {
  SmithOptions opt;
  opt.track_U = true;
  opt.track_V = true;

  {
    const SmithResult r =
        smith_normal_form({{BigInt(2), BigInt(0)}, {BigInt(0), BigInt(3)}},
                          opt);
    REQUIRE(r.diag.size() == 2);
    CHECK(r.diag[0] == 1);
    CHECK(r.diag[1] == 6);
    CHECK(r.rank == 2);
  }
  {
    const SmithResult r =
        smith_normal_form({{BigInt(2), BigInt(4)}, {BigInt(4), BigInt(8)}},
                          opt);
    CHECK(r.diag[0] == 2);
    CHECK(r.diag[1] == 0);
    CHECK(r.rank == 1);
  }
  {
    const SmithResult r =
        smith_normal_form({{BigInt(0), BigInt(1)}, {BigInt(1), BigInt(0)}},
                          opt);
    CHECK(r.diag[0] == 1);
    CHECK(r.diag[1] == 1);
  }
}

TEST_CASE("smith transforms satisfy U A V = S") {
  const IntMat a = {{BigInt(6), BigInt(4), BigInt(2)},
                    {BigInt(2), BigInt(8), BigInt(4)}};
  SmithOptions opt;
  opt.track_U = true;
  opt.track_V = true;
  opt.track_Uinv = true;
  opt.track_Vinv = true;
  const SmithResult r = smith_normal_form(a, opt);

  const IntMat uav = mat_mul(mat_mul(r.U, a), r.V);
  for (std::size_t i = 0; i < uav.size(); ++i) {
    for (std::size_t j = 0; j < uav[i].size(); ++j) {
      const BigInt expect = i == j && i < r.diag.size() ? r.diag[i] : 0;
      CHECK(uav[i][j] == expect);
    }
  }
  for (std::size_t k = 0; k + 1 < r.rank; ++k) {
    CHECK(r.diag[k + 1] % r.diag[k] == 0);
  }

  const IntMat uu = mat_mul(r.U, r.Uinv);
  const IntMat vv = mat_mul(r.V, r.Vinv);
  for (std::size_t i = 0; i < uu.size(); ++i) {
    for (std::size_t j = 0; j < uu[i].size(); ++j) {
      CHECK(uu[i][j] == (i == j ? 1 : 0));
    }
  }
  for (std::size_t i = 0; i < vv.size(); ++i) {
    for (std::size_t j = 0; j < vv[i].size(); ++j) {
      CHECK(vv[i][j] == (i == j ? 1 : 0));
    }
  }
}

TEST_CASE("row lattice accumulator finds the pivot basis") {
  RowLatticeAccumulator acc(3);
  acc.add_row({BigInt(2), BigInt(0), BigInt(0)});
  acc.add_row({BigInt(4), BigInt(0), BigInt(0)});  // dependent
  acc.add_row({BigInt(0), BigInt(0), BigInt(5)});
  acc.add_row({BigInt(2), BigInt(0), BigInt(5)});  // dependent
  const IntMat basis = acc.basis();
  REQUIRE(basis.size() == 2);
  CHECK(basis[0][0] != 0);
  CHECK(basis[1][2] != 0);
}

}  // namespace
