// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <vector>

#include "doctest.h"
#include "holonomy/error.hpp"
#include "holonomy/group.hpp"

namespace {

using namespace holonomy;

std::size_t order_of(const FiniteGroup& g, GroupElement a) {
  std::size_t n = 1;
  GroupElement p = a;
  while (p != g.identity()) {
    p = g.mul(p, a);
    ++n;
  }
  return n;
}

std::size_t center_size(const FiniteGroup& g) {
  std::size_t n = 0;
  for (GroupElement a = 0; a < g.order(); ++a) {
    bool central = true;
    for (GroupElement b = 0; b < g.order(); ++b) {
      if (g.mul(a, b) != g.mul(b, a)) {
        central = false;
        break;
      }
    }
    if (central) ++n;
  }
  return n;
}

TEST_CASE("spec parsing builds the documented groups") {
  CHECK(FiniteGroup::parse("Z/1").order() == 1);
  CHECK(FiniteGroup::parse("Z/6").order() == 6);
  CHECK(FiniteGroup::parse("Z/2xZ/3").order() == 6);
  CHECK(FiniteGroup::parse("Z/2xZ/2xZ/2").order() == 8);
  CHECK(FiniteGroup::parse("S3").order() == 6);
  CHECK(FiniteGroup::parse("D4").order() == 8);
  CHECK(FiniteGroup::parse("Q8").order() == 8);
}

TEST_CASE("spec parsing rejects malformed input") {
  CHECK_THROWS_AS(FiniteGroup::parse(""), Error);
  CHECK_THROWS_AS(FiniteGroup::parse("Z/"), Error);
  CHECK_THROWS_AS(FiniteGroup::parse("Z/0"), Error);
  CHECK_THROWS_AS(FiniteGroup::parse("Z/2x"), Error);
  CHECK_THROWS_AS(FiniteGroup::parse("K4"), Error);
  CHECK_THROWS_AS(FiniteGroup::parse("Z/2 x Z/2"), Error);
}

TEST_CASE("cyclic groups have one generator order") {
  const FiniteGroup g = FiniteGroup::cyclic(6);
  CHECK(g.exponent() == 6);
  CHECK(g.is_abelian());
  std::multiset<std::size_t> orders;
  for (GroupElement a = 0; a < g.order(); ++a) orders.insert(order_of(g, a));
  CHECK(orders == std::multiset<std::size_t>{1, 2, 3, 3, 6, 6});
}

TEST_CASE("products multiply orders and lcm exponents") {
  const FiniteGroup g = FiniteGroup::parse("Z/2xZ/4");
  CHECK(g.order() == 8);
  CHECK(g.exponent() == 4);
  CHECK(g.is_abelian());
  const FiniteGroup h = FiniteGroup::parse("Z/2xZ/3");
  CHECK(h.exponent() == 6);
}

TEST_CASE("symmetric group on three letters has the right shape") {
  const FiniteGroup g = FiniteGroup::symmetric3();
  CHECK_FALSE(g.is_abelian());
  CHECK(g.exponent() == 6);
  CHECK(center_size(g) == 1);
  // Element orders: identity, three transpositions, two 3-cycles.
  std::multiset<std::size_t> orders;
  for (GroupElement a = 0; a < g.order(); ++a) orders.insert(order_of(g, a));
  CHECK(orders == std::multiset<std::size_t>{1, 2, 2, 2, 3, 3});
}

TEST_CASE("dihedral and quaternion groups of order eight differ") {
  const FiniteGroup d4 = FiniteGroup::dihedral4();
  const FiniteGroup q8 = FiniteGroup::quaternion8();
  CHECK(center_size(d4) == 2);
  CHECK(center_size(q8) == 2);

  // D4 has five involutions, Q8 exactly one; this separates the two groups.
  const auto involutions = [&](const FiniteGroup& g) {
    std::size_t n = 0;
    for (GroupElement a = 0; a < g.order(); ++a) {
      if (a != g.identity() && g.mul(a, a) == g.identity()) ++n;
    }
    return n;
  };
  CHECK(involutions(d4) == 5);
  CHECK(involutions(q8) == 1);
}

TEST_CASE("group laws hold on every builtin table") {
  for (const char* spec : {"Z/4", "Z/2xZ/2", "S3", "D4", "Q8"}) {
    const FiniteGroup g = FiniteGroup::parse(spec);
    CAPTURE(spec);
    for (GroupElement a = 0; a < g.order(); ++a) {
      CHECK(g.mul(a, g.identity()) == a);
      CHECK(g.mul(g.identity(), a) == a);
      CHECK(g.mul(a, g.inv(a)) == g.identity());
      for (GroupElement b = 0; b < g.order(); ++b) {
        for (GroupElement c = 0; c < g.order(); ++c) {
          CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
        }
      }
    }
  }
}

TEST_CASE("conjugation is an action by automorphisms") {
  const FiniteGroup g = FiniteGroup::dihedral4();
  for (GroupElement v = 0; v < g.order(); ++v) {
    for (GroupElement w = 0; w < g.order(); ++w) {
      for (GroupElement a = 0; a < g.order(); ++a) {
        CHECK(g.conj(g.mul(v, w), a) == g.mul(g.conj(v, a), g.conj(w, a)));
      }
    }
  }
}

TEST_CASE("construction rejects broken tables") {
  // Left multiplication by 1 is not a bijection.
  std::vector<std::vector<GroupElement>> bad{{0, 1}, {1, 1}};
  CHECK_THROWS_AS(FiniteGroup(std::move(bad), {"e", "a"}, "bad"), Error);
}

}  // namespace
