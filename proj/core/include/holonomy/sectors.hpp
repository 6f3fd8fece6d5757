// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "holonomy/cochain.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/rational.hpp"
#include "holonomy/scalar.hpp"
#include "holonomy/transgression.hpp"

namespace holonomy {

/// Transgressed line bundle restricted to the inertia groupoid of a quotient
/// groupoid. Arrows of the inertia groupoid are pairs ((x, g), h) acting by
/// conjugation, (x, g) -> (x.h, h^-1 g h), and the gluing function is
///   f((x, g), h) = h2(x; g, h) / h2(x; h, h^-1 g h)
/// with h2 the captured level-2 transition function. The connection form of
/// the sector of g is the ambient A_g read on tangents to the fixed set.
class LocalSystem {
 public:
  LocalSystem(const Groupoid& gpd, GerbeData data);

  const GerbeData& data() const { return data_; }
  const InertiaGroupoid& inertia() const { return inertia_; }

  /// Gluing value on the inertia arrow ((x, g), h); exact for table-backed
  /// transition functions. Requires x.g = x.
  Scalar f(const Groupoid& gpd, const Point& x, GroupElement g,
           GroupElement h) const;

  /// Ambient connection 1-form of the g-sector (the zero form for flat
  /// data); flatness holds on tangents to the fixed set of g.
  PForm omega(GroupElement g) const;

  /// True when both connection families vanish identically.
  bool flat() const { return data_.A.is_zero() && data_.B.is_zero(); }

  /// Replaces one finite-backend gluing value; the point is given by index.
  /// Used to build negative controls for the axiom checks.
  void override_value(std::size_t point_index, GroupElement g, GroupElement h,
                      Scalar value);

 private:
  GerbeData data_;
  InertiaGroupoid inertia_;
  std::map<std::tuple<std::size_t, GroupElement, GroupElement>, Scalar>
      overrides_;
};

/// Restriction of a transgressed bundle to constant loops. The groupoid must
/// be a quotient groupoid (Errc::InvalidArgument otherwise).
LocalSystem restrict_to_inertia(const Groupoid& gpd,
                                const TransgressedBundle& b);

/// Verifies the inner-local-system axioms:
///   (1) units: f((x, e), h) equals u(x) / u(x.h) with u(x) = h2(x; e, e),
///       so the restriction to unit objects is a coboundary,
///   (2) inverses: f(v, a) . f(i(v, a)) = 1 for the conjugation inverse
///       i((x, g), h) = ((x.h, h^-1 g h), h^-1),
///   (3) morphism: f((x, g), h1 h2) = f((x, g), h1) . f((x.h1, h^-1 g h1
///       with h = h1), h2),
///   (4) flatness: d(A_g) and t*B - s*B vanish on tangent pairs to the
///       fixed set of g (torus backends; finite backends carry no forms).
/// Finite backends run exhaustively and exactly; torus backends sample
/// opt.samples points per fixed component with the seeded generator.
VerifyReport check_inner_local_system(const Groupoid& gpd,
                                      const LocalSystem& ls,
                                      const VerifyOptions& opt = {});

/// Group 2-cocycle with values in roots of unity, stored as exact angles in
/// turns. Construction normalizes (dividing by the constant eps(e, e), a
/// coboundary shift) and validates the cocycle identity
///   eps(b, c) - eps(ab, c) + eps(a, bc) - eps(a, b) = 0 (angles mod 1)
/// exhaustively; Errc::InvalidArgument on failure.
class TorsionCocycle {
 public:
  /// angles[a][b] is the angle of eps(a, b) in turns.
  static TorsionCocycle from_angles(const FiniteGroup& g,
                                    std::vector<std::vector<Rational>> angles,
                                    std::string class_id = "");

  static TorsionCocycle trivial(const FiniteGroup& g);

  const FiniteGroup& group() const { return group_; }
  const std::string& class_id() const { return class_id_; }

  const Rational& angle(GroupElement a, GroupElement b) const {
    return angles_[a][b];
  }
  Scalar eval(GroupElement a, GroupElement b) const {
    return Scalar::exact_phase(angles_[a][b]);
  }

  /// True when every value is 1.
  bool is_trivial() const;

 private:
  TorsionCocycle(FiniteGroup g, std::vector<std::vector<Rational>> angles,
                 std::string class_id);

  FiniteGroup group_;
  std::vector<std::vector<Rational>> angles_;
  std::string class_id_;
};

/// Classification of the group H^2(G, C^x): invariant factors (ascending
/// divisibility, trivial factors dropped) and one representative cocycle per
/// factor, of exactly that order modulo coboundaries.
struct SchurData {
  std::vector<std::uint64_t> invariant_factors;
  std::vector<TorsionCocycle> representatives;
};

/// Computes H^2(G, C^x) as H^2(G, Q/Z) from the normalized bar complex:
/// classes are represented by cocycles with values in (1/m)Z/Z, m = |G|,
/// the cocycle lattice is cut out by the level-3 coboundary constraints
/// modulo m, and the quotient by coboundaries plus integer shifts is read
/// off a Smith normal form. Exact integer arithmetic throughout. Throws
/// Errc::GroupTooLarge above the cap.
SchurData h2_finite_group(const FiniteGroup& g, std::size_t cap = 64);

/// Flat gerbe of a group cocycle on a quotient groupoid:
/// h(x; g1, g2) = eps(g1, g2), A = 0, B = 0. Passes the gerbe cocycle
/// verification exactly; its transgressed transition function is
/// F = eps(g, k) / eps(k, k^-1 g k) on one-segment loops and the connection
/// vanishes. The cocycle's group must match the groupoid's
/// (Errc::DomainMismatch).
GerbeData torsion_gerbe(const Groupoid& gpd, const TorsionCocycle& eps);

/// One twisted sector: a conjugacy class representative g, its class and
/// centralizer, the fixed set of g, and, when a bundle is supplied, the
/// gluing values f((x, g), h) indexed by fixed object and centralizer
/// element (the equivariant line-bundle data of the sector).
struct Sector {
  GroupElement rep = 0;
  std::vector<GroupElement> class_members;
  std::vector<GroupElement> centralizer;
  std::vector<std::size_t> fixed_points;      // finite point-set backend
  std::vector<FixedComponent> components;     // flat torus backend
  std::vector<std::vector<Scalar>> values;    // [fixed object][centralizer]
};

struct SectorDecomposition {
  std::vector<Sector> sectors;
};

/// Decomposes the inertia of a quotient groupoid into twisted sectors, one
/// per conjugacy class. With a bundle, each sector carries its restricted
/// gluing values; finite backends tabulate every fixed point, torus
/// backends tabulate one value row per fixed component (at its offset
/// point).
SectorDecomposition sector_decomposition(
    const Groupoid& gpd, const TransgressedBundle* bundle = nullptr);

}  // namespace holonomy
