// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holonomy/error.hpp"
#include "holonomy/group.hpp"
#include "holonomy/rational.hpp"

namespace holonomy {

/// Base spaces supported by the finite models: a finite point set (discrete
/// backend) or a flat torus R^d / Z^d with coordinates reduced into [0, 1).
struct SpaceModel {
  enum class Kind { FinitePointSet, FlatTorus };

  Kind kind = Kind::FinitePointSet;
  std::size_t point_count = 1;  // FinitePointSet
  std::size_t dim = 0;          // FlatTorus

  static SpaceModel points(std::size_t count) {
    SpaceModel s;
    s.kind = Kind::FinitePointSet;
    s.point_count = count;
    s.dim = 0;
    return s;
  }
  static SpaceModel torus(std::size_t dim) {
    SpaceModel s;
    s.kind = Kind::FlatTorus;
    s.dim = dim;
    s.point_count = 0;
    return s;
  }

  bool operator==(const SpaceModel& o) const = default;
};

/// Point of a SpaceModel: an index for finite point sets, a coordinate vector
/// (componentwise in [0, 1)) for flat tori.
struct Point {
  std::size_t index = 0;
  std::vector<double> coords;

  static Point at(std::size_t i) {
    Point p;
    p.index = i;
    return p;
  }
  static Point at(std::vector<double> x);
};

/// Reduces v into [0, 1) with tolerance snapping: values within eps of an
/// integer reduce to exactly 0.
double mod1(double v, double eps = 1e-12);

std::vector<double> mod1(std::vector<double> x, double eps = 1e-12);

/// Distance on the torus (componentwise shortest arc) or discrete metric on
/// point sets.
double point_dist(const SpaceModel& space, const Point& a, const Point& b);

/// Affine self-map of a flat torus: x -> R x + t with integer linear part R
/// and rational translation t, acting modulo Z^d.
struct AffineMap {
  std::vector<std::vector<std::int64_t>> linear;  // d x d
  std::vector<Rational> translation;              // d

  static AffineMap identity(std::size_t d);
  std::size_t dim() const { return translation.size(); }

  std::vector<double> apply(const std::vector<double>& x) const;
  std::vector<Rational> apply(const std::vector<Rational>& x) const;

  /// R x + t without the mod-1 reduction; continuous in x, for transporting
  /// paths through the universal cover.
  std::vector<double> apply_unreduced(const std::vector<double>& x) const;

  AffineMap compose_after(const AffineMap& first) const;

  /// Pushforward of a tangent vector (the constant linear part).
  std::vector<double> push(const std::vector<double>& v) const;
};

/// Right action of a finite group on a SpaceModel: permutations for finite
/// point sets, unimodular affine maps for flat tori. Construction validates
/// compatibility (x.g).h = x.(g h) exactly and throws Errc::ActionNotCompatible
/// on failure; non-unimodular linear parts throw Errc::NonInvertibleLinearPart.
class AffineAction {
 public:
  /// Trivial action on any space.
  AffineAction(SpaceModel space, const FiniteGroup& group);
  /// Permutation action on a finite point set; perms[g][i] is i.g.
  AffineAction(SpaceModel space, const FiniteGroup& group,
               std::vector<std::vector<std::uint32_t>> perms);
  /// Affine action on a flat torus; maps[g] is x -> x.g.
  AffineAction(SpaceModel space, const FiniteGroup& group,
               std::vector<AffineMap> maps);

  const SpaceModel& space() const { return space_; }
  std::size_t group_order() const { return group_order_; }

  Point act(const Point& x, GroupElement g) const;
  const AffineMap& map(GroupElement g) const;
  std::uint32_t perm(GroupElement g, std::size_t i) const;

  /// Pushforward of a tangent vector along the action of g (identity for
  /// finite point sets).
  std::vector<double> push(const std::vector<double>& v, GroupElement g) const;

 private:
  void validate(const FiniteGroup& group);

  SpaceModel space_;
  std::size_t group_order_;
  std::vector<std::vector<std::uint32_t>> perms_;
  std::vector<AffineMap> maps_;
};

}  // namespace holonomy
