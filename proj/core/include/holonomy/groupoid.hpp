// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/group.hpp"
#include "holonomy/space.hpp"

namespace holonomy {

/// Arrow of a finite-model groupoid. For quotient groupoids it is the pair
/// (source point, group element); for cover groupoids it is (point, i, j)
/// with the same underlying point read in chart i (source) and chart j
/// (target).
struct Arrow {
  Point src;
  GroupElement g = 0;
  std::uint32_t chart_from = 0;
  std::uint32_t chart_to = 0;
};

/// Chart domain: a box in universal-cover coordinates with rational corners.
/// On a torus, membership means the point has an integer translate inside the
/// box; widths of at least 1 cover the full circle in that coordinate.
struct Chart {
  std::vector<Rational> lo;
  std::vector<Rational> hi;
};

/// Composable arrow tuple of the nerve at level k. For quotient groupoids it
/// is the source point of the first arrow plus the k group elements; the
/// tuple stands for arrows (x, g1), (x.g1, g2), ..., anchored at their
/// running source points, and charts stays empty. For cover groupoids it is
/// the common point plus the chart chain (i0, ..., ik) and elems stays empty.
struct NerveTuple {
  Point base;
  std::vector<GroupElement> elems;
  std::vector<std::uint32_t> charts;
};

/// Affine subtorus offset + basis: { offset + sum u_i basis_i } mod Z^d.
/// A zero-dimensional component is a single rational point.
struct FixedComponent {
  std::vector<Rational> offset;
  std::vector<std::vector<std::int64_t>> basis;

  std::size_t dim() const { return basis.size(); }
};

/// Objects of the loop groupoid of constant loops: arrows v with s(v) = t(v),
/// together with the conjugation arrows (v, a) -> a^-1 v a.
struct InertiaGroupoid {
  // Finite point-set backend: all (point index, g) with x.g = x, ordered by
  // (g, point).
  std::vector<std::pair<std::size_t, GroupElement>> objects;
  // Flat torus backend: fixed[g] lists the components of Fix(g).
  std::vector<std::vector<FixedComponent>> fixed;
};

/// Finite-model orbifold groupoid: either a translation (quotient) groupoid
/// M x G over a finite point set or flat torus, or a cover groupoid given by
/// charts of a global space.
class Groupoid {
 public:
  enum class Kind { Action, Cover };
  static constexpr std::size_t kNerveCap = 10'000'000;

  static Groupoid quotient(SpaceModel space, FiniteGroup group,
                           AffineAction action);
  static Groupoid cover(SpaceModel space, std::vector<Chart> charts);

  Kind kind() const { return kind_; }
  const SpaceModel& space() const { return space_; }
  const FiniteGroup& group() const;
  const AffineAction& action() const;
  const std::vector<Chart>& charts() const { return charts_; }

  bool chart_contains(std::uint32_t chart, const Point& x, double eps = 1e-9)
      const;

  Point source(const Arrow& a) const;
  Point target(const Arrow& a) const;
  Arrow unit(const Point& x, std::uint32_t chart = 0) const;
  bool is_unit(const Arrow& a, double eps = 1e-9) const;

  /// Composes a then b; throws Errc::NotComposable unless t(a) = s(b) within
  /// eps (exact for finite point sets).
  Arrow compose(const Arrow& a, const Arrow& b, double eps = 1e-9) const;
  Arrow inverse(const Arrow& a) const;

  /// Pushforward of a base tangent vector along an arrow (the etale
  /// identification of source and target tangent spaces).
  std::vector<double> push(const Arrow& a, const std::vector<double>& v) const;

  /// All composable k-tuples over a finite point set, lexicographic in
  /// (point, g1, ..., gk). Level counts: |M| * |G|^k entries. Throws
  /// Errc::InfiniteNerve over continuous bases and Errc::LevelTooLarge when
  /// the count would exceed kNerveCap.
  std::vector<NerveTuple> enumerate_nerve(std::size_t k) const;

  /// Inertia groupoid: constant loops. Finite backend enumerates objects;
  /// torus backend solves (R_g - I) x = -t_g mod Z^d exactly into affine
  /// subtorus components.
  InertiaGroupoid inertia() const;

 private:
  Kind kind_ = Kind::Action;
  SpaceModel space_;
  std::optional<FiniteGroup> group_;
  std::optional<AffineAction> action_;
  std::vector<Chart> charts_;
};

/// Conjugation target of an inertia object: (v, a) -> a^-1 v a, for quotient
/// groupoids. v = (x, g) with x.g = x and a = (x, h) gives (x.h, h^-1 g h).
std::pair<Point, GroupElement> inertia_conjugate(const Groupoid& gpd,
                                                 const Point& x, GroupElement g,
                                                 GroupElement h);

}  // namespace holonomy
