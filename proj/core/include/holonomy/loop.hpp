// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "holonomy/expr.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/pform.hpp"
#include "holonomy/rational.hpp"

namespace holonomy {

/// Breakpoints 0 = a_0 < a_1 < ... < a_n = 1 cutting the circle into n
/// closed segments I_i = [a_{i-1}, a_i].
class Partition {
 public:
  /// Validates fixed endpoints and strict monotonicity; throws
  /// Errc::BadPartition otherwise. Needs at least one segment.
  explicit Partition(std::vector<Rational> points);

  std::size_t segments() const { return points_.size() - 1; }
  const Rational& point(std::size_t i) const { return points_[i]; }
  double value(std::size_t i) const { return points_[i].to_double(); }
  const std::vector<Rational>& points() const { return points_; }

  bool operator==(const Partition& o) const;

  /// New partition with the interior cuts inserted. Throws
  /// Errc::DuplicateBreakpoint when a cut coincides with an existing
  /// breakpoint and Errc::BadPartition when a cut lies outside (0, 1).
  Partition refined(const std::vector<Rational>& cuts) const;

 private:
  std::vector<Rational> points_;
};

/// One segment psi_i : [a_{i-1}, a_i] -> G_0 of a segmented loop, carried in
/// universal-cover coordinates on torus models so that winding paths stay
/// continuous. Over a CoverGroupoid the segment is annotated with the chart
/// that contains its image.
class PathSegment {
 public:
  enum class Carrier { Parametric, Polyline, ConstantPoint };

  /// Coordinate expressions in the symbol t, one per space dimension.
  /// Expressions must depend on t only and evaluate finitely on the closed
  /// domain; throws Errc::InvalidArgument otherwise.
  static PathSegment parametric(const Rational& lo, const Rational& hi,
                                std::vector<Expr> coords);

  /// Piecewise-linear samples (t_j, x_j) with strictly increasing t covering
  /// the closed domain within 1e-9. Evaluation interpolates linearly.
  static PathSegment polyline(
      const Rational& lo, const Rational& hi,
      std::vector<std::pair<double, std::vector<double>>> samples);

  /// Constant segment at a point; the only continuous choice over finite
  /// point sets.
  static PathSegment constant(const Rational& lo, const Rational& hi, Point p);

  /// Copy annotated with the containing chart id (cover groupoids).
  PathSegment with_chart(std::uint32_t chart) const;

  Carrier carrier() const { return carrier_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  double t0() const { return lo_.to_double(); }
  double t1() const { return hi_.to_double(); }
  std::optional<std::uint32_t> chart() const { return chart_; }

  /// Coordinate dimension (0 over finite point sets).
  std::size_t dim() const;

  /// Universal-cover coordinates at parameter t (clamped into the closed
  /// domain within 1e-9; outside throws Errc::DomainMismatch).
  std::vector<double> at(double t) const;

  /// Canonical groupoid point at t: coordinates reduced into [0,1)^d for
  /// tori, the stored point for finite point sets.
  Point point_at(const SpaceModel& space, double t) const;

  /// Velocity dpsi/dt: exact expression derivative (Parametric), interval
  /// slope (Polyline), zero (ConstantPoint).
  std::vector<double> velocity(double t) const;

  /// Parametric coordinate expressions; throws Errc::InvalidArgument for the
  /// other carriers.
  const std::vector<Expr>& exprs() const;

  /// The two pieces of this segment split at an interior parameter.
  std::pair<PathSegment, PathSegment> split_at(const Rational& cut) const;

 private:
  PathSegment() = default;

  Carrier carrier_ = Carrier::ConstantPoint;
  Rational lo_{0, 1};
  Rational hi_{1, 1};
  std::optional<std::uint32_t> chart_;
  std::vector<Expr> coords_;
  std::vector<Expr> velocity_exprs_;
  std::vector<std::pair<double, std::vector<double>>> samples_;
  Point point_;
};

/// Object of the loop groupoid in the segmented presentation: segments
/// psi_i glued by connecting arrows. Arrow i (0-based) sits at breakpoint
/// a_{i+1} and runs forward from the end of segment i to the start of
/// segment i+1; the last one wraps around to the start of segment 0. For a
/// one-segment quotient-groupoid loop the wrap arrow is (phi(1), g) with
/// phi(1).g = phi(0), and g is called the loop's group label.
class SegmentedLoop {
 public:
  const Partition& partition() const { return partition_; }
  std::size_t size() const { return segments_.size(); }
  const PathSegment& segment(std::size_t i) const { return segments_[i]; }
  const Arrow& connecting_arrow(std::size_t i) const { return arrows_[i]; }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  friend SegmentedLoop build_loop(const Groupoid& gpd, Partition partition,
                                  std::vector<PathSegment> segments,
                                  std::vector<Arrow> arrows);

 private:
  SegmentedLoop(Partition partition, std::vector<PathSegment> segments,
                std::vector<Arrow> arrows);

  Partition partition_;
  std::vector<PathSegment> segments_;
  std::vector<Arrow> arrows_;
};

/// Validates and assembles a segmented loop: counts match the partition,
/// segment domains equal the partition intervals, cover segments carry
/// in-range charts containing their image, and every connecting arrow's
/// source and target meet the adjacent segment endpoints within 1e-10
/// (cyclically). Throws Errc::EndpointMismatch with the arrow index and
/// distance, Errc::BadPartition on domain mismatches, Errc::InvalidArgument
/// on count mismatches, Errc::DomainMismatch on chart violations.
SegmentedLoop build_loop(const Groupoid& gpd, Partition partition,
                         std::vector<PathSegment> segments,
                         std::vector<Arrow> arrows);

/// Convenience wrapper over quotient groupoids: one segment phi on [0, 1]
/// with wrap arrow (phi(1), g).
SegmentedLoop build_one_segment_loop(const Groupoid& gpd, PathSegment phi,
                                     GroupElement g);

/// Arrow of the loop groupoid between two loops over the same partition. In
/// a quotient groupoid it stores one constant group element per segment
/// (continuity into a discrete group forces constancy), and the arrow path
/// is Lambda_i(t) = (psi_i(t), k_i). In a cover groupoid the arrow path is
/// (psi_i(t), chart of psi_i, chart of phi_i) over the shared underlying
/// path.
class LoopArrow {
 public:
  const SegmentedLoop& source() const { return source_; }
  const SegmentedLoop& target() const { return target_; }
  std::size_t size() const { return source_.size(); }

  /// Constant group element of segment i (quotient groupoids; identity for
  /// covers).
  GroupElement elem(std::size_t i) const;

  /// The arrow Lambda_i(t) of the groupoid.
  Arrow at(const Groupoid& gpd, std::size_t i, double t) const;

  friend LoopArrow build_loop_arrow(const Groupoid& gpd, SegmentedLoop source,
                                    SegmentedLoop target,
                                    std::vector<GroupElement> elems);

 private:
  LoopArrow(SegmentedLoop source, SegmentedLoop target,
            std::vector<GroupElement> elems);

  SegmentedLoop source_;
  SegmentedLoop target_;
  std::vector<GroupElement> elems_;
};

/// Validates and assembles a loop arrow. Checks: equal partitions
/// (Errc::PartitionMismatch); in quotient groupoids the pointwise relation
/// phi_i(t) = psi_i(t).k_i on sampled t and the compatibility
/// Lambda_i(a_i) . phi(a_i) = psi(a_i) . Lambda_{i+1}(a_i) at every
/// breakpoint, cyclically (Errc::NotComposable); in cover groupoids the
/// shared underlying path and chart containment (elems must be empty).
LoopArrow build_loop_arrow(const Groupoid& gpd, SegmentedLoop source,
                           SegmentedLoop target,
                           std::vector<GroupElement> elems = {});

/// Identity loop arrow at a loop.
LoopArrow identity_loop_arrow(const Groupoid& gpd, const SegmentedLoop& loop);

/// Builds the loop arrow with the given per-segment elements from the source
/// alone: segment i of the target is segment i of the source pushed through
/// elems[i], and the target's connecting arrows are the conjugated ones
/// k_i^{-1} g_i k_{i+1}. Quotient groupoids only; elems.size() must equal
/// source.size().
LoopArrow transported_loop_arrow(const Groupoid& gpd,
                                 const SegmentedLoop& source,
                                 std::vector<GroupElement> elems);

/// Pointwise composition: per-segment elements multiply in quotient
/// groupoids. Requires target(a) = source(b) within tolerance
/// (Errc::NotComposable) and equal partitions (Errc::PartitionMismatch).
LoopArrow compose_loop_arrows(const Groupoid& gpd, const LoopArrow& a,
                              const LoopArrow& b);

/// Splits segments at the given interior breakpoints and inserts unit
/// connecting arrows there; the loop is unchanged as a loop.
SegmentedLoop refine_loop(const Groupoid& gpd, const SegmentedLoop& loop,
                          const std::vector<Rational>& cuts);

/// Vector field along a segmented loop: one field xi_i per segment, either
/// coordinate expressions in t or linearly interpolated samples. The value
/// at a breakpoint is identified with the tangent vector at the adjacent
/// connecting arrow's source (the etale identification).
class LoopTangent {
 public:
  /// Field of segment i at parameter t.
  std::vector<double> at(std::size_t i, double t) const;

  std::size_t size() const { return parametric_.size(); }

  /// Parametric field expressions of segment i; throws Errc::InvalidArgument
  /// for sampled fields.
  const std::vector<Expr>& exprs(std::size_t i) const;

  friend LoopTangent build_loop_tangent(
      const Groupoid& gpd, const SegmentedLoop& loop,
      std::vector<std::vector<Expr>> fields);
  friend LoopTangent build_loop_tangent(
      const Groupoid& gpd, const SegmentedLoop& loop,
      std::vector<std::vector<std::pair<double, std::vector<double>>>>
          samples);

 private:
  LoopTangent() = default;

  std::vector<std::vector<Expr>> parametric_;  // empty inner = sampled
  std::vector<std::vector<std::pair<double, std::vector<double>>>> samples_;
  std::vector<double> t0_, t1_;
};

/// Validates boundary compatibility: the field pushed through connecting
/// arrow i matches the next segment's start value within 1e-8, cyclically
/// (Errc::EndpointMismatch with index and distance). Over finite point sets
/// fields must be empty per segment.
LoopTangent build_loop_tangent(const Groupoid& gpd, const SegmentedLoop& loop,
                               std::vector<std::vector<Expr>> fields);
LoopTangent build_loop_tangent(
    const Groupoid& gpd, const SegmentedLoop& loop,
    std::vector<std::vector<std::pair<double, std::vector<double>>>> samples);

/// k-parameter family of loop arrows over a torus quotient groupoid:
/// source-segment coordinates are expressions in t and s1..sk, the
/// per-segment arrow elements are fixed, and the target loop is the source
/// moved by them. Slices at concrete parameter values are validated loop
/// arrows; partial derivatives at s = 0 realize tangent fields along the
/// base loops.
class LoopFamily {
 public:
  std::size_t params() const { return params_; }
  double eps() const { return eps_; }

  /// Loop arrow at parameter values s (|s_j| <= eps), fully validated.
  LoopArrow arrow_at(const Groupoid& gpd, const std::vector<double>& s) const;

  /// Base arrow at s = 0.
  LoopArrow base(const Groupoid& gpd) const;

  /// d/ds_j at s = 0 of the source (resp. target) loop, as a validated
  /// tangent field. j is 0-based.
  LoopTangent source_tangent(const Groupoid& gpd, std::size_t j) const;
  LoopTangent target_tangent(const Groupoid& gpd, std::size_t j) const;

  friend LoopFamily build_loop_family(const Groupoid& gpd, Partition partition,
                                      std::vector<std::vector<Expr>> coords,
                                      std::vector<GroupElement> loop_elems,
                                      std::vector<GroupElement> arrow_elems,
                                      std::size_t params, double eps);

 private:
  LoopFamily() = default;

  Partition partition_{{Rational(0, 1), Rational(1, 1)}};
  std::vector<std::vector<Expr>> coords_;
  std::vector<GroupElement> loop_elems_;
  std::vector<GroupElement> arrow_elems_;
  std::size_t params_ = 1;
  double eps_ = 1e-2;
};

/// Validates and assembles a family: coords are per-segment coordinate
/// expressions in t and s1..sk; loop_elems are the source loop's connecting
/// arrow elements (one per breakpoint); arrow_elems are the loop arrow's
/// per-segment elements. The base slice and the +/- eps axis slices are
/// validated eagerly.
LoopFamily build_loop_family(const Groupoid& gpd, Partition partition,
                             std::vector<std::vector<Expr>> coords,
                             std::vector<GroupElement> loop_elems,
                             std::vector<GroupElement> arrow_elems,
                             std::size_t params = 1, double eps = 1e-2);

/// Integral over the segment of the pullback of a degree-1 form, by
/// composite Simpson quadrature refined from 256 subintervals toward an
/// absolute target of 1e-9. Coefficients are evaluated at the segment's
/// universal-cover coordinates, so they must be periodic. Throws
/// Errc::InvalidArgument on degree mismatch, Errc::DomainMismatch on
/// dimension mismatch, Errc::QuadratureDiverged on non-finite samples.
std::complex<double> integrate_along(const PForm& w, const PathSegment& seg);

/// Integral of B(dpsi/dt, xi(t)) dt over segment i, same quadrature.
std::complex<double> integrate_along(const PForm& b, const PathSegment& seg,
                                     const LoopTangent& xi, std::size_t i);

}  // namespace holonomy
