// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/loop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "holonomy/error.hpp"
#include "holonomy/quadrature.hpp"

namespace holonomy {

namespace {

constexpr double kEndpointTol = 1e-10;
constexpr double kTangentTol = 1e-8;
constexpr double kPathTol = 1e-8;
constexpr double kDomainTol = 1e-9;

// Probe parameters covering a closed interval, ends included.
std::vector<double> probe_points(double a, double b, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    double u = static_cast<double>(j) / static_cast<double>(count - 1);
    out.push_back(a + (b - a) * u);
  }
  return out;
}

double euclid_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_real(const std::complex<double>& z, const std::string& what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    fail(Errc::InvalidArgument, what + " evaluates to a non-finite value");
  }
  if (std::abs(z.imag()) > 1e-9) {
    fail(Errc::InvalidArgument, what + " must be real-valued");
  }
}

}  // namespace

Partition::Partition(std::vector<Rational> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    fail(Errc::BadPartition, "a partition needs at least two breakpoints");
  }
  if (!(points_.front() == Rational(0))) {
    fail(Errc::BadPartition, "the first breakpoint must be 0");
  }
  if (!(points_.back() == Rational(1))) {
    fail(Errc::BadPartition, "the last breakpoint must be 1");
  }
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    if (!(points_[i] < points_[i + 1])) {
      fail(Errc::BadPartition,
           "breakpoints must be strictly increasing (position " +
               std::to_string(i + 1) + ")");
    }
  }
}

bool Partition::operator==(const Partition& o) const {
  if (points_.size() != o.points_.size()) return false;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i] == o.points_[i])) return false;
  }
  return true;
}

Partition Partition::refined(const std::vector<Rational>& cuts) const {
  std::vector<Rational> merged = points_;
  for (const Rational& c : cuts) {
    if (c <= Rational(0) || Rational(1) <= c) {
      fail(Errc::BadPartition, "refinement point " + c.str() +
                                   " lies outside (0, 1)");
    }
    for (const Rational& p : merged) {
      if (p == c) {
        fail(Errc::DuplicateBreakpoint,
             "refinement point " + c.str() + " is already a breakpoint");
      }
    }
    merged.push_back(c);
  }
  std::sort(merged.begin(), merged.end(),
            [](const Rational& a, const Rational& b) { return a < b; });
  return Partition(std::move(merged));
}

PathSegment PathSegment::parametric(const Rational& lo, const Rational& hi,
                                    std::vector<Expr> coords) {
  if (!(lo < hi)) {
    fail(Errc::BadPartition, "segment domain is empty");
  }
  if (coords.empty()) {
    fail(Errc::InvalidArgument, "a parametric segment needs coordinates");
  }
  for (const Expr& e : coords) {
    for (std::size_t k = 0; k < 8; ++k) {
      if (e.depends_on(Symbol::coord(k))) {
        fail(Errc::InvalidArgument,
             "segment coordinates may depend on t only (found x" +
                 std::to_string(k + 1) + ")");
      }
    }
    for (std::size_t k = 0; k < 4; ++k) {
      if (e.depends_on(Symbol::s(k))) {
        fail(Errc::InvalidArgument,
             "segment coordinates may depend on t only (found s" +
                 std::to_string(k + 1) + "); substitute family parameters "
                 "before building segments");
      }
    }
  }
  PathSegment seg;
  seg.carrier_ = Carrier::Parametric;
  seg.lo_ = lo;
  seg.hi_ = hi;
  seg.coords_ = std::move(coords);
  seg.velocity_exprs_.reserve(seg.coords_.size());
  for (const Expr& e : seg.coords_) {
    seg.velocity_exprs_.push_back(e.diff(Symbol::t()));
  }
  for (double t : probe_points(seg.t0(), seg.t1(), 5)) {
    EvalEnv env;
    env.set(Symbol::t(), t);
    for (const Expr& e : seg.coords_) {
      require_real(e.eval(env), "segment coordinate");
    }
  }
  return seg;
}

PathSegment PathSegment::polyline(
    const Rational& lo, const Rational& hi,
    std::vector<std::pair<double, std::vector<double>>> samples) {
  if (!(lo < hi)) {
    fail(Errc::BadPartition, "segment domain is empty");
  }
  if (samples.size() < 2) {
    fail(Errc::InvalidArgument, "a polyline segment needs two or more samples");
  }
  const std::size_t d = samples.front().second.size();
  if (d == 0) {
    fail(Errc::InvalidArgument, "polyline samples need coordinates");
  }
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (samples[j].second.size() != d) {
      fail(Errc::DomainMismatch, "polyline sample dimensions differ");
    }
    if (!std::isfinite(samples[j].first)) {
      fail(Errc::InvalidArgument, "polyline parameter is not finite");
    }
    for (double v : samples[j].second) {
      if (!std::isfinite(v)) {
        fail(Errc::InvalidArgument, "polyline coordinate is not finite");
      }
    }
    if (j > 0 && !(samples[j - 1].first < samples[j].first)) {
      fail(Errc::InvalidArgument, "polyline parameters must increase");
    }
  }
  if (std::abs(samples.front().first - lo.to_double()) > kDomainTol ||
      std::abs(samples.back().first - hi.to_double()) > kDomainTol) {
    fail(Errc::DomainMismatch, "polyline samples must cover the closed domain");
  }
  PathSegment seg;
  seg.carrier_ = Carrier::Polyline;
  seg.lo_ = lo;
  seg.hi_ = hi;
  seg.samples_ = std::move(samples);
  return seg;
}

PathSegment PathSegment::constant(const Rational& lo, const Rational& hi,
                                  Point p) {
  if (!(lo < hi)) {
    fail(Errc::BadPartition, "segment domain is empty");
  }
  PathSegment seg;
  seg.carrier_ = Carrier::ConstantPoint;
  seg.lo_ = lo;
  seg.hi_ = hi;
  seg.point_ = std::move(p);
  return seg;
}

PathSegment PathSegment::with_chart(std::uint32_t chart) const {
  PathSegment seg = *this;
  seg.chart_ = chart;
  return seg;
}

std::size_t PathSegment::dim() const {
  switch (carrier_) {
    case Carrier::Parametric:
      return coords_.size();
    case Carrier::Polyline:
      return samples_.front().second.size();
    case Carrier::ConstantPoint:
      return point_.coords.size();
  }
  return 0;
}

std::vector<double> PathSegment::at(double t) const {
  const double a = t0();
  const double b = t1();
  if (t < a - kDomainTol || t > b + kDomainTol) {
    fail(Errc::DomainMismatch, "parameter " + fmt(t) +
                                   " outside segment domain [" + fmt(a) + ", " +
                                   fmt(b) + "]");
  }
  t = std::clamp(t, a, b);
  switch (carrier_) {
    case Carrier::Parametric: {
      EvalEnv env;
      env.set(Symbol::t(), t);
      std::vector<double> x;
      x.reserve(coords_.size());
      for (const Expr& e : coords_) {
        x.push_back(e.eval(env).real());
      }
      return x;
    }
    case Carrier::Polyline: {
      auto it = std::lower_bound(
          samples_.begin(), samples_.end(), t,
          [](const auto& s, double v) { return s.first < v; });
      if (it == samples_.begin()) return it->second;
      if (it == samples_.end()) return samples_.back().second;
      const auto& right = *it;
      const auto& left = *(it - 1);
      const double u = (t - left.first) / (right.first - left.first);
      std::vector<double> x(left.second.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] = left.second[k] + u * (right.second[k] - left.second[k]);
      }
      return x;
    }
    case Carrier::ConstantPoint:
      return point_.coords;
  }
  return {};
}

Point PathSegment::point_at(const SpaceModel& space, double t) const {
  if (space.kind == SpaceModel::Kind::FinitePointSet) {
    if (carrier_ != Carrier::ConstantPoint) {
      fail(Errc::DomainMismatch,
           "finite point sets admit constant segments only");
    }
    return point_;
  }
  return Point::at(mod1(at(t)));
}

std::vector<double> PathSegment::velocity(double t) const {
  const double a = t0();
  const double b = t1();
  if (t < a - kDomainTol || t > b + kDomainTol) {
    fail(Errc::DomainMismatch, "parameter outside segment domain");
  }
  t = std::clamp(t, a, b);
  switch (carrier_) {
    case Carrier::Parametric: {
      EvalEnv env;
      env.set(Symbol::t(), t);
      std::vector<double> v;
      v.reserve(velocity_exprs_.size());
      for (const Expr& e : velocity_exprs_) {
        v.push_back(e.eval(env).real());
      }
      return v;
    }
    case Carrier::Polyline: {
      auto it = std::lower_bound(
          samples_.begin(), samples_.end(), t,
          [](const auto& s, double v) { return s.first < v; });
      if (it == samples_.begin()) ++it;
      if (it == samples_.end()) --it;
      const auto& right = *it;
      const auto& left = *(it - 1);
      std::vector<double> v(left.second.size());
      for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] = (right.second[k] - left.second[k]) / (right.first - left.first);
      }
      return v;
    }
    case Carrier::ConstantPoint:
      return std::vector<double>(point_.coords.size(), 0.0);
  }
  return {};
}

const std::vector<Expr>& PathSegment::exprs() const {
  if (carrier_ != Carrier::Parametric) {
    fail(Errc::InvalidArgument,
         "only parametric segments carry coordinate expressions");
  }
  return coords_;
}

std::pair<PathSegment, PathSegment> PathSegment::split_at(
    const Rational& cut) const {
  if (!(lo_ < cut) || !(cut < hi_)) {
    fail(Errc::BadPartition, "split point must be interior to the segment");
  }
  PathSegment left = *this;
  PathSegment right = *this;
  left.hi_ = cut;
  right.lo_ = cut;
  if (carrier_ == Carrier::Polyline) {
    const double c = cut.to_double();
    std::vector<double> mid = at(c);
    left.samples_.clear();
    right.samples_.clear();
    for (const auto& s : samples_) {
      if (s.first < c - kDomainTol) {
        left.samples_.push_back(s);
      } else if (s.first > c + kDomainTol) {
        right.samples_.push_back(s);
      }
    }
    left.samples_.push_back({c, mid});
    right.samples_.insert(right.samples_.begin(), {c, mid});
    if (left.samples_.size() < 2) {
      left.samples_.insert(left.samples_.begin(), {t0(), at(t0())});
    }
    if (right.samples_.size() < 2) {
      right.samples_.push_back({t1(), at(t1())});
    }
  }
  return {left, right};
}

SegmentedLoop::SegmentedLoop(Partition partition,
                             std::vector<PathSegment> segments,
                             std::vector<Arrow> arrows)
    : partition_(std::move(partition)),
      segments_(std::move(segments)),
      arrows_(std::move(arrows)) {}

SegmentedLoop build_loop(const Groupoid& gpd, Partition partition,
                         std::vector<PathSegment> segments,
                         std::vector<Arrow> arrows) {
  const std::size_t n = partition.segments();
  if (segments.size() != n) {
    fail(Errc::InvalidArgument,
         "segment count " + std::to_string(segments.size()) +
             " does not match the partition's " + std::to_string(n));
  }
  if (arrows.size() != n) {
    fail(Errc::InvalidArgument,
         "connecting arrow count " + std::to_string(arrows.size()) +
             " does not match the partition's " + std::to_string(n));
  }
  const SpaceModel& space = gpd.space();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(segments[i].lo() == partition.point(i)) ||
        !(segments[i].hi() == partition.point(i + 1))) {
      fail(Errc::BadPartition,
           "segment " + std::to_string(i) + " covers [" +
               segments[i].lo().str() + ", " + segments[i].hi().str() +
               "] instead of the partition interval [" +
               partition.point(i).str() + ", " + partition.point(i + 1).str() +
               "]");
    }
    if (space.kind == SpaceModel::Kind::FlatTorus &&
        segments[i].carrier() != PathSegment::Carrier::ConstantPoint &&
        segments[i].dim() != space.dim) {
      fail(Errc::DomainMismatch,
           "segment " + std::to_string(i) + " has dimension " +
               std::to_string(segments[i].dim()) + ", space has " +
               std::to_string(space.dim));
    }
  }
  if (gpd.kind() == Groupoid::Kind::Cover) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!segments[i].chart().has_value()) {
        fail(Errc::DomainMismatch, "segment " + std::to_string(i) +
                                       " of a cover-groupoid loop needs a "
                                       "chart annotation");
      }
      const std::uint32_t c = *segments[i].chart();
      if (c >= gpd.charts().size()) {
        fail(Errc::DomainMismatch,
             "segment " + std::to_string(i) + " chart id out of range");
      }
      for (double t : probe_points(segments[i].t0(), segments[i].t1(), 9)) {
        Point x = segments[i].point_at(space, t);
        if (!gpd.chart_contains(c, x)) {
          fail(Errc::DomainMismatch,
               "segment " + std::to_string(i) + " leaves chart " +
                   std::to_string(c) + " at t = " + fmt(t));
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    const Arrow& a = arrows[i];
    if (gpd.kind() == Groupoid::Kind::Action) {
      if (a.g >= gpd.group().order()) {
        fail(Errc::InvalidArgument, "connecting arrow " + std::to_string(i) +
                                        " element out of range");
      }
    } else {
      if (a.chart_from != *segments[i].chart() ||
          a.chart_to != *segments[next].chart()) {
        fail(Errc::DomainMismatch,
             "connecting arrow " + std::to_string(i) +
                 " chart pair does not match the adjacent segments");
      }
    }
    const Point seg_end =
        segments[i].point_at(space, segments[i].t1());
    const double src_dist = point_dist(space, gpd.source(a), seg_end);
    if (src_dist > kEndpointTol) {
      fail(Errc::EndpointMismatch,
           "connecting arrow " + std::to_string(i) + ": source is " +
               fmt(src_dist) + " away from the end of segment " +
               std::to_string(i));
    }
    const Point next_start =
        segments[next].point_at(space, segments[next].t0());
    const double tgt_dist = point_dist(space, gpd.target(a), next_start);
    if (tgt_dist > kEndpointTol) {
      fail(Errc::EndpointMismatch,
           "connecting arrow " + std::to_string(i) + ": target is " +
               fmt(tgt_dist) + " away from the start of segment " +
               std::to_string(next));
    }
  }
  return SegmentedLoop(std::move(partition), std::move(segments),
                       std::move(arrows));
}

SegmentedLoop build_one_segment_loop(const Groupoid& gpd, PathSegment phi,
                                     GroupElement g) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::InvalidArgument,
         "the one-segment wrapper applies to quotient groupoids");
  }
  Partition partition({Rational(0), Rational(1)});
  Arrow wrap;
  wrap.src = phi.point_at(gpd.space(), phi.t1());
  wrap.g = g;
  return build_loop(gpd, std::move(partition), {std::move(phi)}, {wrap});
}

LoopArrow::LoopArrow(SegmentedLoop source, SegmentedLoop target,
                     std::vector<GroupElement> elems)
    : source_(std::move(source)),
      target_(std::move(target)),
      elems_(std::move(elems)) {}

GroupElement LoopArrow::elem(std::size_t i) const {
  if (elems_.empty()) return 0;
  return elems_[i];
}

Arrow LoopArrow::at(const Groupoid& gpd, std::size_t i, double t) const {
  Arrow a;
  a.src = source_.segment(i).point_at(gpd.space(), t);
  if (gpd.kind() == Groupoid::Kind::Action) {
    a.g = elem(i);
  } else {
    a.chart_from = *source_.segment(i).chart();
    a.chart_to = *target_.segment(i).chart();
  }
  return a;
}

LoopArrow build_loop_arrow(const Groupoid& gpd, SegmentedLoop source,
                           SegmentedLoop target,
                           std::vector<GroupElement> elems) {
  if (!(source.partition() == target.partition())) {
    fail(Errc::PartitionMismatch,
         "source and target loops use different partitions");
  }
  const std::size_t n = source.size();
  const SpaceModel& space = gpd.space();
  if (gpd.kind() == Groupoid::Kind::Action) {
    if (elems.size() != n) {
      fail(Errc::InvalidArgument,
           "per-segment element count " + std::to_string(elems.size()) +
               " does not match the " + std::to_string(n) + " segments");
    }
    const FiniteGroup& grp = gpd.group();
    for (std::size_t i = 0; i < n; ++i) {
      if (elems[i] >= grp.order()) {
        fail(Errc::InvalidArgument,
             "segment " + std::to_string(i) + " element out of range");
      }
      const PathSegment& s = source.segment(i);
      const PathSegment& p = target.segment(i);
      for (double t : probe_points(s.t0(), s.t1(), 9)) {
        Point moved = gpd.action().act(s.point_at(space, t), elems[i]);
        double d = point_dist(space, p.point_at(space, t), moved);
        if (d > kPathTol) {
          fail(Errc::NotComposable,
               "segment " + std::to_string(i) +
                   ": the target path is not the source path moved by the "
                   "arrow element (distance " +
                   fmt(d) + " at t = " + fmt(t) + ")");
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t next = (i + 1) % n;
      const GroupElement lhs =
          grp.mul(elems[i], target.connecting_arrow(i).g);
      const GroupElement rhs =
          grp.mul(source.connecting_arrow(i).g, elems[next]);
      if (lhs != rhs) {
        fail(Errc::NotComposable,
             "compatibility fails at breakpoint " + std::to_string(i + 1) +
                 ": Lambda_i(a_i) . phi(a_i) != psi(a_i) . Lambda_{i+1}(a_i)");
      }
    }
  } else {
    if (!elems.empty()) {
      fail(Errc::InvalidArgument,
           "cover-groupoid loop arrows carry no group elements");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const PathSegment& s = source.segment(i);
      const PathSegment& p = target.segment(i);
      for (double t : probe_points(s.t0(), s.t1(), 9)) {
        double d =
            point_dist(space, p.point_at(space, t), s.point_at(space, t));
        if (d > kPathTol) {
          fail(Errc::NotComposable,
               "segment " + std::to_string(i) +
                   ": source and target loops of a cover-groupoid arrow must "
                   "share the underlying path (distance " +
                   fmt(d) + " at t = " + fmt(t) + ")");
        }
      }
    }
  }
  return LoopArrow(std::move(source), std::move(target), std::move(elems));
}

LoopArrow identity_loop_arrow(const Groupoid& gpd, const SegmentedLoop& loop) {
  std::vector<GroupElement> elems;
  if (gpd.kind() == Groupoid::Kind::Action) {
    elems.assign(loop.size(), gpd.group().identity());
  }
  return build_loop_arrow(gpd, loop, loop, std::move(elems));
}

namespace {

PathSegment transport_segment(const Groupoid& gpd, const PathSegment& seg,
                              GroupElement k) {
  switch (seg.carrier()) {
    case PathSegment::Carrier::ConstantPoint: {
      const Point p = seg.point_at(gpd.space(), seg.t0());
      return PathSegment::constant(seg.lo(), seg.hi(), gpd.action().act(p, k));
    }
    case PathSegment::Carrier::Parametric: {
      const AffineMap& m = gpd.action().map(k);
      const std::vector<Expr>& coords = seg.exprs();
      std::vector<Expr> out;
      for (std::size_t r = 0; r < coords.size(); ++r) {
        Expr c = Expr::constant(m.translation[r].to_double());
        for (std::size_t j = 0; j < coords.size(); ++j) {
          if (m.linear[r][j] == 0) continue;
          c = c +
              Expr::constant(static_cast<double>(m.linear[r][j])) * coords[j];
        }
        out.push_back(std::move(c));
      }
      return PathSegment::parametric(seg.lo(), seg.hi(), std::move(out));
    }
    case PathSegment::Carrier::Polyline:
    default: {
      const AffineMap& m = gpd.action().map(k);
      std::vector<std::pair<double, std::vector<double>>> samples;
      for (std::size_t j = 0; j <= 16; ++j) {
        const double t =
            seg.t0() + (seg.t1() - seg.t0()) * static_cast<double>(j) / 16.0;
        samples.emplace_back(t, m.apply_unreduced(seg.at(t)));
      }
      return PathSegment::polyline(seg.lo(), seg.hi(), std::move(samples));
    }
  }
}

}  // namespace

LoopArrow transported_loop_arrow(const Groupoid& gpd,
                                 const SegmentedLoop& source,
                                 std::vector<GroupElement> elems) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::InvalidArgument,
         "transported loop arrows need a quotient groupoid");
  }
  const std::size_t n = source.size();
  if (elems.size() != n) {
    fail(Errc::InvalidArgument,
         "expected one transport element per segment, got " +
             std::to_string(elems.size()) + " for " + std::to_string(n));
  }
  const FiniteGroup& grp = gpd.group();
  std::vector<PathSegment> segments;
  std::vector<Arrow> arrows;
  for (std::size_t i = 0; i < n; ++i) {
    segments.push_back(transport_segment(gpd, source.segment(i), elems[i]));
    Arrow a;
    a.src = segments.back().point_at(gpd.space(), segments.back().t1());
    a.g = grp.mul(grp.inv(elems[i]),
                  grp.mul(source.connecting_arrow(i).g, elems[(i + 1) % n]));
    arrows.push_back(a);
  }
  SegmentedLoop target = build_loop(gpd, source.partition(),
                                    std::move(segments), std::move(arrows));
  return build_loop_arrow(gpd, source, std::move(target), std::move(elems));
}

namespace {

bool same_loop(const Groupoid& gpd, const SegmentedLoop& a,
               const SegmentedLoop& b) {
  if (!(a.partition() == b.partition())) return false;
  const SpaceModel& space = gpd.space();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const PathSegment& sa = a.segment(i);
    const PathSegment& sb = b.segment(i);
    if (sa.chart() != sb.chart()) return false;
    for (double t : probe_points(sa.t0(), sa.t1(), 9)) {
      if (point_dist(space, sa.point_at(space, t), sb.point_at(space, t)) >
          kPathTol) {
        return false;
      }
    }
    const Arrow& aa = a.connecting_arrow(i);
    const Arrow& ab = b.connecting_arrow(i);
    if (aa.g != ab.g || aa.chart_from != ab.chart_from ||
        aa.chart_to != ab.chart_to) {
      return false;
    }
    if (point_dist(space, gpd.source(aa), gpd.source(ab)) > kPathTol) {
      return false;
    }
  }
  return true;
}

}  // namespace

LoopArrow compose_loop_arrows(const Groupoid& gpd, const LoopArrow& a,
                              const LoopArrow& b) {
  if (!(a.source().partition() == b.source().partition())) {
    fail(Errc::PartitionMismatch,
         "loop arrows use different partitions; refine first");
  }
  if (!same_loop(gpd, a.target(), b.source())) {
    fail(Errc::NotComposable,
         "the first arrow's target loop is not the second arrow's source");
  }
  std::vector<GroupElement> elems;
  if (gpd.kind() == Groupoid::Kind::Action) {
    elems.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      elems.push_back(gpd.group().mul(a.elem(i), b.elem(i)));
    }
  }
  return build_loop_arrow(gpd, a.source(), b.target(), std::move(elems));
}

SegmentedLoop refine_loop(const Groupoid& gpd, const SegmentedLoop& loop,
                          const std::vector<Rational>& cuts) {
  Partition refined = loop.partition().refined(cuts);
  std::vector<Rational> sorted = cuts;
  std::sort(sorted.begin(), sorted.end(),
            [](const Rational& x, const Rational& y) { return x < y; });
  for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
    if (sorted[j] == sorted[j + 1]) {
      fail(Errc::DuplicateBreakpoint,
           "refinement point " + sorted[j].str() + " repeats");
    }
  }
  std::vector<PathSegment> segments;
  std::vector<Arrow> arrows;
  std::size_t c = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    PathSegment rest = loop.segment(i);
    while (c < sorted.size() && sorted[c] < rest.hi()) {
      auto [left, right] = rest.split_at(sorted[c]);
      segments.push_back(left);
      Point x = left.point_at(gpd.space(), left.t1());
      arrows.push_back(gpd.unit(x, left.chart().value_or(0)));
      rest = right;
      ++c;
    }
    segments.push_back(rest);
    arrows.push_back(loop.connecting_arrow(i));
  }
  return build_loop(gpd, std::move(refined), std::move(segments),
                    std::move(arrows));
}

std::vector<double> LoopTangent::at(std::size_t i, double t) const {
  t = std::clamp(t, t0_[i], t1_[i]);
  if (!parametric_[i].empty()) {
    EvalEnv env;
    env.set(Symbol::t(), t);
    std::vector<double> v;
    v.reserve(parametric_[i].size());
    for (const Expr& e : parametric_[i]) {
      v.push_back(e.eval(env).real());
    }
    return v;
  }
  const auto& samples = samples_[i];
  if (samples.empty()) return {};
  auto it = std::lower_bound(samples.begin(), samples.end(), t,
                             [](const auto& s, double v) { return s.first < v; });
  if (it == samples.begin()) return it->second;
  if (it == samples.end()) return samples.back().second;
  const auto& right = *it;
  const auto& left = *(it - 1);
  const double u = (t - left.first) / (right.first - left.first);
  std::vector<double> v(left.second.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = left.second[k] + u * (right.second[k] - left.second[k]);
  }
  return v;
}

const std::vector<Expr>& LoopTangent::exprs(std::size_t i) const {
  if (parametric_[i].empty() && !samples_[i].empty()) {
    fail(Errc::InvalidArgument, "sampled tangent fields carry no expressions");
  }
  return parametric_[i];
}

namespace {

LoopTangent finish_tangent(const Groupoid& gpd, const SegmentedLoop& loop,
                           LoopTangent xi) {
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    const double t_end = loop.segment(i).t1();
    const double t_start = loop.segment(next).t0();
    std::vector<double> v = xi.at(i, t_end);
    std::vector<double> pushed = gpd.push(loop.connecting_arrow(i), v);
    std::vector<double> w = xi.at(next, t_start);
    if (pushed.size() != w.size()) {
      fail(Errc::DomainMismatch, "tangent field dimensions differ at breakpoint " +
                                     std::to_string(i + 1));
    }
    const double d = euclid_dist(pushed, w);
    if (d > kTangentTol) {
      fail(Errc::EndpointMismatch,
           "tangent field: pushing through connecting arrow " +
               std::to_string(i) + " misses the next segment's start by " +
               fmt(d));
    }
  }
  return xi;
}

}  // namespace

LoopTangent build_loop_tangent(const Groupoid& gpd, const SegmentedLoop& loop,
                               std::vector<std::vector<Expr>> fields) {
  if (fields.size() != loop.size()) {
    fail(Errc::InvalidArgument, "one tangent field per segment is required");
  }
  const std::size_t d =
      gpd.space().kind == SpaceModel::Kind::FlatTorus ? gpd.space().dim : 0;
  LoopTangent xi;
  xi.parametric_ = std::move(fields);
  xi.samples_.assign(loop.size(), {});
  for (std::size_t i = 0; i < loop.size(); ++i) {
    if (xi.parametric_[i].size() != d) {
      fail(Errc::DomainMismatch,
           "tangent field " + std::to_string(i) + " has " +
               std::to_string(xi.parametric_[i].size()) + " components, space "
               "has " + std::to_string(d));
    }
    xi.t0_.push_back(loop.segment(i).t0());
    xi.t1_.push_back(loop.segment(i).t1());
  }
  return finish_tangent(gpd, loop, std::move(xi));
}

LoopTangent build_loop_tangent(
    const Groupoid& gpd, const SegmentedLoop& loop,
    std::vector<std::vector<std::pair<double, std::vector<double>>>> samples) {
  if (samples.size() != loop.size()) {
    fail(Errc::InvalidArgument, "one tangent field per segment is required");
  }
  const std::size_t d =
      gpd.space().kind == SpaceModel::Kind::FlatTorus ? gpd.space().dim : 0;
  LoopTangent xi;
  xi.parametric_.assign(loop.size(), {});
  xi.samples_ = std::move(samples);
  for (std::size_t i = 0; i < loop.size(); ++i) {
    if (d == 0) {
      if (!xi.samples_[i].empty()) {
        fail(Errc::DomainMismatch,
             "finite point sets carry zero-dimensional tangents");
      }
    } else {
      if (xi.samples_[i].size() < 2) {
        fail(Errc::InvalidArgument,
             "sampled tangent fields need two or more samples");
      }
      for (const auto& s : xi.samples_[i]) {
        if (s.second.size() != d) {
          fail(Errc::DomainMismatch, "tangent sample dimension mismatch");
        }
      }
    }
    xi.t0_.push_back(loop.segment(i).t0());
    xi.t1_.push_back(loop.segment(i).t1());
  }
  return finish_tangent(gpd, loop, std::move(xi));
}

LoopArrow LoopFamily::arrow_at(const Groupoid& gpd,
                               const std::vector<double>& s) const {
  if (s.size() != params_) {
    fail(Errc::InvalidArgument,
         "expected " + std::to_string(params_) + " family parameters, got " +
             std::to_string(s.size()));
  }
  for (double v : s) {
    if (!std::isfinite(v) || std::abs(v) > eps_ + 1e-12) {
      fail(Errc::InvalidArgument,
           "family parameter " + fmt(v) + " outside [-eps, eps], eps = " +
               fmt(eps_));
    }
  }
  std::map<std::uint8_t, Expr> subst;
  for (std::size_t j = 0; j < params_; ++j) {
    subst.emplace(Symbol::s(j).id, Expr::constant(s[j]));
  }
  const SpaceModel& space = gpd.space();
  const std::size_t n = partition_.segments();
  std::vector<PathSegment> src_segments;
  std::vector<PathSegment> tgt_segments;
  src_segments.reserve(n);
  tgt_segments.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expr> src_coords;
    src_coords.reserve(coords_[i].size());
    for (const Expr& e : coords_[i]) {
      src_coords.push_back(e.subst(subst));
    }
    const AffineMap& m = gpd.action().map(arrow_elems_[i]);
    std::vector<Expr> tgt_coords;
    tgt_coords.reserve(src_coords.size());
    for (std::size_t r = 0; r < src_coords.size(); ++r) {
      Expr acc = Expr::constant(m.translation[r].to_double());
      for (std::size_t ccol = 0; ccol < src_coords.size(); ++ccol) {
        if (m.linear[r][ccol] == 0) continue;
        acc = acc + Expr::constant(static_cast<double>(m.linear[r][ccol])) *
                        src_coords[ccol];
      }
      tgt_coords.push_back(acc);
    }
    src_segments.push_back(PathSegment::parametric(
        partition_.point(i), partition_.point(i + 1), std::move(src_coords)));
    tgt_segments.push_back(PathSegment::parametric(
        partition_.point(i), partition_.point(i + 1), std::move(tgt_coords)));
  }
  const FiniteGroup& grp = gpd.group();
  std::vector<Arrow> src_arrows(n);
  std::vector<Arrow> tgt_arrows(n);
  for (std::size_t i = 0; i < n; ++i) {
    src_arrows[i].src = src_segments[i].point_at(space, src_segments[i].t1());
    src_arrows[i].g = loop_elems_[i];
    tgt_arrows[i].src = tgt_segments[i].point_at(space, tgt_segments[i].t1());
    tgt_arrows[i].g = grp.mul(
        grp.inv(arrow_elems_[i]),
        grp.mul(loop_elems_[i], arrow_elems_[(i + 1) % n]));
  }
  SegmentedLoop source = build_loop(gpd, partition_, std::move(src_segments),
                                    std::move(src_arrows));
  SegmentedLoop target = build_loop(gpd, partition_, std::move(tgt_segments),
                                    std::move(tgt_arrows));
  return build_loop_arrow(gpd, std::move(source), std::move(target),
                          arrow_elems_);
}

LoopArrow LoopFamily::base(const Groupoid& gpd) const {
  return arrow_at(gpd, std::vector<double>(params_, 0.0));
}

namespace {

std::vector<std::vector<Expr>> family_derivative(
    const std::vector<std::vector<Expr>>& coords, std::size_t params,
    std::size_t j) {
  std::map<std::uint8_t, Expr> zero;
  for (std::size_t p = 0; p < params; ++p) {
    zero.emplace(Symbol::s(p).id, Expr::constant(0.0));
  }
  std::vector<std::vector<Expr>> fields;
  fields.reserve(coords.size());
  for (const auto& segment : coords) {
    std::vector<Expr> f;
    f.reserve(segment.size());
    for (const Expr& e : segment) {
      f.push_back(e.diff(Symbol::s(j)).subst(zero));
    }
    fields.push_back(std::move(f));
  }
  return fields;
}

}  // namespace

LoopTangent LoopFamily::source_tangent(const Groupoid& gpd,
                                       std::size_t j) const {
  if (j >= params_) {
    fail(Errc::InvalidArgument, "family parameter index out of range");
  }
  LoopArrow base_arrow = base(gpd);
  return build_loop_tangent(gpd, base_arrow.source(),
                            family_derivative(coords_, params_, j));
}

LoopTangent LoopFamily::target_tangent(const Groupoid& gpd,
                                       std::size_t j) const {
  if (j >= params_) {
    fail(Errc::InvalidArgument, "family parameter index out of range");
  }
  LoopArrow base_arrow = base(gpd);
  std::vector<std::vector<Expr>> fields =
      family_derivative(coords_, params_, j);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const AffineMap& m = gpd.action().map(arrow_elems_[i]);
    std::vector<Expr> moved;
    moved.reserve(fields[i].size());
    for (std::size_t r = 0; r < fields[i].size(); ++r) {
      Expr acc = Expr::constant(0.0);
      for (std::size_t ccol = 0; ccol < fields[i].size(); ++ccol) {
        if (m.linear[r][ccol] == 0) continue;
        acc = acc + Expr::constant(static_cast<double>(m.linear[r][ccol])) *
                        fields[i][ccol];
      }
      moved.push_back(acc);
    }
    fields[i] = std::move(moved);
  }
  return build_loop_tangent(gpd, base_arrow.target(), std::move(fields));
}

LoopFamily build_loop_family(const Groupoid& gpd, Partition partition,
                             std::vector<std::vector<Expr>> coords,
                             std::vector<GroupElement> loop_elems,
                             std::vector<GroupElement> arrow_elems,
                             std::size_t params, double eps) {
  if (gpd.kind() != Groupoid::Kind::Action ||
      gpd.space().kind != SpaceModel::Kind::FlatTorus) {
    fail(Errc::InvalidArgument,
         "loop families are supported over torus quotient groupoids");
  }
  if (params < 1 || params > 4) {
    fail(Errc::InvalidArgument, "family parameter count must be 1..4");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    fail(Errc::InvalidArgument, "family radius must be positive");
  }
  const std::size_t n = partition.segments();
  if (coords.size() != n || loop_elems.size() != n || arrow_elems.size() != n) {
    fail(Errc::InvalidArgument,
         "family data must supply coordinates, loop elements, and arrow "
         "elements for every segment");
  }
  const std::size_t d = gpd.space().dim;
  for (const auto& segment : coords) {
    if (segment.size() != d) {
      fail(Errc::DomainMismatch, "family coordinate dimension mismatch");
    }
    for (const Expr& e : segment) {
      for (std::size_t k = 0; k < 8; ++k) {
        if (e.depends_on(Symbol::coord(k))) {
          fail(Errc::InvalidArgument,
               "family coordinates may depend on t and s1..sk only");
        }
      }
      for (std::size_t k = params; k < 4; ++k) {
        if (e.depends_on(Symbol::s(k))) {
          fail(Errc::InvalidArgument,
               "family coordinates use s" + std::to_string(k + 1) +
                   " beyond the declared parameter count");
        }
      }
    }
  }
  LoopFamily fam;
  fam.partition_ = std::move(partition);
  fam.coords_ = std::move(coords);
  fam.loop_elems_ = std::move(loop_elems);
  fam.arrow_elems_ = std::move(arrow_elems);
  fam.params_ = params;
  fam.eps_ = eps;
  fam.base(gpd);
  for (std::size_t j = 0; j < params; ++j) {
    std::vector<double> s(params, 0.0);
    s[j] = eps;
    fam.arrow_at(gpd, s);
    s[j] = -eps;
    fam.arrow_at(gpd, s);
  }
  return fam;
}

namespace {

std::complex<double> quad(const std::function<std::complex<double>(double)>& f,
                          double a, double b) {
  return integrate_adaptive(f, a, b, 256, 1e-9, 16384).value;
}

}  // namespace

std::complex<double> integrate_along(const PForm& w, const PathSegment& seg) {
  if (w.degree() != 1) {
    fail(Errc::InvalidArgument, "expected a degree-1 form");
  }
  if (seg.dim() == 0 || w.is_zero()) {
    return {0.0, 0.0};
  }
  if (w.dim() != seg.dim()) {
    fail(Errc::DomainMismatch,
         "form dimension " + std::to_string(w.dim()) +
             " does not match segment dimension " + std::to_string(seg.dim()));
  }
  auto f = [&](double t) {
    return eval_form(w, seg.at(t), {seg.velocity(t)});
  };
  return quad(f, seg.t0(), seg.t1());
}

std::complex<double> integrate_along(const PForm& b, const PathSegment& seg,
                                     const LoopTangent& xi, std::size_t i) {
  if (b.degree() != 2) {
    fail(Errc::InvalidArgument, "expected a degree-2 form");
  }
  if (seg.dim() == 0 || b.is_zero()) {
    return {0.0, 0.0};
  }
  if (b.dim() != seg.dim()) {
    fail(Errc::DomainMismatch,
         "form dimension " + std::to_string(b.dim()) +
             " does not match segment dimension " + std::to_string(seg.dim()));
  }
  auto f = [&](double t) {
    return eval_form(b, seg.at(t), {seg.velocity(t), xi.at(i, t)});
  };
  return quad(f, seg.t0(), seg.t1());
}

}  // namespace holonomy
