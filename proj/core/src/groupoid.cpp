// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/groupoid.hpp"

#include <algorithm>
#include <cmath>

#include "holonomy/snf.hpp"

namespace holonomy {

Groupoid Groupoid::quotient(SpaceModel space, FiniteGroup group,
                            AffineAction action) {
  if (action.space() != space || action.group_order() != group.order()) {
    fail(Errc::ActionNotCompatible, "action does not match space and group");
  }
  Groupoid g;
  g.kind_ = Kind::Action;
  g.space_ = space;
  g.group_ = std::move(group);
  g.action_ = std::move(action);
  return g;
}

Groupoid Groupoid::cover(SpaceModel space, std::vector<Chart> charts) {
  if (charts.empty()) fail(Errc::InvalidArgument, "cover needs charts");
  const std::size_t d =
      space.kind == SpaceModel::Kind::FlatTorus ? space.dim : 0;
  if (d == 0) {
    fail(Errc::InvalidArgument, "cover groupoids require a flat torus base");
  }
  for (const auto& c : charts) {
    if (c.lo.size() != d || c.hi.size() != d) {
      fail(Errc::InvalidArgument, "chart dimension mismatch");
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (!(c.lo[i] < c.hi[i])) {
        fail(Errc::InvalidArgument, "chart box must have positive extent");
      }
    }
  }
  Groupoid g;
  g.kind_ = Kind::Cover;
  g.space_ = space;
  g.charts_ = std::move(charts);
  return g;
}

const FiniteGroup& Groupoid::group() const {
  if (!group_) fail(Errc::InvalidArgument, "cover groupoid has no group");
  return *group_;
}

const AffineAction& Groupoid::action() const {
  if (!action_) fail(Errc::InvalidArgument, "cover groupoid has no action");
  return *action_;
}

bool Groupoid::chart_contains(std::uint32_t chart, const Point& x,
                              double eps) const {
  const Chart& c = charts_.at(chart);
  for (std::size_t i = 0; i < space_.dim; ++i) {
    const double frac = mod1(x.coords[i]);
    const double lo = c.lo[i].to_double();
    const double hi = c.hi[i].to_double();
    // Membership on the circle: some integer translate of frac lies in
    // [lo, hi]. k must satisfy lo - frac <= k <= hi - frac.
    const double kmin = std::ceil(lo - frac - eps);
    if (kmin > hi - frac + eps) return false;
  }
  return true;
}

Point Groupoid::source(const Arrow& a) const { return a.src; }

Point Groupoid::target(const Arrow& a) const {
  if (kind_ == Kind::Action) return action_->act(a.src, a.g);
  return a.src;
}

Arrow Groupoid::unit(const Point& x, std::uint32_t chart) const {
  Arrow a;
  a.src = x;
  if (kind_ == Kind::Action) {
    a.g = group_->identity();
  } else {
    a.chart_from = chart;
    a.chart_to = chart;
  }
  return a;
}

bool Groupoid::is_unit(const Arrow& a, double eps) const {
  if (kind_ == Kind::Action) return a.g == group_->identity();
  (void)eps;
  return a.chart_from == a.chart_to;
}

Arrow Groupoid::compose(const Arrow& a, const Arrow& b, double eps) const {
  const Point mid = target(a);
  if (point_dist(space_, mid, b.src) > eps) {
    fail(Errc::NotComposable, "target of first arrow differs from source of second");
  }
  Arrow c;
  c.src = a.src;
  if (kind_ == Kind::Action) {
    c.g = group_->mul(a.g, b.g);
  } else {
    if (a.chart_to != b.chart_from) {
      fail(Errc::NotComposable, "chart indices do not chain");
    }
    c.chart_from = a.chart_from;
    c.chart_to = b.chart_to;
  }
  return c;
}

Arrow Groupoid::inverse(const Arrow& a) const {
  Arrow r;
  if (kind_ == Kind::Action) {
    r.src = target(a);
    r.g = group_->inv(a.g);
  } else {
    r.src = a.src;
    r.chart_from = a.chart_to;
    r.chart_to = a.chart_from;
  }
  return r;
}

std::vector<double> Groupoid::push(const Arrow& a,
                                   const std::vector<double>& v) const {
  if (kind_ == Kind::Action) return action_->push(v, a.g);
  return v;
}

std::vector<NerveTuple> Groupoid::enumerate_nerve(std::size_t k) const {
  if (kind_ == Kind::Cover ||
      space_.kind != SpaceModel::Kind::FinitePointSet) {
    fail(Errc::InfiniteNerve,
         "nerve enumeration requires a finite point-set quotient");
  }
  const std::size_t n = space_.point_count;
  const std::size_t ord = group_->order();
  double count = static_cast<double>(n);
  for (std::size_t i = 0; i < k; ++i) count *= static_cast<double>(ord);
  if (count > static_cast<double>(kNerveCap)) {
    fail(Errc::LevelTooLarge, "nerve level exceeds enumeration cap");
  }
  std::vector<NerveTuple> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<GroupElement> tuple(k, 0);
  for (std::size_t x = 0; x < n; ++x) {
    // Odometer over (g1, ..., gk); done once every position has wrapped.
    std::fill(tuple.begin(), tuple.end(), 0);
    bool done = false;
    while (!done) {
      out.push_back(NerveTuple{Point::at(x), tuple});
      done = true;
      std::size_t pos = k;
      while (pos > 0) {
        --pos;
        if (++tuple[pos] < ord) {
          done = false;
          break;
        }
        tuple[pos] = 0;
      }
    }
  }
  return out;
}

namespace {

std::vector<std::vector<FixedComponent>> torus_fixed_sets(
    const SpaceModel& space, const FiniteGroup& group,
    const AffineAction& action) {
  const std::size_t d = space.dim;
  std::vector<std::vector<FixedComponent>> fixed(group.order());
  for (GroupElement g = 0; g < group.order(); ++g) {
    const AffineMap& m = action.map(g);
    // Solve (R - I) x = -t mod Z^d. With U (R - I) V = S the substitution
    // z = V^-1 x turns this into s_i z_i = (U(-t))_i mod 1.
    IntMat a(d, std::vector<BigInt>(d));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        a[i][j] = BigInt(m.linear[i][j]) - (i == j ? 1 : 0);
      }
    }
    SmithOptions opt;
    opt.track_U = true;
    opt.track_V = true;
    SmithResult snf = smith_normal_form(a, opt);

    std::vector<Rational> rhs(d, Rational(0));
    for (std::size_t i = 0; i < d; ++i) {
      Rational acc(0);
      for (std::size_t j = 0; j < d; ++j) {
        std::int64_t u = static_cast<std::int64_t>(snf.U[i][j]);
        acc += Rational(u) * (-m.translation[j]);
      }
      rhs[i] = acc;
    }

    bool solvable = true;
    std::vector<std::size_t> free_idx;
    std::vector<std::vector<Rational>> choices(d);
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t s =
          i < snf.diag.size() ? static_cast<std::int64_t>(snf.diag[i]) : 0;
      if (s == 0) {
        if (!rhs[i].mod1().is_zero()) {
          solvable = false;
          break;
        }
        free_idx.push_back(i);
        choices[i] = {Rational(0)};
      } else {
        for (std::int64_t kk = 0; kk < s; ++kk) {
          choices[i].push_back(((rhs[i] + Rational(kk)) / Rational(s)).mod1());
        }
      }
    }
    if (!solvable) continue;

    // Cartesian product of the per-coordinate choices; each choice is one
    // parallel component, pairwise distinct by construction.
    std::vector<std::size_t> pick(d, 0);
    bool done = false;
    while (!done) {
      std::vector<Rational> z(d, Rational(0));
      for (std::size_t i = 0; i < d; ++i) z[i] = choices[i][pick[i]];
      FixedComponent comp;
      comp.offset.assign(d, Rational(0));
      for (std::size_t i = 0; i < d; ++i) {
        Rational acc(0);
        for (std::size_t j = 0; j < d; ++j) {
          acc += Rational(static_cast<std::int64_t>(snf.V[i][j])) * z[j];
        }
        comp.offset[i] = acc.mod1();
      }
      for (std::size_t f : free_idx) {
        std::vector<std::int64_t> dir(d, 0);
        for (std::size_t i = 0; i < d; ++i) {
          dir[i] = static_cast<std::int64_t>(snf.V[i][f]);
        }
        comp.basis.push_back(std::move(dir));
      }
      fixed[g].push_back(std::move(comp));

      done = true;
      std::size_t pos = d;
      while (pos > 0) {
        --pos;
        if (++pick[pos] < choices[pos].size()) {
          done = false;
          break;
        }
        pick[pos] = 0;
      }
    }
  }
  return fixed;
}

}  // namespace

InertiaGroupoid Groupoid::inertia() const {
  if (kind_ == Kind::Cover) {
    fail(Errc::InvalidArgument,
         "inertia is defined for quotient groupoids in this model");
  }
  InertiaGroupoid out;
  if (space_.kind == SpaceModel::Kind::FinitePointSet) {
    for (GroupElement g = 0; g < group_->order(); ++g) {
      for (std::size_t x = 0; x < space_.point_count; ++x) {
        if (action_->perm(g, x) == x) out.objects.emplace_back(x, g);
      }
    }
    return out;
  }
  out.fixed = torus_fixed_sets(space_, *group_, *action_);
  return out;
}

std::pair<Point, GroupElement> inertia_conjugate(const Groupoid& gpd,
                                                 const Point& x, GroupElement g,
                                                 GroupElement h) {
  const FiniteGroup& grp = gpd.group();
  return {gpd.action().act(x, h), grp.conj(g, h)};
}

}  // namespace holonomy
