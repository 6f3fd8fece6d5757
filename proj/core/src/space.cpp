// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/space.hpp"

#include <cmath>

namespace holonomy {

double mod1(double v, double eps) {
  double r = v - std::floor(v);
  if (r >= 1.0) r -= 1.0;
  if (r < eps || r > 1.0 - eps) r = 0.0;
  return r;
}

std::vector<double> mod1(std::vector<double> x, double eps) {
  for (double& v : x) v = mod1(v, eps);
  return x;
}

Point Point::at(std::vector<double> x) {
  Point p;
  p.coords = mod1(std::move(x));
  return p;
}

double point_dist(const SpaceModel& space, const Point& a, const Point& b) {
  if (space.kind == SpaceModel::Kind::FinitePointSet) {
    return a.index == b.index ? 0.0 : 1.0;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < space.dim; ++i) {
    double d = std::fabs(mod1(a.coords[i]) - mod1(b.coords[i]));
    d = std::min(d, 1.0 - d);
    worst = std::max(worst, d);
  }
  return worst;
}

AffineMap AffineMap::identity(std::size_t d) {
  AffineMap m;
  m.linear.assign(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < d; ++i) m.linear[i][i] = 1;
  m.translation.assign(d, Rational(0));
  return m;
}

std::vector<double> AffineMap::apply(const std::vector<double>& x) const {
  const std::size_t d = dim();
  std::vector<double> y(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = translation[i].to_double();
    for (std::size_t j = 0; j < d; ++j) {
      acc += static_cast<double>(linear[i][j]) * x[j];
    }
    y[i] = mod1(acc);
  }
  return y;
}

std::vector<double> AffineMap::apply_unreduced(const std::vector<double>& x) const {
  const std::size_t d = dim();
  std::vector<double> y(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = translation[i].to_double();
    for (std::size_t j = 0; j < d; ++j) {
      acc += static_cast<double>(linear[i][j]) * x[j];
    }
    y[i] = acc;
  }
  return y;
}

std::vector<Rational> AffineMap::apply(const std::vector<Rational>& x) const {
  const std::size_t d = dim();
  std::vector<Rational> y(d, Rational(0));
  for (std::size_t i = 0; i < d; ++i) {
    Rational acc = translation[i];
    for (std::size_t j = 0; j < d; ++j) {
      acc += Rational(linear[i][j]) * x[j];
    }
    y[i] = acc.mod1();
  }
  return y;
}

AffineMap AffineMap::compose_after(const AffineMap& first) const {
  // Returns x -> this(first(x)).
  const std::size_t d = dim();
  AffineMap out;
  out.linear.assign(d, std::vector<std::int64_t>(d, 0));
  out.translation.assign(d, Rational(0));
  for (std::size_t i = 0; i < d; ++i) {
    Rational t = translation[i];
    for (std::size_t j = 0; j < d; ++j) {
      __int128 acc = 0;
      for (std::size_t k = 0; k < d; ++k) {
        acc += static_cast<__int128>(linear[i][k]) * first.linear[k][j];
      }
      if (acc > INT64_MAX || acc < INT64_MIN) {
        fail(Errc::Overflow, "affine composition overflows");
      }
      out.linear[i][j] = static_cast<std::int64_t>(acc);
      t += Rational(linear[i][j]) * first.translation[j];
    }
    out.translation[i] = t;
  }
  return out;
}

std::vector<double> AffineMap::push(const std::vector<double>& v) const {
  const std::size_t d = dim();
  std::vector<double> w(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      w[i] += static_cast<double>(linear[i][j]) * v[j];
    }
  }
  return w;
}

namespace {

// Determinant of a small integer matrix by fraction-free Gaussian
// elimination (Bareiss); exact for the dimensions in play.
std::int64_t int_det(std::vector<std::vector<std::int64_t>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        __int128 v = (static_cast<__int128>(m[i][j]) * m[k][k] -
                      static_cast<__int128>(m[i][k]) * m[k][j]) /
                     prev;
        if (v > INT64_MAX || v < INT64_MIN) {
          fail(Errc::Overflow, "determinant computation overflows");
        }
        m[i][j] = static_cast<std::int64_t>(v);
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

AffineAction::AffineAction(SpaceModel space, const FiniteGroup& group)
    : space_(space), group_order_(group.order()) {
  if (space_.kind == SpaceModel::Kind::FinitePointSet) {
    perms_.assign(group_order_, {});
    for (auto& p : perms_) {
      p.resize(space_.point_count);
      for (std::size_t i = 0; i < space_.point_count; ++i) {
        p[i] = static_cast<std::uint32_t>(i);
      }
    }
  } else {
    maps_.assign(group_order_, AffineMap::identity(space_.dim));
  }
  validate(group);
}

AffineAction::AffineAction(SpaceModel space, const FiniteGroup& group,
                           std::vector<std::vector<std::uint32_t>> perms)
    : space_(space), group_order_(group.order()), perms_(std::move(perms)) {
  if (space_.kind != SpaceModel::Kind::FinitePointSet) {
    fail(Errc::InvalidArgument, "permutation action requires a point set");
  }
  if (perms_.size() != group_order_) {
    fail(Errc::ActionNotCompatible, "one permutation per group element");
  }
  for (const auto& p : perms_) {
    if (p.size() != space_.point_count) {
      fail(Errc::ActionNotCompatible, "permutation size mismatch");
    }
    std::vector<bool> hit(p.size(), false);
    for (std::uint32_t v : p) {
      if (v >= p.size() || hit[v]) {
        fail(Errc::NonInvertibleLinearPart, "map is not a permutation");
      }
      hit[v] = true;
    }
  }
  validate(group);
}

AffineAction::AffineAction(SpaceModel space, const FiniteGroup& group,
                           std::vector<AffineMap> maps)
    : space_(space), group_order_(group.order()), maps_(std::move(maps)) {
  if (space_.kind != SpaceModel::Kind::FlatTorus) {
    fail(Errc::InvalidArgument, "affine action requires a flat torus");
  }
  if (maps_.size() != group_order_) {
    fail(Errc::ActionNotCompatible, "one affine map per group element");
  }
  for (const auto& m : maps_) {
    if (m.dim() != space_.dim || m.linear.size() != space_.dim) {
      fail(Errc::ActionNotCompatible, "affine map dimension mismatch");
    }
    std::int64_t det = int_det(m.linear);
    if (det != 1 && det != -1) {
      fail(Errc::NonInvertibleLinearPart,
           "linear part has determinant " + std::to_string(det) +
               "; torus maps must be unimodular");
    }
  }
  validate(group);
}

void AffineAction::validate(const FiniteGroup& group) {
  const GroupElement e = group.identity();
  if (space_.kind == SpaceModel::Kind::FinitePointSet) {
    for (std::size_t i = 0; i < space_.point_count; ++i) {
      if (perms_[e][i] != i) {
        fail(Errc::ActionNotCompatible, "identity must act trivially");
      }
    }
    for (GroupElement g = 0; g < group_order_; ++g) {
      for (GroupElement h = 0; h < group_order_; ++h) {
        const GroupElement gh = group.mul(g, h);
        for (std::size_t i = 0; i < space_.point_count; ++i) {
          if (perms_[h][perms_[g][i]] != perms_[gh][i]) {
            fail(Errc::ActionNotCompatible,
                 "(x.g).h != x.(gh) for g=" + group.label(g) +
                     " h=" + group.label(h));
          }
        }
      }
    }
    return;
  }
  const std::size_t d = space_.dim;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (maps_[e].linear[i][j] != (i == j ? 1 : 0)) {
        fail(Errc::ActionNotCompatible, "identity must act trivially");
      }
    }
    if (!maps_[e].translation[i].mod1().is_zero()) {
      fail(Errc::ActionNotCompatible, "identity must act trivially");
    }
  }
  for (GroupElement g = 0; g < group_order_; ++g) {
    for (GroupElement h = 0; h < group_order_; ++h) {
      const GroupElement gh = group.mul(g, h);
      const AffineMap comp = maps_[h].compose_after(maps_[g]);
      for (std::size_t i = 0; i < d; ++i) {
        bool linear_ok = true;
        for (std::size_t j = 0; j < d; ++j) {
          linear_ok = linear_ok && comp.linear[i][j] == maps_[gh].linear[i][j];
        }
        const Rational dt =
            (comp.translation[i] - maps_[gh].translation[i]).mod1();
        if (!linear_ok || !dt.is_zero()) {
          fail(Errc::ActionNotCompatible,
               "(x.g).h != x.(gh) mod Z^d for g=" + group.label(g) +
                   " h=" + group.label(h));
        }
      }
    }
  }
}

Point AffineAction::act(const Point& x, GroupElement g) const {
  if (space_.kind == SpaceModel::Kind::FinitePointSet) {
    return Point::at(static_cast<std::size_t>(perms_[g][x.index]));
  }
  Point y;
  y.coords = maps_[g].apply(x.coords);
  return y;
}

const AffineMap& AffineAction::map(GroupElement g) const {
  if (space_.kind != SpaceModel::Kind::FlatTorus) {
    fail(Errc::InvalidArgument, "affine map requested for a point set action");
  }
  return maps_[g];
}

std::uint32_t AffineAction::perm(GroupElement g, std::size_t i) const {
  return perms_[g][i];
}

std::vector<double> AffineAction::push(const std::vector<double>& v,
                                       GroupElement g) const {
  if (space_.kind == SpaceModel::Kind::FinitePointSet) return v;
  return maps_[g].push(v);
}

}  // namespace holonomy
