// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/randomgen.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "holonomy/pform.hpp"
#include "holonomy/sectors.hpp"

namespace holonomy {

namespace {

Expr two_pi() { return Expr::constant(2.0) * Expr::pi(); }

/// Random angle in turns with a small exact denominator.
Rational random_angle(Rng& rng) {
  static constexpr std::int64_t kDens[] = {1, 2, 3, 4, 6, 8, 12};
  const std::int64_t den = kDens[rng.below(7)];
  return Rational(static_cast<std::int64_t>(rng.below(
                      static_cast<std::uint64_t>(den))),
                  den);
}

Scalar random_phase(Rng& rng) { return Scalar::exact_phase(random_angle(rng)); }

GroupElement random_element(const FiniteGroup& g, Rng& rng) {
  return static_cast<GroupElement>(rng.below(g.order()));
}

/// Trigonometric polynomial i * sum_d (a_d sin(2 pi x_d) + b_d cos(2 pi x_d))
/// plus an occasional integer winding phase 2 pi i k x_d, as the exponent of
/// a certified nonvanishing unit-modulus function.
Expr random_unit_exponent(std::size_t dim, Rng& rng, bool allow_winding) {
  Expr sum;
  for (std::size_t d = 0; d < dim; ++d) {
    const Expr arg = two_pi() * Expr::var(Symbol::coord(d));
    if (rng.below(2)) {
      sum = sum + Expr::constant(rng.uniform(-1.0, 1.0)) * Expr::sin(arg);
    }
    if (rng.below(2)) {
      sum = sum + Expr::constant(rng.uniform(-1.0, 1.0)) * Expr::cos(arg);
    }
  }
  Expr exponent = Expr::imag_unit() * sum;
  if (allow_winding) {
    for (std::size_t d = 0; d < dim; ++d) {
      const std::int64_t k = rng.range(-1, 1);
      if (k != 0) {
        exponent = exponent + Expr::imag_unit() * Expr::constant(
                                  static_cast<double>(k)) *
                                  two_pi() * Expr::var(Symbol::coord(d));
      }
    }
  }
  return exponent;
}

Expr random_unit_function(std::size_t dim, Rng& rng, bool allow_winding) {
  return Expr::exp(random_unit_exponent(dim, rng, allow_winding));
}

/// Real periodic coefficient c0 + c1 cos(2 pi x_d) for form coefficients.
Expr random_periodic_coeff(std::size_t dim, Rng& rng) {
  Expr out = Expr::constant(rng.uniform(-1.0, 1.0));
  const std::size_t d = rng.below(dim);
  if (rng.below(2)) {
    out = out + Expr::constant(rng.uniform(-1.0, 1.0)) *
                    Expr::cos(two_pi() * Expr::var(Symbol::coord(d)));
  } else {
    out = out + Expr::constant(rng.uniform(-1.0, 1.0)) *
                    Expr::sin(two_pi() * Expr::var(Symbol::coord(d)));
  }
  return out;
}

std::int64_t det2(const AffineMap& m) {
  return m.linear[0][0] * m.linear[1][1] - m.linear[0][1] * m.linear[1][0];
}

/// Plan for a closed chain of torus segments: start and end coordinates in
/// the universal cover, wrap elements, and the partition.
struct TorusPlan {
  std::vector<Rational> points;
  std::vector<std::vector<double>> start;  // per segment
  std::vector<std::vector<double>> end;    // per segment
  std::vector<GroupElement> gs;            // per breakpoint
};

std::vector<Rational> random_partition_points(Rng& rng, std::size_t segments) {
  std::set<std::int64_t> cuts;
  while (cuts.size() < segments - 1) {
    cuts.insert(1 + static_cast<std::int64_t>(rng.below(23)));
  }
  std::vector<Rational> points;
  points.emplace_back(0);
  for (std::int64_t c : cuts) points.emplace_back(c, 24);
  points.emplace_back(1);
  return points;
}

TorusPlan make_torus_plan(const Groupoid& gpd, Rng& rng,
                          std::size_t max_segments) {
  const std::size_t dim = gpd.space().dim;
  const FiniteGroup& grp = gpd.group();
  const std::size_t n = 1 + rng.below(max_segments);

  TorusPlan plan;
  plan.points = random_partition_points(rng, n);
  for (std::size_t i = 0; i < n; ++i) {
    plan.gs.push_back(random_element(grp, rng));
  }

  std::vector<double> s0(dim);
  for (std::size_t d = 0; d < dim; ++d) s0[d] = rng.uniform01();
  plan.start.push_back(s0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(dim);
    if (i + 1 < n) {
      for (std::size_t d = 0; d < dim; ++d) {
        e[d] = plan.start[i][d] + rng.uniform(-0.45, 0.45);
        if (rng.below(4) == 0) e[d] += static_cast<double>(rng.range(-1, 1));
      }
      plan.end.push_back(e);
      plan.start.push_back(
          gpd.action().map(plan.gs[i]).apply_unreduced(e));
    } else {
      // The last wrap must close the loop: end = g^{-1}-image of the start,
      // shifted by an integer winding vector.
      e = gpd.action().map(grp.inv(plan.gs[i])).apply_unreduced(s0);
      for (std::size_t d = 0; d < dim; ++d) {
        if (rng.below(3) == 0) e[d] += static_cast<double>(rng.range(-1, 1));
      }
      plan.end.push_back(e);
    }
  }
  return plan;
}

/// Normalized chart parameter (t - lo) / (hi - lo) of segment i.
Expr segment_u(const std::vector<Rational>& points, std::size_t i) {
  const double lo = points[i].to_double();
  const double len = points[i + 1].to_double() - lo;
  return (Expr::var(Symbol::t()) - Expr::constant(lo)) *
         Expr::constant(1.0 / len);
}

/// Straight segment from a to b in the chart parameter u, plus an interior
/// sine wiggle vanishing at both ends.
std::vector<Expr> segment_coords(const std::vector<double>& a,
                                 const std::vector<double>& b, const Expr& u,
                                 Rng& rng, double wiggle) {
  std::vector<Expr> coords;
  for (std::size_t d = 0; d < a.size(); ++d) {
    Expr c = Expr::constant(a[d]) + Expr::constant(b[d] - a[d]) * u;
    if (wiggle > 0.0 && rng.below(2)) {
      c = c + Expr::constant(rng.uniform(-wiggle, wiggle)) *
                  Expr::sin(Expr::pi() * u);
    }
    coords.push_back(std::move(c));
  }
  return coords;
}

SegmentedLoop loop_from_plan(const Groupoid& gpd, const TorusPlan& plan,
                             Rng& rng) {
  const std::size_t n = plan.gs.size();
  std::vector<PathSegment> segments;
  std::vector<Arrow> arrows;
  for (std::size_t i = 0; i < n; ++i) {
    const Expr u = segment_u(plan.points, i);
    segments.push_back(PathSegment::parametric(
        plan.points[i], plan.points[i + 1],
        segment_coords(plan.start[i], plan.end[i], u, rng, 0.15)));
    Arrow a;
    a.src = Point::at(mod1(plan.end[i]));
    a.g = plan.gs[i];
    arrows.push_back(a);
  }
  return build_loop(gpd, Partition(plan.points), std::move(segments),
                    std::move(arrows));
}

}  // namespace

Groupoid point_quotient(const FiniteGroup& g) {
  const SpaceModel space = SpaceModel::points(1);
  return Groupoid::quotient(space, g, AffineAction(space, g));
}

namespace {

Groupoid z2_torus(std::size_t dim, const AffineMap& nontrivial) {
  const SpaceModel space = SpaceModel::torus(dim);
  const FiniteGroup g = FiniteGroup::cyclic(2);
  std::vector<AffineMap> maps{AffineMap::identity(dim), nontrivial};
  return Groupoid::quotient(space, g, AffineAction(space, g, std::move(maps)));
}

}  // namespace

Groupoid circle_shift() {
  AffineMap m = AffineMap::identity(1);
  m.translation[0] = Rational(1, 2);
  return z2_torus(1, m);
}

Groupoid circle_inversion() {
  AffineMap m = AffineMap::identity(1);
  m.linear[0][0] = -1;
  return z2_torus(1, m);
}

Groupoid torus2_inversion() {
  AffineMap m = AffineMap::identity(2);
  m.linear[0][0] = -1;
  m.linear[1][1] = -1;
  return z2_torus(2, m);
}

Groupoid torus2_shift() {
  AffineMap m = AffineMap::identity(2);
  m.translation[0] = Rational(1, 2);
  return z2_torus(2, m);
}

bool translation_action(const Groupoid& gpd) {
  if (gpd.kind() != Groupoid::Kind::Action) return false;
  if (gpd.space().kind != SpaceModel::Kind::FlatTorus) return false;
  const std::size_t dim = gpd.space().dim;
  const AffineMap id = AffineMap::identity(dim);
  for (GroupElement g = 0; g < gpd.group().order(); ++g) {
    if (gpd.action().map(g).linear != id.linear) return false;
  }
  return true;
}

std::vector<std::vector<Rational>> all_characters(const FiniteGroup& g) {
  const std::size_t q = g.order();
  using State = std::vector<std::optional<Rational>>;

  // Closure: propagate chi(ab) = chi(a) + chi(b) until stable; detects
  // contradictions against already-assigned values.
  const auto close = [&](State& st) -> bool {
    bool changed = true;
    while (changed) {
      changed = false;
      for (GroupElement a = 0; a < q; ++a) {
        if (!st[a]) continue;
        for (GroupElement b = 0; b < q; ++b) {
          if (!st[b]) continue;
          const GroupElement ab = g.mul(a, b);
          const Rational v = (*st[a] + *st[b]).mod1();
          if (!st[ab]) {
            st[ab] = v;
            changed = true;
          } else if (*st[ab] != v) {
            return false;
          }
        }
      }
    }
    return true;
  };

  std::vector<std::vector<Rational>> out;
  const auto recurse = [&](auto&& self, State st) -> void {
    if (!close(st)) return;
    GroupElement next = 0;
    while (next < q && st[next]) ++next;
    if (next == q) {
      std::vector<Rational> chi(q);
      for (GroupElement a = 0; a < q; ++a) chi[a] = *st[a];
      out.push_back(std::move(chi));
      return;
    }
    // Order of the unassigned element bounds its angle denominators.
    std::size_t r = 1;
    GroupElement p = next;
    while (p != g.identity()) {
      p = g.mul(p, next);
      ++r;
    }
    for (std::size_t k = 0; k < r; ++k) {
      State branch = st;
      branch[next] = Rational(static_cast<std::int64_t>(k),
                              static_cast<std::int64_t>(r));
      self(self, std::move(branch));
    }
  };

  State init(q);
  init[g.identity()] = Rational(0);
  recurse(recurse, std::move(init));

  std::sort(out.begin(), out.end(),
            [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
              for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] != b[i]) return a[i] < b[i];
              }
              return false;
            });
  return out;
}

CochainFunction random_gauge(const Groupoid& gpd, Rng& rng) {
  if (gpd.space().kind == SpaceModel::Kind::FinitePointSet) {
    std::map<TupleKey, Scalar> values;
    for (std::size_t i = 0; i < gpd.space().point_count; ++i) {
      values.emplace(TupleKey{static_cast<std::uint32_t>(i)},
                     random_phase(rng));
    }
    return CochainFunction::point_table(gpd, 0, std::move(values));
  }
  std::map<TupleKey, Expr> values;
  values.emplace(TupleKey{}, random_unit_function(gpd.space().dim, rng, true));
  return CochainFunction::group_expr(gpd, 0, std::move(values));
}

LineData random_line_element(const Groupoid& gpd, Rng& rng) {
  const FiniteGroup& grp = gpd.group();
  const std::size_t q = grp.order();
  const GroupElement e = grp.identity();
  LineData out;
  if (gpd.space().kind == SpaceModel::Kind::FinitePointSet) {
    std::map<TupleKey, Scalar> values;
    for (std::size_t i = 0; i < gpd.space().point_count; ++i) {
      for (GroupElement a = 0; a < q; ++a) {
        values.emplace(TupleKey{static_cast<std::uint32_t>(i), a},
                       a == e ? Scalar::exact_phase(Rational(0))
                              : random_phase(rng));
      }
    }
    out.h = CochainFunction::point_table(gpd, 1, std::move(values));
    out.A = FormFamily(FormFamily::Keying::Action, 0, 1, 0);
    return out;
  }
  const std::size_t dim = gpd.space().dim;
  std::map<TupleKey, Expr> values;
  for (GroupElement a = 0; a < q; ++a) {
    values.emplace(TupleKey{a}, a == e
                                    ? Expr::constant(1.0)
                                    : random_unit_function(dim, rng, false));
  }
  out.h = CochainFunction::group_expr(gpd, 1, std::move(values));
  PForm a1(1, dim);
  for (std::size_t d = 0; d < dim; ++d) {
    if (rng.below(2)) continue;
    a1.set({d}, Expr::imag_unit() * random_periodic_coeff(dim, rng));
  }
  out.A = FormFamily::single(std::move(a1));
  return out;
}

LineData random_line_cocycle(const Groupoid& gpd, Rng& rng) {
  const FiniteGroup& grp = gpd.group();
  const std::size_t dim = gpd.space().kind == SpaceModel::Kind::FlatTorus
                              ? gpd.space().dim
                              : 0;

  const auto characters = all_characters(grp);
  const auto& chi = characters[rng.below(characters.size())];
  std::map<TupleKey, Scalar> table;
  for (GroupElement a = 0; a < grp.order(); ++a) {
    table.emplace(TupleKey{a}, Scalar::exact_phase(chi[a]));
  }
  LineData out;
  out.h = CochainFunction::group_table(gpd, 1, std::move(table));
  out.A = FormFamily(FormFamily::Keying::Action, 0, 1, dim);

  out = out.product(gpd, gauge_coboundary(gpd, random_gauge(gpd, rng)));

  if (translation_action(gpd)) {
    // Invariant constant connection: delta A = 0 and dlog 1 = 0.
    PForm a1(1, dim);
    for (std::size_t d = 0; d < dim; ++d) {
      if (rng.below(2)) {
        a1.set({d}, Expr::imag_unit() *
                        Expr::constant(rng.uniform(-2.0, 2.0)));
      }
    }
    if (!a1.is_zero()) {
      LineData inv;
      inv.h = CochainFunction::constant_one(1);
      inv.A = FormFamily::single(std::move(a1));
      out = out.product(gpd, inv);
    }
  }
  return out;
}

GerbeData random_gerbe_cocycle(const Groupoid& gpd, Rng& rng) {
  GerbeData out = total_coboundary(gpd, random_line_element(gpd, rng));

  const FiniteGroup& grp = gpd.group();
  if (grp.order() <= 12) {
    const SchurData sd = h2_finite_group(grp);
    if (!sd.representatives.empty() && rng.below(2)) {
      const std::size_t i = rng.below(sd.representatives.size());
      const std::int64_t p =
          1 + static_cast<std::int64_t>(
                  rng.below(sd.invariant_factors[i] - 1));
      const TorsionCocycle& rep = sd.representatives[i];
      std::vector<std::vector<Rational>> angles(
          grp.order(), std::vector<Rational>(grp.order()));
      for (GroupElement a = 0; a < grp.order(); ++a) {
        for (GroupElement b = 0; b < grp.order(); ++b) {
          angles[a][b] = (rep.angle(a, b) * Rational(p)).mod1();
        }
      }
      out = out.product(
          gpd, torsion_gerbe(gpd, TorsionCocycle::from_angles(
                                      grp, std::move(angles))));
    }
  }

  const SpaceModel& space = gpd.space();
  if (space.kind == SpaceModel::Kind::FlatTorus && space.dim == 2) {
    bool unimodular = true;
    for (GroupElement a = 0; a < grp.order(); ++a) {
      if (det2(gpd.action().map(a)) != 1) unimodular = false;
    }
    if (unimodular && rng.below(2)) {
      PForm b2(2, 2);
      b2.set({0, 1},
             Expr::imag_unit() * Expr::constant(rng.uniform(-2.0, 2.0)));
      GerbeData inv;
      inv.h = CochainFunction::constant_one(2);
      inv.A = FormFamily(FormFamily::Keying::Action, 1, 1, 2);
      inv.B = FormFamily::single(std::move(b2));
      out = out.product(gpd, inv);
    }
  }
  return out;
}

FlatNData random_flat3(const Groupoid& gpd, Rng& rng) {
  if (gpd.kind() != Groupoid::Kind::Action ||
      gpd.space().kind != SpaceModel::Kind::FinitePointSet) {
    fail(Errc::InvalidArgument,
         "flat degree-3 generation needs a finite-base quotient groupoid");
  }
  const FiniteGroup& grp = gpd.group();
  const std::size_t q = grp.order();

  std::map<TupleKey, Scalar> mu;
  for (GroupElement a = 0; a < q; ++a) {
    for (GroupElement b = 0; b < q; ++b) {
      mu.emplace(TupleKey{a, b}, random_phase(rng));
    }
  }
  CochainFunction omega =
      cech_delta(gpd, CochainFunction::group_table(gpd, 2, std::move(mu)));

  if (q == 2 && rng.below(2)) {
    // The nontrivial degree-3 class of the two-element group: -1 exactly on
    // the triple of three non-identity entries.
    const GroupElement a = grp.identity() == 0 ? 1 : 0;
    std::map<TupleKey, Scalar> assoc;
    for (GroupElement x = 0; x < 2; ++x) {
      for (GroupElement y = 0; y < 2; ++y) {
        for (GroupElement z = 0; z < 2; ++z) {
          const bool top = x == a && y == a && z == a;
          assoc.emplace(TupleKey{x, y, z},
                        Scalar::exact_phase(Rational(top ? 1 : 0, 2)));
        }
      }
    }
    omega = omega.product(
        gpd, CochainFunction::group_table(gpd, 3, std::move(assoc)));
  }

  FlatNData out;
  out.n = 3;
  out.omega = std::move(omega);
  return out;
}

SegmentedLoop random_loop(const Groupoid& gpd, Rng& rng,
                          std::size_t max_segments) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::InvalidArgument, "loop generation needs a quotient groupoid");
  }
  const FiniteGroup& grp = gpd.group();
  if (gpd.space().kind == SpaceModel::Kind::FlatTorus) {
    return loop_from_plan(gpd, make_torus_plan(gpd, rng, max_segments), rng);
  }

  const std::size_t n = 1 + rng.below(max_segments);
  const std::vector<Rational> points = random_partition_points(rng, n);
  std::vector<std::size_t> base{rng.below(gpd.space().point_count)};
  std::vector<GroupElement> gs;
  GroupElement prod = grp.identity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const GroupElement gi = random_element(grp, rng);
    gs.push_back(gi);
    prod = grp.mul(prod, gi);
    base.push_back(gpd.action().act(Point::at(base.back()), gi).index);
  }
  // Close through a random stabilizer element of the base point.
  std::vector<GroupElement> stab;
  for (GroupElement s = 0; s < grp.order(); ++s) {
    if (gpd.action().act(Point::at(base[0]), s).index == base[0]) {
      stab.push_back(s);
    }
  }
  gs.push_back(grp.mul(grp.inv(prod), stab[rng.below(stab.size())]));

  std::vector<PathSegment> segments;
  std::vector<Arrow> arrows;
  for (std::size_t i = 0; i < n; ++i) {
    segments.push_back(
        PathSegment::constant(points[i], points[i + 1], Point::at(base[i])));
    Arrow a;
    a.src = Point::at(base[i]);
    a.g = gs[i];
    arrows.push_back(a);
  }
  return build_loop(gpd, Partition(points), std::move(segments),
                    std::move(arrows));
}

LoopArrow random_loop_arrow(const Groupoid& gpd, const SegmentedLoop& src,
                            Rng& rng) {
  std::vector<GroupElement> elems;
  for (std::size_t i = 0; i < src.size(); ++i) {
    elems.push_back(random_element(gpd.group(), rng));
  }
  return transported_loop_arrow(gpd, src, std::move(elems));
}

LoopTangent random_tangent(const Groupoid& gpd, const SegmentedLoop& loop,
                           Rng& rng) {
  const std::size_t n = loop.size();
  if (gpd.space().kind == SpaceModel::Kind::FinitePointSet) {
    return build_loop_tangent(gpd, loop, std::vector<std::vector<Expr>>(n));
  }
  const std::size_t dim = gpd.space().dim;
  const FiniteGroup& grp = gpd.group();

  // Start values are free; end values are free except on the last segment,
  // where the push through the wrap arrow must return the first start value.
  std::vector<std::vector<double>> starts(n), ends(n);
  for (std::size_t d = 0; d < dim; ++d) {
    starts[0].push_back(rng.uniform(-1.0, 1.0));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const GroupElement gi = loop.connecting_arrow(i).g;
    if (i + 1 < n) {
      for (std::size_t d = 0; d < dim; ++d) {
        ends[i].push_back(rng.uniform(-1.0, 1.0));
      }
      starts[i + 1] = gpd.action().push(ends[i], gi);
    } else {
      ends[i] = gpd.action().push(starts[0], grp.inv(gi));
    }
  }

  std::vector<std::vector<Expr>> fields;
  for (std::size_t i = 0; i < n; ++i) {
    const Expr u = segment_u(loop.partition().points(), i);
    std::vector<Expr> field;
    for (std::size_t d = 0; d < dim; ++d) {
      Expr c = Expr::constant(starts[i][d]) +
               Expr::constant(ends[i][d] - starts[i][d]) * u;
      if (rng.below(2)) {
        c = c + Expr::constant(rng.uniform(-0.5, 0.5)) *
                    Expr::sin(Expr::pi() * u);
      }
      field.push_back(std::move(c));
    }
    fields.push_back(std::move(field));
  }
  return build_loop_tangent(gpd, loop, std::move(fields));
}

LoopFamily random_family(const Groupoid& gpd, Rng& rng,
                         std::size_t max_segments) {
  if (gpd.kind() != Groupoid::Kind::Action ||
      gpd.space().kind != SpaceModel::Kind::FlatTorus) {
    fail(Errc::InvalidArgument,
         "family generation needs a torus quotient groupoid");
  }
  const std::size_t dim = gpd.space().dim;
  const TorusPlan plan = make_torus_plan(gpd, rng, max_segments);
  const std::size_t n = plan.gs.size();

  const bool translate = translation_action(gpd);
  std::vector<double> shift(dim, 0.0);
  if (translate) {
    for (std::size_t d = 0; d < dim; ++d) shift[d] = rng.uniform(-1.0, 1.0);
  }

  std::vector<std::vector<Expr>> coords;
  for (std::size_t i = 0; i < n; ++i) {
    const Expr u = segment_u(plan.points, i);
    std::vector<Expr> c =
        segment_coords(plan.start[i], plan.end[i], u, rng, 0.15);
    for (std::size_t d = 0; d < dim; ++d) {
      Expr delta = Expr::constant(rng.uniform(-0.5, 0.5)) *
                   Expr::sin(Expr::pi() * u);
      if (translate) {
        delta = delta + Expr::constant(shift[d]);
      }
      c[d] = c[d] + Expr::var(Symbol::s(0)) * delta;
    }
    coords.push_back(std::move(c));
  }

  std::vector<GroupElement> arrow_elems;
  for (std::size_t i = 0; i < n; ++i) {
    arrow_elems.push_back(random_element(gpd.group(), rng));
  }
  return build_loop_family(gpd, Partition(plan.points), std::move(coords),
                           plan.gs, std::move(arrow_elems), 1, 1e-2);
}

}  // namespace holonomy
