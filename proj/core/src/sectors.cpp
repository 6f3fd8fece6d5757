// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/sectors.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "holonomy/pform.hpp"
#include "holonomy/rng.hpp"
#include "holonomy/snf.hpp"

namespace holonomy {

namespace {

std::string coords_str(const SpaceModel& space, const Point& x) {
  if (space.kind == SpaceModel::Kind::FinitePointSet) {
    return "p" + std::to_string(x.index);
  }
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (i) os << ", ";
    os << x.coords[i];
  }
  os << ")";
  return os.str();
}

/// Tracks the worst residual and its witness for one named condition.
struct WorstCase {
  CheckResult result;

  explicit WorstCase(std::string name) { result.name = std::move(name); }

  void observe(double residual, const std::string& witness) {
    if (residual > result.residual) {
      result.residual = residual;
      result.witness = witness;
    }
  }

  CheckResult finish(double tol) {
    result.pass = result.residual <= tol;
    return result;
  }
};

NerveTuple pair_tuple(const Point& x, GroupElement a, GroupElement b) {
  NerveTuple t;
  t.base = x;
  t.elems = {a, b};
  return t;
}

IntMat identity_mat(std::size_t n) {
  IntMat m(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

/// Columns of v scaled by the entries of d.
IntMat scale_columns(IntMat v, const std::vector<BigInt>& d) {
  for (auto& row : v) {
    for (std::size_t c = 0; c < d.size(); ++c) row[c] *= d[c];
  }
  return v;
}

}  // namespace

LocalSystem::LocalSystem(const Groupoid& gpd, GerbeData data)
    : data_(std::move(data)) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::InvalidArgument,
         "inner local systems require a quotient groupoid");
  }
  inertia_ = gpd.inertia();
}

Scalar LocalSystem::f(const Groupoid& gpd, const Point& x, GroupElement g,
                      GroupElement h) const {
  const SpaceModel& space = gpd.space();
  if (point_dist(space, gpd.action().act(x, g), x) > 1e-9) {
    fail(Errc::InvalidArgument,
         "gluing values live on constant loops: x.g must equal x");
  }
  if (space.kind == SpaceModel::Kind::FinitePointSet && !overrides_.empty()) {
    const auto it = overrides_.find(std::make_tuple(x.index, g, h));
    if (it != overrides_.end()) return it->second;
  }
  const GroupElement gc = gpd.group().conj(g, h);
  const Scalar num = data_.h.eval(gpd, pair_tuple(x, g, h));
  const Scalar den = data_.h.eval(gpd, pair_tuple(x, h, gc));
  return num / den;
}

PForm LocalSystem::omega(GroupElement g) const {
  if (data_.A.level() != 1) return PForm(1, data_.A.dim());
  return data_.A.at(TupleKey{g});
}

void LocalSystem::override_value(std::size_t point_index, GroupElement g,
                                 GroupElement h, Scalar value) {
  overrides_.insert_or_assign(std::make_tuple(point_index, g, h),
                              std::move(value));
}

LocalSystem restrict_to_inertia(const Groupoid& gpd,
                                const TransgressedBundle& b) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::InvalidArgument,
         "restriction to constant loops requires a quotient groupoid");
  }
  return LocalSystem(gpd, b.data());
}

VerifyReport check_inner_local_system(const Groupoid& gpd,
                                      const LocalSystem& ls,
                                      const VerifyOptions& opt) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::InvalidArgument,
         "inner local system checks require a quotient groupoid");
  }
  const SpaceModel& space = gpd.space();
  const FiniteGroup& grp = gpd.group();
  const std::size_t q = grp.order();
  const GroupElement e = grp.identity();
  const bool finite = space.kind == SpaceModel::Kind::FinitePointSet;

  VerifyReport report;
  report.seed = opt.seed;
  Rng rng(opt.seed);

  // Sampled objects (x, g) of the inertia groupoid; torus objects keep their
  // fixed component for the tangent frame of the flatness check.
  struct InertiaObject {
    Point x;
    GroupElement g = 0;
    const FixedComponent* comp = nullptr;
  };
  std::vector<InertiaObject> objects;
  const InertiaGroupoid& inertia = ls.inertia();
  if (finite) {
    for (const auto& [idx, g] : inertia.objects) {
      objects.push_back({Point::at(idx), g, nullptr});
    }
  } else {
    for (std::size_t gi = 0; gi < inertia.fixed.size(); ++gi) {
      const GroupElement g = static_cast<GroupElement>(gi);
      for (const FixedComponent& comp : inertia.fixed[gi]) {
        const std::size_t count =
            comp.dim() == 0 ? 1 : std::max<std::size_t>(1, opt.samples);
        for (std::size_t s = 0; s < count; ++s) {
          std::vector<double> x(space.dim, 0.0);
          for (std::size_t i = 0; i < space.dim; ++i) {
            x[i] = comp.offset[i].to_double();
          }
          if (s > 0) {
            for (const auto& b : comp.basis) {
              const double u = rng.uniform01();
              for (std::size_t i = 0; i < space.dim; ++i) {
                x[i] += u * static_cast<double>(b[i]);
              }
            }
          }
          objects.push_back({Point::at(mod1(x)), g, &comp});
        }
      }
    }
  }

  const auto unit_value = [&](const Point& x) {
    return ls.data().h.eval(gpd, pair_tuple(x, e, e));
  };

  // (1) On unit objects the gluing is the coboundary of u(x) = h2(x; e, e).
  {
    WorstCase w("inertia-units");
    std::vector<Point> base_points;
    if (finite) {
      for (std::size_t i = 0; i < space.point_count; ++i) {
        base_points.push_back(Point::at(i));
      }
    } else {
      for (std::size_t s = 0; s < opt.samples; ++s) {
        std::vector<double> x(space.dim);
        for (std::size_t i = 0; i < space.dim; ++i) x[i] = rng.uniform01();
        base_points.push_back(Point::at(std::move(x)));
      }
    }
    for (const Point& x : base_points) {
      for (GroupElement h = 0; h < q; ++h) {
        const Point xh = gpd.action().act(x, h);
        const Scalar v = ls.f(gpd, x, e, h) * unit_value(xh) / unit_value(x);
        w.observe(v.dist_one(),
                  coords_str(space, x) + ", h=" + grp.label(h));
      }
    }
    report.add(w.finish(opt.tol));
  }

  // (2) Inverses: f(v, a) f(i(v, a)) = 1 with i the conjugation inverse.
  {
    WorstCase w("inertia-inverse");
    for (const InertiaObject& ob : objects) {
      for (GroupElement h = 0; h < q; ++h) {
        const auto [xh, gc] = inertia_conjugate(gpd, ob.x, ob.g, h);
        const Scalar prod =
            ls.f(gpd, ob.x, ob.g, h) * ls.f(gpd, xh, gc, grp.inv(h));
        w.observe(prod.dist_one(), coords_str(space, ob.x) + ", g=" +
                                       grp.label(ob.g) + ", h=" + grp.label(h));
      }
    }
    report.add(w.finish(opt.tol));
  }

  // (3) Morphism under composition of conjugation arrows.
  {
    WorstCase w("inertia-morphism");
    for (const InertiaObject& ob : objects) {
      for (GroupElement h1 = 0; h1 < q; ++h1) {
        const auto [xh, gc] = inertia_conjugate(gpd, ob.x, ob.g, h1);
        for (GroupElement h2 = 0; h2 < q; ++h2) {
          const Scalar lhs = ls.f(gpd, ob.x, ob.g, grp.mul(h1, h2));
          const Scalar rhs =
              ls.f(gpd, ob.x, ob.g, h1) * ls.f(gpd, xh, gc, h2);
          w.observe((lhs / rhs).dist_one(),
                    coords_str(space, ob.x) + ", g=" + grp.label(ob.g) +
                        ", h1=" + grp.label(h1) + ", h2=" + grp.label(h2));
        }
      }
    }
    report.add(w.finish(opt.tol));
  }

  // (4) Flatness of the sector connection on tangent pairs to the fixed set:
  // d(A_g) and t*B - s*B both vanish there.
  if (!finite) {
    WorstCase w("inertia-flat");
    const PForm b2 = ls.data().B.at(TupleKey{});
    std::map<GroupElement, PForm> curl;
    for (const InertiaObject& ob : objects) {
      const std::size_t cdim = ob.comp->dim();
      if (cdim < 2) continue;
      auto it = curl.find(ob.g);
      if (it == curl.end()) {
        it = curl.emplace(ob.g, exterior_d(ls.omega(ob.g))).first;
      }
      std::vector<std::vector<double>> frame;
      for (const auto& b : ob.comp->basis) {
        std::vector<double> vec(space.dim);
        for (std::size_t i = 0; i < space.dim; ++i) {
          vec[i] = static_cast<double>(b[i]);
        }
        frame.push_back(std::move(vec));
      }
      for (std::size_t i = 0; i < cdim; ++i) {
        for (std::size_t j = i + 1; j < cdim; ++j) {
          const std::string where = coords_str(space, ob.x) +
                                    ", g=" + grp.label(ob.g) + ", pair (" +
                                    std::to_string(i) + ", " +
                                    std::to_string(j) + ")";
          const double rc = std::abs(
              eval_form(it->second, ob.x.coords, {frame[i], frame[j]}));
          w.observe(rc, "d(A_g) at " + where);
          if (!ls.data().B.is_zero()) {
            const std::vector<double> pi = gpd.action().push(frame[i], ob.g);
            const std::vector<double> pj = gpd.action().push(frame[j], ob.g);
            const std::complex<double> tb =
                eval_form(b2, ob.x.coords, {pi, pj});
            const std::complex<double> sb =
                eval_form(b2, ob.x.coords, {frame[i], frame[j]});
            w.observe(std::abs(tb - sb), "t*B - s*B at " + where);
          }
        }
      }
    }
    report.add(w.finish(opt.tol));
  }

  return report;
}

TorsionCocycle::TorsionCocycle(FiniteGroup g,
                               std::vector<std::vector<Rational>> angles,
                               std::string class_id)
    : group_(std::move(g)),
      angles_(std::move(angles)),
      class_id_(std::move(class_id)) {}

TorsionCocycle TorsionCocycle::from_angles(
    const FiniteGroup& g, std::vector<std::vector<Rational>> angles,
    std::string class_id) {
  const std::size_t q = g.order();
  if (angles.size() != q) {
    fail(Errc::InvalidArgument, "angle table must have one row per element");
  }
  for (const auto& row : angles) {
    if (row.size() != q) {
      fail(Errc::InvalidArgument,
           "angle table must have one column per element");
    }
  }
  const GroupElement e = g.identity();
  const Rational shift = angles[e][e];
  for (auto& row : angles) {
    for (auto& a : row) a = (a - shift).mod1();
  }
  for (GroupElement a = 0; a < q; ++a) {
    for (GroupElement b = 0; b < q; ++b) {
      for (GroupElement c = 0; c < q; ++c) {
        const Rational r = (angles[b][c] - angles[g.mul(a, b)][c] +
                            angles[a][g.mul(b, c)] - angles[a][b])
                               .mod1();
        if (!r.is_zero()) {
          fail(Errc::InvalidArgument,
               "not a cocycle at (" + g.label(a) + ", " + g.label(b) + ", " +
                   g.label(c) + ")");
        }
      }
    }
  }
  return TorsionCocycle(g, std::move(angles), std::move(class_id));
}

TorsionCocycle TorsionCocycle::trivial(const FiniteGroup& g) {
  std::vector<std::vector<Rational>> angles(
      g.order(), std::vector<Rational>(g.order()));
  return TorsionCocycle(g, std::move(angles), "0");
}

bool TorsionCocycle::is_trivial() const {
  for (const auto& row : angles_) {
    for (const auto& a : row) {
      if (!a.is_zero()) return false;
    }
  }
  return true;
}

SchurData h2_finite_group(const FiniteGroup& g, std::size_t cap) {
  const std::size_t q = g.order();
  if (q > cap) {
    fail(Errc::GroupTooLarge, "order " + std::to_string(q) +
                                  " exceeds the cap " + std::to_string(cap));
  }
  SchurData out;
  if (q == 1) return out;

  const GroupElement e = g.identity();
  const BigInt m = static_cast<std::uint64_t>(q);
  const BigInt expo = g.exponent();

  // Classes are represented by cochains with values in (1/m)Z/Z supported on
  // pairs of non-identity elements; normalized cochains vanish on identity
  // pairs, and the constraints on triples with an identity entry hold
  // automatically for them.
  std::vector<std::size_t> eidx(q, 0);
  std::vector<GroupElement> elems;
  for (GroupElement a = 0; a < q; ++a) {
    if (a == e) continue;
    eidx[a] = elems.size();
    elems.push_back(a);
  }
  const std::size_t n1 = elems.size();
  const std::size_t n2 = n1 * n1;
  const auto pidx = [&](GroupElement a, GroupElement b) {
    return eidx[a] * n1 + eidx[b];
  };

  // Cocycle lattice Y = { x : D2 x = 0 mod m } from the level-3 coboundary
  // rows; basis B_Y = V diag(d) from the Smith form of the row lattice.
  RowLatticeAccumulator rows(n2);
  for (GroupElement a : elems) {
    for (GroupElement b : elems) {
      for (GroupElement c : elems) {
        std::vector<BigInt> row(n2, 0);
        row[pidx(b, c)] += 1;
        const GroupElement ab = g.mul(a, b);
        if (ab != e) row[pidx(ab, c)] -= 1;
        const GroupElement bc = g.mul(b, c);
        if (bc != e) row[pidx(a, bc)] += 1;
        row[pidx(a, b)] -= 1;
        rows.add_row(std::move(row));
      }
    }
  }
  const IntMat constraints = rows.basis();

  SmithOptions track_v;
  track_v.track_V = true;
  track_v.track_Vinv = true;

  std::vector<BigInt> d(n2, 1);
  IntMat v = identity_mat(n2);
  IntMat vinv = identity_mat(n2);
  if (!constraints.empty()) {
    SmithResult s = smith_normal_form(constraints, track_v);
    for (std::size_t i = 0; i < s.rank; ++i) {
      d[i] = m / boost::multiprecision::gcd(s.diag[i], m);
    }
    v = std::move(s.V);
    vinv = std::move(s.Vinv);
  }

  // Coboundary lattice W = G1 Z^{n1} + m Z^{n2} inside Y. A gauge whose
  // coboundary has values in (1/m)Z/Z itself has values in
  // (1/(m exponent))Z/Z, so G1 y = D1 y / exponent on the sublattice
  // Y1 = { y : D1 y = 0 mod exponent }.
  IntMat d1(n2, std::vector<BigInt>(n1, 0));
  for (GroupElement a : elems) {
    for (GroupElement b : elems) {
      auto& row = d1[pidx(a, b)];
      row[eidx[b]] += 1;
      const GroupElement ab = g.mul(a, b);
      if (ab != e) row[eidx[ab]] -= 1;
      row[eidx[a]] += 1;
    }
  }
  SmithResult s1 = smith_normal_form(d1, track_v);
  std::vector<BigInt> d1d(n1, 1);
  for (std::size_t i = 0; i < s1.rank; ++i) {
    d1d[i] = expo / boost::multiprecision::gcd(s1.diag[i], expo);
  }
  const IntMat gauge_basis = scale_columns(s1.V, d1d);
  IntMat g1 = mat_mul(d1, gauge_basis);
  for (auto& row : g1) {
    for (auto& x : row) {
      if (x % expo != 0) {
        fail(Errc::InvalidArgument, "internal: gauge lattice division failed");
      }
      x /= expo;
    }
  }

  // W in Y-coordinates: x = B_Y c inverts as c = diag(d)^{-1} Vinv x, exact
  // for every lattice vector of W.
  const auto to_y = [&](const std::vector<BigInt>& x) {
    std::vector<BigInt> c = mat_vec(vinv, x);
    for (std::size_t i = 0; i < n2; ++i) {
      if (c[i] % d[i] != 0) {
        fail(Errc::InvalidArgument,
             "internal: cocycle lattice division failed");
      }
      c[i] /= d[i];
    }
    return c;
  };

  RowLatticeAccumulator wcols(n2);
  for (std::size_t j = 0; j < n1; ++j) {
    std::vector<BigInt> col(n2);
    for (std::size_t i = 0; i < n2; ++i) col[i] = g1[i][j];
    wcols.add_row(to_y(col));
  }
  for (std::size_t j = 0; j < n2; ++j) {
    std::vector<BigInt> col(n2, 0);
    col[j] = m;
    wcols.add_row(to_y(col));
  }

  // Quotient Z^{n2} / W from the Smith form of the column matrix of W.
  const IntMat wbasis = wcols.basis();
  IntMat wmat(n2, std::vector<BigInt>(wbasis.size(), 0));
  for (std::size_t r = 0; r < wbasis.size(); ++r) {
    for (std::size_t i = 0; i < n2; ++i) wmat[i][r] = wbasis[r][i];
  }
  SmithOptions track_u;
  track_u.track_Uinv = true;
  const SmithResult sw = smith_normal_form(wmat, track_u);
  if (sw.rank != n2) {
    fail(Errc::InvalidArgument,
         "internal: coboundary lattice is rank deficient");
  }

  for (std::size_t i = 0; i < n2; ++i) {
    const BigInt t = sw.diag[i];
    if (t <= 1) continue;
    out.invariant_factors.push_back(t.convert_to<std::uint64_t>());
    // Generator of the factor in Y-coordinates is column i of Uinv; cochain
    // coordinates are x = V diag(d) y.
    std::vector<BigInt> y(n2);
    for (std::size_t r = 0; r < n2; ++r) y[r] = d[r] * sw.Uinv[r][i];
    const std::vector<BigInt> x = mat_vec(v, y);
    std::vector<std::vector<Rational>> angles(q, std::vector<Rational>(q));
    for (GroupElement a : elems) {
      for (GroupElement b : elems) {
        BigInt r = x[pidx(a, b)] % m;
        if (r < 0) r += m;
        angles[a][b] = Rational(r.convert_to<std::int64_t>(),
                                static_cast<std::int64_t>(q));
      }
    }
    out.representatives.push_back(TorsionCocycle::from_angles(
        g, std::move(angles), std::to_string(out.invariant_factors.size())));
  }
  return out;
}

GerbeData torsion_gerbe(const Groupoid& gpd, const TorsionCocycle& eps) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::InvalidArgument,
         "flat group cocycle gerbes require a quotient groupoid");
  }
  const FiniteGroup& grp = gpd.group();
  const FiniteGroup& cg = eps.group();
  const std::size_t q = grp.order();
  if (cg.order() != q) {
    fail(Errc::DomainMismatch,
         "cocycle group order does not match the groupoid group");
  }
  for (GroupElement a = 0; a < q; ++a) {
    for (GroupElement b = 0; b < q; ++b) {
      if (grp.mul(a, b) != cg.mul(a, b)) {
        fail(Errc::DomainMismatch,
             "cocycle group multiplication does not match the groupoid group");
      }
    }
  }
  std::map<TupleKey, Scalar> values;
  for (GroupElement a = 0; a < q; ++a) {
    for (GroupElement b = 0; b < q; ++b) {
      values.emplace(TupleKey{a, b}, eps.eval(a, b));
    }
  }
  const std::size_t dim =
      gpd.space().kind == SpaceModel::Kind::FlatTorus ? gpd.space().dim : 0;
  GerbeData out;
  out.h = CochainFunction::group_table(gpd, 2, std::move(values));
  out.A = FormFamily(FormFamily::Keying::Action, 1, 1, dim);
  out.B = FormFamily(FormFamily::Keying::Action, 0, 2, dim);
  return out;
}

SectorDecomposition sector_decomposition(const Groupoid& gpd,
                                         const TransgressedBundle* bundle) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::InvalidArgument,
         "sector decomposition requires a quotient groupoid");
  }
  const SpaceModel& space = gpd.space();
  const ConjugacyData conj = conjugacy_data(gpd.group());
  const InertiaGroupoid inertia = gpd.inertia();
  std::optional<LocalSystem> ls;
  if (bundle != nullptr) ls.emplace(gpd, bundle->data());

  SectorDecomposition out;
  for (std::size_t c = 0; c < conj.class_reps.size(); ++c) {
    Sector sec;
    sec.rep = conj.class_reps[c];
    sec.class_members = conj.classes[c];
    sec.centralizer = conj.centralizers[c];
    if (space.kind == SpaceModel::Kind::FinitePointSet) {
      for (const auto& [idx, g] : inertia.objects) {
        if (g == sec.rep) sec.fixed_points.push_back(idx);
      }
      if (ls) {
        for (std::size_t idx : sec.fixed_points) {
          std::vector<Scalar> row;
          for (GroupElement h : sec.centralizer) {
            row.push_back(ls->f(gpd, Point::at(idx), sec.rep, h));
          }
          sec.values.push_back(std::move(row));
        }
      }
    } else {
      sec.components = inertia.fixed[sec.rep];
      if (ls) {
        for (const FixedComponent& comp : sec.components) {
          std::vector<double> x(space.dim);
          for (std::size_t i = 0; i < space.dim; ++i) {
            x[i] = comp.offset[i].to_double();
          }
          const Point p = Point::at(mod1(std::move(x)));
          std::vector<Scalar> row;
          for (GroupElement h : sec.centralizer) {
            row.push_back(ls->f(gpd, p, sec.rep, h));
          }
          sec.values.push_back(std::move(row));
        }
      }
    }
    out.sectors.push_back(std::move(sec));
  }
  return out;
}

}  // namespace holonomy
