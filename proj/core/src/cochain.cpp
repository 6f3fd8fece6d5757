// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/cochain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "holonomy/quadrature.hpp"
#include "holonomy/rng.hpp"

namespace holonomy {

namespace {

constexpr std::size_t kTupleCap = 1'000'000;

bool next_tuple(TupleKey& t, std::uint32_t radix) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (++t[i] < radix) return true;
    t[i] = 0;
  }
  return false;
}

std::size_t tuple_count(std::uint32_t radix, std::size_t len) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < len; ++i) {
    if (count > kTupleCap / std::max<std::uint32_t>(radix, 1)) {
      fail(Errc::LevelTooLarge, "nerve tuple count exceeds the cap");
    }
    count *= radix;
  }
  return count;
}

std::string key_str(const TupleKey& key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(key[i]);
  }
  return out + ")";
}

std::string coords_str(const std::vector<double>& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ",";
    os << x[i];
  }
  os << ")";
  return os.str();
}

void require_nonzero(const Scalar& v) {
  if (!v.is_exact() && std::abs(v.value()) == 0.0) {
    fail(Errc::InvalidArgument, "cochain values must be nonzero");
  }
}

void require_nonzero(const Expr& e) {
  if (e.is_zero()) {
    fail(Errc::InvalidArgument, "cochain values must be nonzero expressions");
  }
}

std::size_t space_dim(const Groupoid& gpd) {
  return gpd.space().kind == SpaceModel::Kind::FlatTorus ? gpd.space().dim : 0;
}

EvalEnv env_at(const std::vector<double>& coords) {
  EvalEnv env;
  env.set_coords(coords);
  return env;
}

/// Straight sample path in the base used by the branch-free connection
/// checks: endpoints in [0,1)^d, hence the whole segment stays inside the
/// closed fundamental box.
struct SamplePath {
  std::vector<double> from;
  std::vector<double> to;

  std::vector<double> at(double t) const {
    std::vector<double> x(from.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = from[i] + t * (to[i] - from[i]);
    }
    return x;
  }
  std::vector<double> velocity() const {
    std::vector<double> v(from.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = to[i] - from[i];
    return v;
  }
};

std::complex<double> integrate_form_along(const PForm& w, const SamplePath& p,
                                          std::size_t quadrature_n) {
  if (w.is_zero()) return 0.0;
  const std::vector<double> vel = p.velocity();
  auto f = [&](double t) { return eval_form(w, p.at(t), {vel}); };
  return integrate_adaptive(f, 0.0, 1.0, quadrature_n, 1e-10).value;
}

}  // namespace

// --------------------------------------------------------------------------
// CochainFunction

CochainFunction CochainFunction::constant_one(std::size_t level) {
  CochainFunction f;
  f.rep_ = Rep::One;
  f.level_ = level;
  return f;
}

CochainFunction CochainFunction::point_table(const Groupoid& gpd,
                                             std::size_t level,
                                             std::map<TupleKey, Scalar> values) {
  if (gpd.kind() != Groupoid::Kind::Action ||
      gpd.space().kind != SpaceModel::Kind::FinitePointSet) {
    fail(Errc::DomainMismatch,
         "point tables require a quotient groupoid over a finite point set");
  }
  const std::vector<NerveTuple> nerve = gpd.enumerate_nerve(level);
  if (values.size() != nerve.size()) {
    fail(Errc::InvalidArgument, "point table size does not match the nerve");
  }
  for (const NerveTuple& tup : nerve) {
    TupleKey key;
    key.push_back(static_cast<std::uint32_t>(tup.base.index));
    for (GroupElement g : tup.elems) key.push_back(g);
    auto it = values.find(key);
    if (it == values.end()) {
      fail(Errc::InvalidArgument, "point table missing tuple " + key_str(key));
    }
    require_nonzero(it->second);
  }
  CochainFunction f;
  f.rep_ = Rep::PointTable;
  f.level_ = level;
  f.table_ = std::move(values);
  return f;
}

CochainFunction CochainFunction::group_table(const Groupoid& gpd,
                                             std::size_t level,
                                             std::map<TupleKey, Scalar> values) {
  if (gpd.kind() != Groupoid::Kind::Action) {
    fail(Errc::DomainMismatch, "group tables require a quotient groupoid");
  }
  const auto n = static_cast<std::uint32_t>(gpd.group().order());
  if (values.size() != tuple_count(n, level)) {
    fail(Errc::InvalidArgument, "group table size does not match the nerve");
  }
  TupleKey key(level, 0);
  do {
    auto it = values.find(key);
    if (it == values.end()) {
      fail(Errc::InvalidArgument, "group table missing tuple " + key_str(key));
    }
    require_nonzero(it->second);
  } while (next_tuple(key, n));
  CochainFunction f;
  f.rep_ = Rep::GroupTable;
  f.level_ = level;
  f.table_ = std::move(values);
  return f;
}

CochainFunction CochainFunction::group_expr(const Groupoid& gpd,
                                            std::size_t level,
                                            std::map<TupleKey, Expr> values) {
  if (gpd.kind() != Groupoid::Kind::Action ||
      gpd.space().kind != SpaceModel::Kind::FlatTorus) {
    fail(Errc::DomainMismatch,
         "expression cochains require a quotient groupoid over a torus");
  }
  const auto n = static_cast<std::uint32_t>(gpd.group().order());
  if (values.size() != tuple_count(n, level)) {
    fail(Errc::InvalidArgument,
         "expression cochain size does not match the nerve");
  }
  TupleKey key(level, 0);
  do {
    auto it = values.find(key);
    if (it == values.end()) {
      fail(Errc::InvalidArgument,
           "expression cochain missing tuple " + key_str(key));
    }
    require_nonzero(it->second);
  } while (next_tuple(key, n));
  CochainFunction f;
  f.rep_ = Rep::GroupExpr;
  f.level_ = level;
  f.exprs_ = std::move(values);
  return f;
}

CochainFunction CochainFunction::chart_expr(const Groupoid& gpd,
                                            std::size_t level,
                                            std::map<TupleKey, Expr> values) {
  if (gpd.kind() != Groupoid::Kind::Cover) {
    fail(Errc::DomainMismatch, "chart cochains require a cover groupoid");
  }
  const auto n = static_cast<std::uint32_t>(gpd.charts().size());
  for (const auto& [key, e] : values) {
    if (key.size() != level + 1) {
      fail(Errc::InvalidArgument,
           "chart chain length must be level + 1 at " + key_str(key));
    }
    for (std::uint32_t id : key) {
      if (id >= n) {
        fail(Errc::InvalidArgument, "chart id out of range at " + key_str(key));
      }
    }
    require_nonzero(e);
  }
  CochainFunction f;
  f.rep_ = Rep::ChartExpr;
  f.level_ = level;
  f.exprs_ = std::move(values);
  return f;
}

Scalar CochainFunction::eval(const Groupoid& gpd, const NerveTuple& tup) const {
  switch (rep_) {
    case Rep::One: return Scalar();
    case Rep::PointTable: {
      if (tup.elems.size() != level_) {
        fail(Errc::DomainMismatch, "tuple length does not match cochain level");
      }
      TupleKey key;
      key.push_back(static_cast<std::uint32_t>(tup.base.index));
      for (GroupElement g : tup.elems) key.push_back(g);
      auto it = table_.find(key);
      if (it == table_.end()) {
        fail(Errc::DomainMismatch, "tuple outside the table " + key_str(key));
      }
      return it->second;
    }
    case Rep::GroupTable: {
      if (tup.elems.size() != level_) {
        fail(Errc::DomainMismatch, "tuple length does not match cochain level");
      }
      TupleKey key(tup.elems.begin(), tup.elems.end());
      auto it = table_.find(key);
      if (it == table_.end()) {
        fail(Errc::DomainMismatch, "tuple outside the table " + key_str(key));
      }
      return it->second;
    }
    case Rep::GroupExpr: {
      if (tup.elems.size() != level_) {
        fail(Errc::DomainMismatch, "tuple length does not match cochain level");
      }
      TupleKey key(tup.elems.begin(), tup.elems.end());
      auto it = exprs_.find(key);
      if (it == exprs_.end()) {
        fail(Errc::DomainMismatch, "tuple outside the data " + key_str(key));
      }
      return Scalar::of(it->second.eval(env_at(tup.base.coords)));
    }
    case Rep::ChartExpr: {
      if (tup.charts.size() != level_ + 1) {
        fail(Errc::DomainMismatch, "chain length does not match cochain level");
      }
      auto it = exprs_.find(tup.charts);
      if (it == exprs_.end()) {
        fail(Errc::DomainMismatch,
             "chain without data " + key_str(tup.charts));
      }
      return Scalar::of(it->second.eval(env_at(tup.base.coords)));
    }
  }
  fail(Errc::InvalidArgument, "corrupt cochain representation");
}

CochainFunction CochainFunction::product(const Groupoid& gpd,
                                         const CochainFunction& o) const {
  if (level_ != o.level_) {
    fail(Errc::DomainMismatch, "cochain levels must agree in products");
  }
  if (rep_ == Rep::One) return o;
  if (o.rep_ == Rep::One) return *this;

  if (rep_ == Rep::GroupTable && o.rep_ == Rep::GroupTable) {
    std::map<TupleKey, Scalar> out = table_;
    for (auto& [key, v] : out) v = v * o.table_.at(key);
    return group_table(gpd, level_, std::move(out));
  }
  if (rep_ == Rep::PointTable && o.rep_ == Rep::PointTable) {
    std::map<TupleKey, Scalar> out = table_;
    for (auto& [key, v] : out) v = v * o.table_.at(key);
    return point_table(gpd, level_, std::move(out));
  }
  if ((rep_ == Rep::GroupTable && o.rep_ == Rep::PointTable) ||
      (rep_ == Rep::PointTable && o.rep_ == Rep::GroupTable)) {
    const CochainFunction& pt = rep_ == Rep::PointTable ? *this : o;
    const CochainFunction& gt = rep_ == Rep::PointTable ? o : *this;
    std::map<TupleKey, Scalar> out = pt.table_;
    for (auto& [key, v] : out) {
      TupleKey sub(key.begin() + 1, key.end());
      v = v * gt.table_.at(sub);
    }
    return point_table(gpd, level_, std::move(out));
  }
  if (rep_ == Rep::GroupExpr && o.rep_ == Rep::GroupExpr) {
    std::map<TupleKey, Expr> out = exprs_;
    for (auto& [key, e] : out) e = e * o.exprs_.at(key);
    return group_expr(gpd, level_, std::move(out));
  }
  if ((rep_ == Rep::GroupTable && o.rep_ == Rep::GroupExpr) ||
      (rep_ == Rep::GroupExpr && o.rep_ == Rep::GroupTable)) {
    const CochainFunction& ex = rep_ == Rep::GroupExpr ? *this : o;
    const CochainFunction& gt = rep_ == Rep::GroupExpr ? o : *this;
    std::map<TupleKey, Expr> out = ex.exprs_;
    for (auto& [key, e] : out) {
      e = e * Expr::constant(gt.table_.at(key).value());
    }
    return group_expr(gpd, level_, std::move(out));
  }
  if (rep_ == Rep::ChartExpr && o.rep_ == Rep::ChartExpr) {
    // Absent chain entries are treated as one: the union of the domains.
    std::map<TupleKey, Expr> out = exprs_;
    for (const auto& [key, e] : o.exprs_) {
      auto it = out.find(key);
      if (it == out.end()) {
        out[key] = e;
      } else {
        it->second = it->second * e;
      }
    }
    return chart_expr(gpd, level_, std::move(out));
  }
  fail(Errc::DomainMismatch, "incompatible cochain representations");
}

CochainFunction CochainFunction::inverse() const { return pow(-1); }

CochainFunction CochainFunction::pow(std::int64_t k) const {
  CochainFunction f = *this;
  switch (rep_) {
    case Rep::One: return f;
    case Rep::PointTable:
    case Rep::GroupTable:
      for (auto& [key, v] : f.table_) v = v.pow(k);
      return f;
    case Rep::GroupExpr:
    case Rep::ChartExpr:
      for (auto& [key, e] : f.exprs_) e = e.pow(k);
      return f;
  }
  fail(Errc::InvalidArgument, "corrupt cochain representation");
}

// --------------------------------------------------------------------------
// Cech coboundary on functions

namespace {

/// Face keys of a level-(k+1) tuple: position 0 drops the first entry,
/// position i composes entries i-1 and i, position k+1 drops the last.
TupleKey face_key(const FiniteGroup& grp, const TupleKey& t, std::size_t face) {
  const std::size_t k1 = t.size();
  TupleKey out;
  out.reserve(k1 - 1);
  if (face == 0) {
    out.assign(t.begin() + 1, t.end());
  } else if (face == k1) {
    out.assign(t.begin(), t.end() - 1);
  } else {
    for (std::size_t i = 0; i + 1 < k1; ++i) {
      if (i + 1 < face) {
        out.push_back(t[i]);
      } else if (i + 1 == face) {
        out.push_back(grp.mul(static_cast<GroupElement>(t[i]),
                              static_cast<GroupElement>(t[i + 1])));
      } else {
        out.push_back(t[i + 1]);
      }
    }
  }
  return out;
}

TupleKey chain_face(const TupleKey& chain, std::size_t face) {
  TupleKey out;
  out.reserve(chain.size() - 1);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i != face) out.push_back(chain[i]);
  }
  return out;
}

}  // namespace

CochainFunction cech_delta(const Groupoid& gpd, const CochainFunction& sigma) {
  const std::size_t k = sigma.level();
  switch (sigma.rep()) {
    case CochainFunction::Rep::One:
      return CochainFunction::constant_one(k + 1);

    case CochainFunction::Rep::GroupTable: {
      const FiniteGroup& grp = gpd.group();
      const auto n = static_cast<std::uint32_t>(grp.order());
      tuple_count(n, k + 1);
      std::map<TupleKey, Scalar> out;
      TupleKey t(k + 1, 0);
      do {
        Scalar acc;
        for (std::size_t face = 0; face <= k + 1; ++face) {
          const Scalar v = sigma.table().at(face_key(grp, t, face));
          acc = face % 2 == 0 ? acc * v : acc / v;
        }
        out[t] = acc;
      } while (next_tuple(t, n));
      return CochainFunction::group_table(gpd, k + 1, std::move(out));
    }

    case CochainFunction::Rep::PointTable: {
      const FiniteGroup& grp = gpd.group();
      std::map<TupleKey, Scalar> out;
      for (const NerveTuple& tup : gpd.enumerate_nerve(k + 1)) {
        TupleKey t(tup.elems.begin(), tup.elems.end());
        TupleKey full;
        full.push_back(static_cast<std::uint32_t>(tup.base.index));
        full.insert(full.end(), t.begin(), t.end());
        Scalar acc;
        for (std::size_t face = 0; face <= k + 1; ++face) {
          TupleKey key;
          if (face == 0) {
            const Point moved =
                gpd.action().act(tup.base, static_cast<GroupElement>(t[0]));
            key.push_back(static_cast<std::uint32_t>(moved.index));
          } else {
            key.push_back(static_cast<std::uint32_t>(tup.base.index));
          }
          const TupleKey rest = face_key(grp, t, face);
          key.insert(key.end(), rest.begin(), rest.end());
          const Scalar v = sigma.table().at(key);
          acc = face % 2 == 0 ? acc * v : acc / v;
        }
        out[full] = acc;
      }
      return CochainFunction::point_table(gpd, k + 1, std::move(out));
    }

    case CochainFunction::Rep::GroupExpr: {
      const FiniteGroup& grp = gpd.group();
      const auto n = static_cast<std::uint32_t>(grp.order());
      tuple_count(n, k + 1);
      std::map<TupleKey, Expr> out;
      TupleKey t(k + 1, 0);
      do {
        Expr acc = Expr::constant(1.0);
        for (std::size_t face = 0; face <= k + 1; ++face) {
          Expr v = sigma.exprs().at(face_key(grp, t, face));
          if (face == 0) {
            v = v.subst(affine_subst(
                gpd.action().map(static_cast<GroupElement>(t[0]))));
          }
          acc = face % 2 == 0 ? acc * v : acc / v;
        }
        out[t] = std::move(acc);
      } while (next_tuple(t, n));
      return CochainFunction::group_expr(gpd, k + 1, std::move(out));
    }

    case CochainFunction::Rep::ChartExpr: {
      const auto n = static_cast<std::uint32_t>(gpd.charts().size());
      tuple_count(n, k + 2);
      std::map<TupleKey, Expr> out;
      TupleKey chain(k + 2, 0);
      do {
        Expr acc = Expr::constant(1.0);
        bool complete = true;
        for (std::size_t face = 0; face < k + 2; ++face) {
          auto it = sigma.exprs().find(chain_face(chain, face));
          if (it == sigma.exprs().end()) {
            complete = false;
            break;
          }
          acc = face % 2 == 0 ? acc * it->second : acc / it->second;
        }
        if (complete) out[chain] = std::move(acc);
      } while (next_tuple(chain, n));
      return CochainFunction::chart_expr(gpd, k + 1, std::move(out));
    }
  }
  fail(Errc::InvalidArgument, "corrupt cochain representation");
}

// --------------------------------------------------------------------------
// FormFamily

FormFamily::FormFamily(Keying keying, std::size_t level, std::size_t degree,
                       std::size_t dim)
    : keying_(keying), level_(level), degree_(degree), dim_(dim) {}

FormFamily FormFamily::single(PForm w) {
  FormFamily f(Keying::Action, 0, w.degree(), w.dim());
  if (!w.is_zero()) f.forms_[{}] = std::move(w);
  return f;
}

FormFamily FormFamily::action_family(std::size_t level, std::size_t degree,
                                     std::size_t dim,
                                     std::map<TupleKey, PForm> forms) {
  FormFamily f(Keying::Action, level, degree, dim);
  for (auto& [key, w] : forms) {
    f.set(key, std::move(w));
  }
  return f;
}

FormFamily FormFamily::cover_family(std::size_t level, std::size_t degree,
                                    std::size_t dim,
                                    std::map<TupleKey, PForm> forms) {
  FormFamily f(Keying::Cover, level, degree, dim);
  for (auto& [key, w] : forms) {
    f.set(key, std::move(w));
  }
  return f;
}

bool FormFamily::is_zero() const {
  for (const auto& [key, w] : forms_) {
    if (!w.is_zero()) return false;
  }
  return true;
}

void FormFamily::check_key(const TupleKey& key) const {
  const std::size_t expect = keying_ == Keying::Action ? level_ : level_ + 1;
  if (key.size() != expect) {
    fail(Errc::DomainMismatch, "form family key length mismatch at " +
                                   key_str(key));
  }
}

PForm FormFamily::at(const TupleKey& key) const {
  check_key(key);
  auto it = forms_.find(key);
  return it == forms_.end() ? PForm(degree_, dim_) : it->second;
}

void FormFamily::set(TupleKey key, PForm w) {
  check_key(key);
  if (w.degree() != degree_ || w.dim() != dim_) {
    fail(Errc::DomainMismatch, "form degree or dimension mismatch at " +
                                   key_str(key));
  }
  if (w.is_zero()) {
    forms_.erase(key);
  } else {
    forms_[std::move(key)] = std::move(w);
  }
}

FormFamily FormFamily::operator+(const FormFamily& o) const {
  if (keying_ != o.keying_ || level_ != o.level_ || degree_ != o.degree_ ||
      dim_ != o.dim_) {
    fail(Errc::DomainMismatch, "form family shapes must agree in sums");
  }
  FormFamily out = *this;
  for (const auto& [key, w] : o.forms_) {
    out.set(key, out.at(key) + w);
  }
  return out;
}

FormFamily FormFamily::operator-() const {
  FormFamily out(keying_, level_, degree_, dim_);
  for (const auto& [key, w] : forms_) out.forms_[key] = -w;
  return out;
}

FormFamily FormFamily::operator-(const FormFamily& o) const {
  return *this + (-o);
}

// --------------------------------------------------------------------------
// Cech coboundary on forms, dlog, exterior derivative

FormFamily cech_delta_form(const Groupoid& gpd, const FormFamily& w) {
  const std::size_t k = w.level();
  if (w.keying() == FormFamily::Keying::Action) {
    if (gpd.kind() != Groupoid::Kind::Action) {
      fail(Errc::DomainMismatch, "keying does not match the groupoid");
    }
    FormFamily out(FormFamily::Keying::Action, k + 1, w.degree(), w.dim());
    if (w.dim() == 0) return out;
    const FiniteGroup& grp = gpd.group();
    const auto n = static_cast<std::uint32_t>(grp.order());
    tuple_count(n, k + 1);
    TupleKey t(k + 1, 0);
    do {
      PForm acc = pullback_form(w.at(face_key(grp, t, 0)),
                                gpd.action().map(static_cast<GroupElement>(t[0])));
      for (std::size_t face = 1; face <= k + 1; ++face) {
        const PForm v = w.at(face_key(grp, t, face));
        acc = face % 2 == 0 ? acc + v : acc - v;
      }
      if (!acc.is_zero()) out.set(t, std::move(acc));
    } while (next_tuple(t, n));
    return out;
  }

  if (gpd.kind() != Groupoid::Kind::Cover) {
    fail(Errc::DomainMismatch, "keying does not match the groupoid");
  }
  FormFamily out(FormFamily::Keying::Cover, k + 1, w.degree(), w.dim());
  const auto n = static_cast<std::uint32_t>(gpd.charts().size());
  tuple_count(n, k + 2);
  TupleKey chain(k + 2, 0);
  do {
    PForm acc(w.degree(), w.dim());
    for (std::size_t face = 0; face < k + 2; ++face) {
      const PForm v = w.at(chain_face(chain, face));
      acc = face % 2 == 0 ? acc + v : acc - v;
    }
    if (!acc.is_zero()) out.set(chain, std::move(acc));
  } while (next_tuple(chain, n));
  return out;
}

FormFamily dlog_family(const Groupoid& gpd, const CochainFunction& h,
                       std::size_t dim) {
  const bool cover = h.rep() == CochainFunction::Rep::ChartExpr;
  FormFamily out(cover ? FormFamily::Keying::Cover : FormFamily::Keying::Action,
                 h.level(), 1, dim);
  switch (h.rep()) {
    case CochainFunction::Rep::One:
    case CochainFunction::Rep::PointTable:
    case CochainFunction::Rep::GroupTable:
      return out;
    case CochainFunction::Rep::GroupExpr:
    case CochainFunction::Rep::ChartExpr:
      for (const auto& [key, e] : h.exprs()) {
        PForm w = dlog(e, dim);
        if (!w.is_zero()) out.set(key, std::move(w));
      }
      return out;
  }
  fail(Errc::InvalidArgument, "corrupt cochain representation");
}

FormFamily exterior_d_family(const FormFamily& w) {
  FormFamily out(w.keying(), w.level(), w.degree() + 1, w.dim());
  for (const auto& [key, form] : w.forms()) {
    PForm d = exterior_d(form);
    if (!d.is_zero()) out.set(key, std::move(d));
  }
  return out;
}

// --------------------------------------------------------------------------
// Total coboundaries

LineData gauge_coboundary(const Groupoid& gpd, const CochainFunction& f) {
  if (f.level() != 0) {
    fail(Errc::InvalidArgument, "gauge data must be a level-0 function");
  }
  LineData out;
  out.h = cech_delta(gpd, f);
  out.A = -dlog_family(gpd, f, space_dim(gpd));
  return out;
}

GerbeData total_coboundary(const Groupoid& gpd, const LineData& c) {
  if (c.h.level() != 1 || c.A.level() != 0) {
    fail(Errc::InvalidArgument, "degree-1 data must be (level-1 h, level-0 A)");
  }
  GerbeData out;
  out.h = cech_delta(gpd, c.h);
  out.A = cech_delta_form(gpd, c.A) + dlog_family(gpd, c.h, c.A.dim());
  out.B = exterior_d_family(c.A);
  return out;
}

GerbeResidual total_coboundary(const Groupoid& gpd, const GerbeData& c) {
  if (c.h.level() != 2 || c.A.level() != 1 || c.B.level() != 0) {
    fail(Errc::InvalidArgument, "gerbe data levels must be (2, 1, 0)");
  }
  GerbeResidual out;
  out.dh = cech_delta(gpd, c.h);
  out.dA = cech_delta_form(gpd, c.A) - dlog_family(gpd, c.h, c.A.dim());
  out.dB = cech_delta_form(gpd, c.B) - exterior_d_family(c.A);
  return out;
}

LineData LineData::product(const Groupoid& gpd, const LineData& o) const {
  LineData out;
  out.h = h.product(gpd, o.h);
  out.A = A + o.A;
  return out;
}

LineData LineData::inverse() const {
  LineData out;
  out.h = h.inverse();
  out.A = -A;
  return out;
}

GerbeData GerbeData::product(const Groupoid& gpd, const GerbeData& o) const {
  GerbeData out;
  out.h = h.product(gpd, o.h);
  out.A = A + o.A;
  out.B = B + o.B;
  return out;
}

// --------------------------------------------------------------------------
// Verification

bool VerifyReport::pass() const {
  for (const CheckResult& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

double VerifyReport::max_residual() const {
  double m = 0.0;
  for (const CheckResult& c : checks) m = std::max(m, c.residual);
  return m;
}

void VerifyReport::add(CheckResult r) { checks.push_back(std::move(r)); }

std::string VerifyReport::summary() const {
  std::ostringstream os;
  for (const CheckResult& c : checks) {
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.name
       << "  residual=" << c.residual;
    if (!c.witness.empty()) os << "  worst=" << c.witness;
    os << "\n";
  }
  return os.str();
}

namespace {

std::vector<double> random_point_coords(Rng& rng, std::size_t d) {
  std::vector<double> x(d);
  for (double& v : x) v = rng.uniform01();
  return x;
}

TupleKey random_group_tuple(Rng& rng, std::size_t order, std::size_t len) {
  TupleKey t(len);
  for (auto& g : t) g = static_cast<std::uint32_t>(rng.below(order));
  return t;
}

/// Charts whose domain contains the point.
std::vector<std::uint32_t> charts_containing(const Groupoid& gpd,
                                             const Point& x) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < gpd.charts().size(); ++i) {
    if (gpd.chart_contains(i, x)) out.push_back(i);
  }
  return out;
}

NerveTuple make_action_tuple(const std::vector<double>& coords,
                             const TupleKey& t) {
  NerveTuple tup;
  tup.base = Point::at(coords);
  for (std::uint32_t g : t) tup.elems.push_back(static_cast<GroupElement>(g));
  return tup;
}

NerveTuple make_cover_tuple(const std::vector<double>& coords,
                            const TupleKey& chain) {
  NerveTuple tup;
  tup.base = Point::at(coords);
  tup.charts = chain;
  return tup;
}

/// Exhaustive or sampled check that delta(h) is the constant one.
CheckResult check_delta_one(const Groupoid& gpd, const CochainFunction& h,
                            const std::string& name, const VerifyOptions& opt,
                            Rng& rng) {
  CheckResult r;
  r.name = name;
  const CochainFunction d = cech_delta(gpd, h);

  switch (d.rep()) {
    case CochainFunction::Rep::One:
      break;

    case CochainFunction::Rep::GroupTable:
    case CochainFunction::Rep::PointTable: {
      bool all_exact = true;
      for (const auto& [key, v] : d.table()) {
        if (!v.is_exact()) all_exact = false;
        const double res = v.dist_one();
        if (res > r.residual) {
          r.residual = res;
          r.witness = key_str(key);
        }
      }
      r.pass = r.residual <= (all_exact ? 0.0 : opt.tol);
      break;
    }

    case CochainFunction::Rep::GroupExpr: {
      const std::size_t n = gpd.group().order();
      std::size_t tuples = 1;
      bool exhaustive = true;
      for (std::size_t i = 0; i < d.level(); ++i) {
        tuples *= n;
        if (tuples > 4096) {
          exhaustive = false;
          break;
        }
      }
      for (std::size_t s = 0; s < opt.samples; ++s) {
        const std::vector<double> x =
            random_point_coords(rng, gpd.space().dim);
        auto probe = [&](const TupleKey& t) {
          const Scalar v = d.eval(gpd, make_action_tuple(x, t));
          const double res = v.dist_one();
          if (res > r.residual) {
            r.residual = res;
            r.witness = key_str(t) + " at " + coords_str(x);
          }
        };
        if (exhaustive) {
          TupleKey t(d.level(), 0);
          do {
            probe(t);
          } while (next_tuple(t, static_cast<std::uint32_t>(n)));
        } else {
          probe(random_group_tuple(rng, n, d.level()));
        }
      }
      r.pass = r.residual <= opt.tol;
      break;
    }

    case CochainFunction::Rep::ChartExpr: {
      for (std::size_t s = 0; s < opt.samples; ++s) {
        const std::vector<double> x =
            random_point_coords(rng, gpd.space().dim);
        const Point p = Point::at(x);
        const std::vector<std::uint32_t> present = charts_containing(gpd, p);
        if (present.empty()) continue;
        TupleKey idx(d.level() + 1, 0);
        const auto m = static_cast<std::uint32_t>(present.size());
        do {
          TupleKey chain(idx.size());
          for (std::size_t i = 0; i < idx.size(); ++i) {
            chain[i] = present[idx[i]];
          }
          auto it = d.exprs().find(chain);
          if (it == d.exprs().end()) {
            r.residual = std::numeric_limits<double>::infinity();
            r.witness = "missing chain " + key_str(chain) + " at " +
                        coords_str(x);
            r.pass = false;
            return r;
          }
          const double res =
              std::abs(it->second.eval(env_at(x)) -
                       std::complex<double>(1.0, 0.0));
          if (res > r.residual) {
            r.residual = res;
            r.witness = key_str(chain) + " at " + coords_str(x);
          }
        } while (next_tuple(idx, m));
      }
      r.pass = r.residual <= opt.tol;
      break;
    }
  }
  return r;
}

/// Branch-free connection check: exp(int_path deltaA) * ratio(h)^sign = 1,
/// where sign = (-1)^level matches the total-complex convention.
CheckResult check_connection(const Groupoid& gpd, const CochainFunction& h,
                             const FormFamily& A, const std::string& name,
                             const VerifyOptions& opt, Rng& rng) {
  CheckResult r;
  r.name = name;
  const int sign = h.level() % 2 == 0 ? 1 : -1;
  const std::size_t d = space_dim(gpd);

  if (d == 0) {
    // Forms vanish on a zero-dimensional base; check the constant-path ratio.
    const std::size_t points = gpd.space().point_count;
    const std::size_t n = gpd.group().order();
    for (std::size_t s = 0; s < opt.paths; ++s) {
      NerveTuple tup;
      tup.base = Point::at(rng.below(points));
      for (std::size_t i = 0; i < h.level(); ++i) {
        tup.elems.push_back(static_cast<GroupElement>(rng.below(n)));
      }
      const Scalar v = h.eval(gpd, tup) / h.eval(gpd, tup);
      r.residual = std::max(r.residual, v.dist_one());
    }
    r.pass = r.residual <= opt.tol;
    return r;
  }

  const FormFamily dA = cech_delta_form(gpd, A);

  for (std::size_t s = 0; s < opt.paths; ++s) {
    SamplePath path;
    TupleKey key;
    if (gpd.kind() == Groupoid::Kind::Action) {
      key = random_group_tuple(rng, gpd.group().order(), h.level());
      path.from = random_point_coords(rng, d);
      path.to = random_point_coords(rng, d);
    } else {
      // Sample a short path inside a common chart-chain domain.
      bool found = false;
      for (std::size_t attempt = 0; attempt < 200 && !found; ++attempt) {
        path.from = random_point_coords(rng, d);
        path.to = path.from;
        for (double& c : path.to) c += rng.uniform(-0.05, 0.05);
        const std::vector<std::uint32_t> present =
            charts_containing(gpd, Point::at(path.from));
        if (present.size() < 1) continue;
        key.assign(h.level() + 1, 0);
        for (auto& id : key) id = present[rng.below(present.size())];
        bool inside = true;
        for (int step = 0; step <= 8 && inside; ++step) {
          const Point probe = Point::at(path.at(step / 8.0));
          for (std::uint32_t id : key) {
            if (!gpd.chart_contains(id, probe)) {
              inside = false;
              break;
            }
          }
        }
        if (!inside) continue;
        if (h.exprs().find(key) == h.exprs().end()) continue;
        found = true;
      }
      if (!found) continue;
    }

    const PForm w = dA.at(key);
    const std::complex<double> integral =
        integrate_form_along(w, path, opt.quadrature_n);

    const NerveTuple at0 =
        gpd.kind() == Groupoid::Kind::Action
            ? make_action_tuple(path.from, key)
            : make_cover_tuple(path.from, key);
    const NerveTuple at1 = gpd.kind() == Groupoid::Kind::Action
                               ? make_action_tuple(path.to, key)
                               : make_cover_tuple(path.to, key);
    const Scalar ratio = (h.eval(gpd, at0) / h.eval(gpd, at1)).pow(sign);
    const std::complex<double> val = std::exp(integral) * ratio.value();
    const double res = std::abs(val - std::complex<double>(1.0, 0.0));
    if (res > r.residual) {
      r.residual = res;
      r.witness = key_str(key) + " path from " + coords_str(path.from);
    }
  }
  r.pass = r.residual <= opt.tol;
  return r;
}

/// Pointwise check that t*B - s*B = dA on sampled arrows and tangent pairs.
CheckResult check_curvature(const Groupoid& gpd, const FormFamily& A,
                            const FormFamily& B, const std::string& name,
                            const VerifyOptions& opt, Rng& rng) {
  CheckResult r;
  r.name = name;
  const std::size_t d = space_dim(gpd);
  if (d == 0) return r;

  const FormFamily dA = exterior_d_family(A);

  for (std::size_t s = 0; s < opt.samples; ++s) {
    const std::vector<double> x = random_point_coords(rng, d);
    std::vector<double> u(d), v(d);
    for (std::size_t i = 0; i < d; ++i) {
      u[i] = rng.uniform(-1.0, 1.0);
      v[i] = rng.uniform(-1.0, 1.0);
    }

    std::complex<double> lhs;
    TupleKey key;
    if (gpd.kind() == Groupoid::Kind::Action) {
      key = random_group_tuple(rng, gpd.group().order(), 1);
      const AffineMap& m = gpd.action().map(static_cast<GroupElement>(key[0]));
      const PForm b = B.at({});
      lhs = eval_form(b, m.apply_unreduced(x), {m.push(u), m.push(v)}) -
            eval_form(b, x, {u, v});
    } else {
      const std::vector<std::uint32_t> present =
          charts_containing(gpd, Point::at(x));
      if (present.empty()) continue;
      key = {present[rng.below(present.size())],
             present[rng.below(present.size())]};
      lhs = eval_form(B.at({key[1]}), x, {u, v}) -
            eval_form(B.at({key[0]}), x, {u, v});
    }
    const std::complex<double> rhs = eval_form(dA.at(key), x, {u, v});
    const double res = std::abs(lhs - rhs);
    if (res > r.residual) {
      r.residual = res;
      r.witness = key_str(key) + " at " + coords_str(x);
    }
  }
  r.pass = r.residual <= opt.tol;
  return r;
}

}  // namespace

VerifyReport verify_cocycle(const Groupoid& gpd, const LineData& c,
                            const VerifyOptions& opt) {
  Rng rng(opt.seed);
  VerifyReport report;
  report.seed = opt.seed;
  report.add(check_delta_one(gpd, c.h, "one-cocycle-mult", opt, rng));
  report.add(check_connection(gpd, c.h, c.A, "one-cocycle-conn", opt, rng));
  return report;
}

VerifyReport verify_cocycle(const Groupoid& gpd, const GerbeData& c,
                            const VerifyOptions& opt) {
  Rng rng(opt.seed);
  VerifyReport report;
  report.seed = opt.seed;
  report.add(check_delta_one(gpd, c.h, "two-cocycle-mult", opt, rng));
  report.add(check_connection(gpd, c.h, c.A, "two-cocycle-conn", opt, rng));
  report.add(check_curvature(gpd, c.A, c.B, "two-cocycle-curv", opt, rng));
  return report;
}

VerifyReport verify_cocycle(const Groupoid& gpd, const FlatNData& c,
                            const VerifyOptions& opt) {
  Rng rng(opt.seed);
  VerifyReport report;
  report.seed = opt.seed;
  report.add(check_delta_one(gpd, c.omega, "n-cocycle-mult", opt, rng));
  if (c.theta1.has_value()) {
    report.add(check_connection(gpd, c.omega, *c.theta1, "n-cocycle-conn", opt,
                                rng));
  }
  return report;
}

}  // namespace holonomy
