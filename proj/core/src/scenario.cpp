// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/scenario.hpp"

#include <complex>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "holonomy/error.hpp"
#include "holonomy/expr.hpp"
#include "holonomy/pform.hpp"
#include "holonomy/report.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif

namespace holonomy {

namespace {

using json = nlohmann::json;

constexpr std::string_view kSchema = "holonomy-scenario/1";

[[noreturn]] void fail_at(const std::string& path, const std::string& msg) {
  fail(Errc::SyntaxError, path + ": " + msg);
}

/// JSON node paired with its path for error reporting.
struct Node {
  const json* j;
  std::string path;

  const json& v() const { return *j; }

  Node at(const std::string& key) const {
    return Node{&(*j)[key], path + "." + key};
  }
  Node at(std::size_t i) const {
    return Node{&(*j)[i], path + "[" + std::to_string(i) + "]"};
  }

  bool has(const std::string& key) const {
    return j->is_object() && j->contains(key);
  }

  void need_object() const {
    if (!j->is_object()) fail_at(path, "expected an object");
  }
  void need_array() const {
    if (!j->is_array()) fail_at(path, "expected an array");
  }
  std::size_t size() const { return j->size(); }

  Node require(const std::string& key) const {
    need_object();
    if (!j->contains(key)) fail_at(path, "missing required key '" + key + "'");
    return at(key);
  }

  void allow_keys(std::initializer_list<std::string_view> keys) const {
    need_object();
    for (const auto& [k, unused] : j->items()) {
      bool known = false;
      for (std::string_view a : keys) {
        if (k == a) known = true;
      }
      if (!known) fail_at(path, "unknown key '" + k + "'");
    }
  }

  std::string string() const {
    if (!j->is_string()) fail_at(path, "expected a string");
    return j->get<std::string>();
  }

  double number() const {
    if (!j->is_number()) fail_at(path, "expected a number");
    return j->get<double>();
  }

  std::uint64_t unsigned_int() const {
    if (!j->is_number_unsigned()) {
      fail_at(path, "expected a nonnegative integer");
    }
    return j->get<std::uint64_t>();
  }

  Rational rational() const {
    if (j->is_number_integer()) {
      return Rational(j->get<std::int64_t>());
    }
    if (j->is_string()) {
      try {
        return Rational::parse(j->get<std::string>());
      } catch (const Error& e) {
        fail_at(path, e.what());
      }
    }
    fail_at(path, "expected a rational written as \"p/q\" or an integer");
  }

  /// Unit-modulus entries are rational turn strings; general values are
  /// {"re": a, "im": b} objects.
  Scalar scalar() const {
    if (j->is_string() || j->is_number_integer()) {
      return Scalar::exact_phase(rational());
    }
    if (j->is_object()) {
      allow_keys({"re", "im"});
      const double re = has("re") ? at("re").number() : 0.0;
      const double im = has("im") ? at("im").number() : 0.0;
      return Scalar::of(std::complex<double>(re, im));
    }
    fail_at(path,
            "expected a phase as a rational turn count or {\"re\", \"im\"}");
  }

  Expr expr() const {
    if (!j->is_string()) fail_at(path, "expected an expression string");
    try {
      return Expr::parse(j->get<std::string>());
    } catch (const Error& e) {
      fail_at(path, e.what());
    }
  }
};

std::vector<std::uint32_t> split_key(const Node& owner,
                                     const std::string& key) {
  std::vector<std::uint32_t> out;
  if (key.empty()) return out;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t comma = key.find(',', pos);
    if (comma == std::string::npos) comma = key.size();
    const std::string tok = key.substr(pos, comma - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
      fail_at(owner.path, "bad tuple key '" + key +
                              "' (expected comma-separated indices)");
    }
    out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    pos = comma + 1;
  }
  return out;
}

GroupElement group_element(const Node& n, const FiniteGroup& grp) {
  const std::uint64_t g = n.unsigned_int();
  if (g >= grp.order()) {
    fail_at(n.path, "group element " + std::to_string(g) +
                        " out of range for a group of order " +
                        std::to_string(grp.order()));
  }
  return static_cast<GroupElement>(g);
}

SpaceModel parse_space(const Node& n) {
  n.allow_keys({"kind", "count", "dim"});
  const std::string kind = n.require("kind").string();
  if (kind == "points") {
    const std::uint64_t count = n.require("count").unsigned_int();
    if (count == 0) fail_at(n.path, "point count must be positive");
    return SpaceModel::points(count);
  }
  if (kind == "torus") {
    const std::uint64_t dim = n.require("dim").unsigned_int();
    if (dim == 0 || dim > 8) fail_at(n.path, "torus dimension must be 1..8");
    return SpaceModel::torus(dim);
  }
  fail_at(n.at("kind").path, "expected \"points\" or \"torus\"");
}

AffineMap parse_affine_map(const Node& n, std::size_t dim) {
  n.allow_keys({"linear", "translation"});
  AffineMap m = AffineMap::identity(dim);
  if (n.has("linear")) {
    const Node lin = n.at("linear");
    lin.need_array();
    if (lin.size() != dim) fail_at(lin.path, "expected one row per dimension");
    for (std::size_t r = 0; r < dim; ++r) {
      const Node row = lin.at(r);
      row.need_array();
      if (row.size() != dim) {
        fail_at(row.path, "expected one entry per dimension");
      }
      for (std::size_t c = 0; c < dim; ++c) {
        const Node cell = row.at(c);
        if (!cell.v().is_number_integer()) {
          fail_at(cell.path, "expected an integer");
        }
        m.linear[r][c] = cell.v().get<std::int64_t>();
      }
    }
  }
  if (n.has("translation")) {
    const Node tr = n.at("translation");
    tr.need_array();
    if (tr.size() != dim) fail_at(tr.path, "expected one entry per dimension");
    for (std::size_t c = 0; c < dim; ++c) {
      m.translation[c] = tr.at(c).rational();
    }
  }
  return m;
}

Groupoid parse_groupoid(const Node& n) {
  n.allow_keys({"kind", "space", "group", "action", "charts"});
  const std::string kind = n.require("kind").string();
  const SpaceModel space = parse_space(n.require("space"));

  if (kind == "cover") {
    if (n.has("group") || n.has("action")) {
      fail_at(n.path, "cover groupoids take charts, not a group action");
    }
    const Node charts_node = n.require("charts");
    charts_node.need_array();
    std::vector<Chart> charts;
    for (std::size_t i = 0; i < charts_node.size(); ++i) {
      const Node c = charts_node.at(i);
      c.allow_keys({"lo", "hi"});
      Chart chart;
      const Node lo = c.require("lo");
      const Node hi = c.require("hi");
      lo.need_array();
      hi.need_array();
      for (std::size_t d = 0; d < lo.size(); ++d) {
        chart.lo.push_back(lo.at(d).rational());
      }
      for (std::size_t d = 0; d < hi.size(); ++d) {
        chart.hi.push_back(hi.at(d).rational());
      }
      charts.push_back(std::move(chart));
    }
    return Groupoid::cover(space, std::move(charts));
  }

  if (kind != "action") {
    fail_at(n.at("kind").path, "expected \"action\" or \"cover\"");
  }
  FiniteGroup grp = [&] {
    const Node g = n.require("group");
    try {
      return FiniteGroup::parse(g.string());
    } catch (const Error& e) {
      fail_at(g.path, e.what());
    }
  }();

  if (!n.has("action") || (n.at("action").v().is_string() &&
                           n.at("action").string() == "trivial")) {
    AffineAction action(space, grp);
    return Groupoid::quotient(space, std::move(grp), std::move(action));
  }
  const Node a = n.at("action");
  a.allow_keys({"perms", "maps"});
  if (a.has("perms") == a.has("maps")) {
    fail_at(a.path, "expected exactly one of \"perms\" or \"maps\"");
  }
  if (a.has("perms")) {
    const Node perms_node = a.at("perms");
    perms_node.need_array();
    if (perms_node.size() != grp.order()) {
      fail_at(perms_node.path, "expected one permutation per group element");
    }
    std::vector<std::vector<std::uint32_t>> perms;
    for (std::size_t g = 0; g < grp.order(); ++g) {
      const Node p = perms_node.at(g);
      p.need_array();
      std::vector<std::uint32_t> perm;
      for (std::size_t i = 0; i < p.size(); ++i) {
        perm.push_back(static_cast<std::uint32_t>(p.at(i).unsigned_int()));
      }
      perms.push_back(std::move(perm));
    }
    AffineAction action(space, grp, std::move(perms));
    return Groupoid::quotient(space, std::move(grp), std::move(action));
  }
  const Node maps_node = a.at("maps");
  maps_node.need_array();
  if (maps_node.size() != grp.order()) {
    fail_at(maps_node.path, "expected one affine map per group element");
  }
  std::vector<AffineMap> maps;
  for (std::size_t g = 0; g < grp.order(); ++g) {
    maps.push_back(parse_affine_map(maps_node.at(g), space.dim));
  }
  AffineAction action(space, grp, std::move(maps));
  return Groupoid::quotient(space, std::move(grp), std::move(action));
}

CochainFunction parse_cochain(const Node& n, const Groupoid& gpd) {
  n.allow_keys({"rep", "level", "values"});
  const std::string rep = n.require("rep").string();
  const std::size_t level = n.require("level").unsigned_int();
  if (rep == "one") return CochainFunction::constant_one(level);

  const Node values = n.require("values");
  values.need_object();
  if (rep == "point_table" || rep == "group_table") {
    std::map<TupleKey, Scalar> table;
    for (const auto& [key, unused] : values.v().items()) {
      table.emplace(split_key(values, key), values.at(key).scalar());
    }
    return rep == "point_table"
               ? CochainFunction::point_table(gpd, level, std::move(table))
               : CochainFunction::group_table(gpd, level, std::move(table));
  }
  if (rep == "group_expr" || rep == "chart_expr") {
    std::map<TupleKey, Expr> table;
    for (const auto& [key, unused] : values.v().items()) {
      table.emplace(split_key(values, key), values.at(key).expr());
    }
    return rep == "group_expr"
               ? CochainFunction::group_expr(gpd, level, std::move(table))
               : CochainFunction::chart_expr(gpd, level, std::move(table));
  }
  fail_at(n.at("rep").path,
          "expected one of \"one\", \"point_table\", \"group_table\", "
          "\"group_expr\", \"chart_expr\"");
}

FormFamily::Keying default_keying(const Groupoid& gpd) {
  return gpd.kind() == Groupoid::Kind::Action ? FormFamily::Keying::Action
                                              : FormFamily::Keying::Cover;
}

std::size_t form_dim(const Groupoid& gpd) {
  return gpd.space().kind == SpaceModel::Kind::FlatTorus ? gpd.space().dim : 0;
}

FormFamily parse_form_family(const Node& n, const Groupoid& gpd,
                             std::size_t level, std::size_t degree) {
  n.allow_keys({"level", "degree", "dim", "forms"});
  if (n.has("level") && n.at("level").unsigned_int() != level) {
    fail_at(n.at("level").path,
            "expected level " + std::to_string(level) + " here");
  }
  if (n.has("degree") && n.at("degree").unsigned_int() != degree) {
    fail_at(n.at("degree").path,
            "expected degree " + std::to_string(degree) + " here");
  }
  const std::size_t dim =
      n.has("dim") ? n.at("dim").unsigned_int() : form_dim(gpd);
  FormFamily family(default_keying(gpd), level, degree, dim);
  if (!n.has("forms")) return family;
  const Node forms = n.at("forms");
  forms.need_object();
  for (const auto& [key, unused] : forms.v().items()) {
    const Node form = forms.at(key);
    form.need_object();
    PForm w(degree, dim);
    for (const auto& [idx, unused2] : form.v().items()) {
      const std::vector<std::uint32_t> raw = split_key(form, idx);
      PForm::Index index(raw.begin(), raw.end());
      w.set(std::move(index), form.at(idx).expr());
    }
    family.set(split_key(forms, key), std::move(w));
  }
  return family;
}

FormFamily zero_family(const Groupoid& gpd, std::size_t level,
                       std::size_t degree) {
  return FormFamily(default_keying(gpd), level, degree, form_dim(gpd));
}

LineData parse_line(const Node& n, const Groupoid& gpd) {
  n.allow_keys({"h", "A"});
  LineData out;
  out.h = parse_cochain(n.require("h"), gpd);
  if (out.h.level() != 1) {
    fail_at(n.at("h").path, "line transition data lives at level 1");
  }
  out.A = n.has("A") ? parse_form_family(n.at("A"), gpd, 0, 1)
                     : zero_family(gpd, 0, 1);
  return out;
}

GerbeData parse_gerbe(const Node& n, const Groupoid& gpd) {
  n.allow_keys({"h", "A", "B"});
  GerbeData out;
  out.h = parse_cochain(n.require("h"), gpd);
  if (out.h.level() != 2) {
    fail_at(n.at("h").path, "gerbe transition data lives at level 2");
  }
  out.A = n.has("A") ? parse_form_family(n.at("A"), gpd, 1, 1)
                     : zero_family(gpd, 1, 1);
  out.B = n.has("B") ? parse_form_family(n.at("B"), gpd, 0, 2)
                     : zero_family(gpd, 0, 2);
  return out;
}

FlatNData parse_flat(const Node& n, const Groupoid& gpd) {
  n.allow_keys({"n", "omega", "theta1"});
  FlatNData out;
  out.n = n.require("n").unsigned_int();
  if (out.n < 2) fail_at(n.at("n").path, "flat transgression degree is >= 2");
  out.omega = parse_cochain(n.require("omega"), gpd);
  if (out.omega.level() != out.n) {
    fail_at(n.at("omega").path,
            "omega lives at level n = " + std::to_string(out.n));
  }
  if (n.has("theta1")) {
    out.theta1 = parse_form_family(n.at("theta1"), gpd, out.n - 1, 1);
  }
  return out;
}

PathSegment parse_segment(const Node& n, const Groupoid& gpd,
                          const Rational& lo, const Rational& hi) {
  n.allow_keys({"kind", "point", "coords", "samples", "chart"});
  const std::string kind = n.require("kind").string();
  PathSegment seg = [&]() -> PathSegment {
    if (kind == "constant") {
      if (n.has("point")) {
        return PathSegment::constant(
            lo, hi, Point::at(n.at("point").unsigned_int()));
      }
      const Node coords = n.require("coords");
      coords.need_array();
      std::vector<double> x;
      for (std::size_t d = 0; d < coords.size(); ++d) {
        x.push_back(coords.at(d).number());
      }
      return PathSegment::constant(lo, hi, Point::at(std::move(x)));
    }
    if (kind == "parametric") {
      const Node coords = n.require("coords");
      coords.need_array();
      std::vector<Expr> exprs;
      for (std::size_t d = 0; d < coords.size(); ++d) {
        exprs.push_back(coords.at(d).expr());
      }
      return PathSegment::parametric(lo, hi, std::move(exprs));
    }
    if (kind == "polyline") {
      const Node samples = n.require("samples");
      samples.need_array();
      std::vector<std::pair<double, std::vector<double>>> pts;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const Node s = samples.at(i);
        s.need_array();
        if (s.size() != 2) fail_at(s.path, "expected [t, [coords...]]");
        const Node c = s.at(1);
        c.need_array();
        std::vector<double> x;
        for (std::size_t d = 0; d < c.size(); ++d) {
          x.push_back(c.at(d).number());
        }
        pts.emplace_back(s.at(0).number(), std::move(x));
      }
      return PathSegment::polyline(lo, hi, std::move(pts));
    }
    fail_at(n.at("kind").path,
            "expected \"constant\", \"parametric\", or \"polyline\"");
  }();
  if (n.has("chart")) {
    seg = seg.with_chart(n.at("chart").unsigned_int());
  }
  (void)gpd;
  return seg;
}

SegmentedLoop parse_loop(const Node& n, const Groupoid& gpd) {
  n.allow_keys({"partition", "segments", "arrows"});
  const Node pn = n.require("partition");
  pn.need_array();
  std::vector<Rational> points;
  for (std::size_t i = 0; i < pn.size(); ++i) {
    points.push_back(pn.at(i).rational());
  }
  Partition partition(std::move(points));

  const Node sn = n.require("segments");
  sn.need_array();
  if (sn.size() != partition.segments()) {
    fail_at(sn.path, "expected one segment per partition interval");
  }
  std::vector<PathSegment> segments;
  for (std::size_t i = 0; i < sn.size(); ++i) {
    segments.push_back(parse_segment(sn.at(i), gpd, partition.point(i),
                                     partition.point(i + 1)));
  }

  const Node an = n.require("arrows");
  an.need_array();
  if (an.size() != segments.size()) {
    fail_at(an.path, "expected one connecting arrow per segment");
  }
  std::vector<Arrow> arrows;
  for (std::size_t i = 0; i < an.size(); ++i) {
    const Node a = an.at(i);
    a.allow_keys({"g", "chart_from", "chart_to"});
    Arrow arrow;
    arrow.src = segments[i].point_at(gpd.space(), segments[i].t1());
    if (a.has("g")) {
      if (gpd.kind() != Groupoid::Kind::Action) {
        fail_at(a.at("g").path, "cover groupoid arrows take no group element");
      }
      arrow.g = group_element(a.at("g"), gpd.group());
    }
    if (a.has("chart_from")) {
      arrow.chart_from =
          static_cast<std::uint32_t>(a.at("chart_from").unsigned_int());
    }
    if (a.has("chart_to")) {
      arrow.chart_to =
          static_cast<std::uint32_t>(a.at("chart_to").unsigned_int());
    }
    arrows.push_back(std::move(arrow));
  }
  return build_loop(gpd, std::move(partition), std::move(segments),
                    std::move(arrows));
}

LoopFamily parse_family(const Node& n, const Groupoid& gpd) {
  n.allow_keys(
      {"partition", "coords", "loop_elems", "arrow_elems", "params", "eps"});
  const Node pn = n.require("partition");
  pn.need_array();
  std::vector<Rational> points;
  for (std::size_t i = 0; i < pn.size(); ++i) {
    points.push_back(pn.at(i).rational());
  }
  Partition partition(std::move(points));

  const Node cn = n.require("coords");
  cn.need_array();
  std::vector<std::vector<Expr>> coords;
  for (std::size_t i = 0; i < cn.size(); ++i) {
    const Node seg = cn.at(i);
    seg.need_array();
    std::vector<Expr> exprs;
    for (std::size_t d = 0; d < seg.size(); ++d) {
      exprs.push_back(seg.at(d).expr());
    }
    coords.push_back(std::move(exprs));
  }

  const auto parse_elems = [&](const std::string& key) {
    const Node en = n.require(key);
    en.need_array();
    std::vector<GroupElement> elems;
    for (std::size_t i = 0; i < en.size(); ++i) {
      elems.push_back(group_element(en.at(i), gpd.group()));
    }
    return elems;
  };
  const std::size_t params =
      n.has("params") ? n.at("params").unsigned_int() : 1;
  const double eps = n.has("eps") ? n.at("eps").number() : 1e-2;
  return build_loop_family(gpd, std::move(partition), std::move(coords),
                           parse_elems("loop_elems"),
                           parse_elems("arrow_elems"), params, eps);
}

void parse_settings(const Node& n, Scenario& sc) {
  n.allow_keys({"tol", "seed", "paths", "samples", "quadrature_n", "form_tol",
                "fd_step"});
  if (n.has("tol")) sc.settings.tol = n.at("tol").number();
  if (n.has("seed")) sc.settings.seed = n.at("seed").unsigned_int();
  if (n.has("paths")) sc.settings.paths = n.at("paths").unsigned_int();
  if (n.has("samples")) sc.settings.samples = n.at("samples").unsigned_int();
  if (n.has("quadrature_n")) {
    sc.settings.quadrature_n = n.at("quadrature_n").unsigned_int();
  }
  if (n.has("form_tol")) sc.form_tol = n.at("form_tol").number();
  if (n.has("fd_step")) sc.fd_step = n.at("fd_step").number();
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::SyntaxError, std::string("scenario: ") + e.what());
  }
  const Node top{&root, "scenario"};
  top.allow_keys({"schema", "groupoid", "line", "gerbe", "flat", "loops",
                  "loop_arrows", "tangents", "families", "settings"});
  if (top.has("schema") && top.at("schema").string() != kSchema) {
    fail_at(top.at("schema").path,
            "unsupported schema (expected " + std::string(kSchema) + ")");
  }

  Scenario sc(parse_groupoid(top.require("groupoid")));
  sc.digest = digest_hex(text);

  if (top.has("line")) sc.line = parse_line(top.at("line"), sc.groupoid);
  if (top.has("gerbe")) sc.gerbe = parse_gerbe(top.at("gerbe"), sc.groupoid);
  if (top.has("flat")) sc.flat = parse_flat(top.at("flat"), sc.groupoid);

  if (top.has("loops")) {
    const Node loops = top.at("loops");
    loops.need_object();
    for (const auto& [id, unused] : loops.v().items()) {
      sc.loops.emplace(id, parse_loop(loops.at(id), sc.groupoid));
    }
  }

  if (top.has("loop_arrows")) {
    const Node arrows = top.at("loop_arrows");
    arrows.need_object();
    for (const auto& [id, unused] : arrows.v().items()) {
      const Node a = arrows.at(id);
      a.allow_keys({"source", "target", "elems"});
      const Node src_node = a.require("source");
      const auto src = sc.loops.find(src_node.string());
      if (src == sc.loops.end()) {
        fail_at(src_node.path, "unknown loop '" + src_node.string() + "'");
      }
      std::vector<GroupElement> elems;
      if (a.has("elems")) {
        const Node en = a.at("elems");
        en.need_array();
        for (std::size_t i = 0; i < en.size(); ++i) {
          elems.push_back(group_element(en.at(i), sc.groupoid.group()));
        }
      }
      if (a.has("target")) {
        const Node tgt_node = a.at("target");
        const auto tgt = sc.loops.find(tgt_node.string());
        if (tgt == sc.loops.end()) {
          fail_at(tgt_node.path, "unknown loop '" + tgt_node.string() + "'");
        }
        sc.loop_arrows.emplace(
            id, build_loop_arrow(sc.groupoid, src->second, tgt->second,
                                 std::move(elems)));
      } else {
        sc.loop_arrows.emplace(
            id, transported_loop_arrow(sc.groupoid, src->second,
                                       std::move(elems)));
      }
    }
  }

  if (top.has("tangents")) {
    const Node tangents = top.at("tangents");
    tangents.need_object();
    for (const auto& [id, unused] : tangents.v().items()) {
      const Node t = tangents.at(id);
      t.allow_keys({"loop", "fields"});
      const Node loop_node = t.require("loop");
      const auto loop = sc.loops.find(loop_node.string());
      if (loop == sc.loops.end()) {
        fail_at(loop_node.path, "unknown loop '" + loop_node.string() + "'");
      }
      std::vector<std::vector<Expr>> fields(loop->second.size());
      if (t.has("fields")) {
        const Node fn = t.at("fields");
        fn.need_array();
        if (fn.size() != loop->second.size()) {
          fail_at(fn.path, "expected one field entry per segment");
        }
        for (std::size_t i = 0; i < fn.size(); ++i) {
          const Node seg = fn.at(i);
          seg.need_array();
          std::vector<Expr> exprs;
          for (std::size_t d = 0; d < seg.size(); ++d) {
            exprs.push_back(seg.at(d).expr());
          }
          fields[i] = std::move(exprs);
        }
      }
      sc.tangents.emplace(
          id, ScenarioTangent{loop->first,
                              build_loop_tangent(sc.groupoid, loop->second,
                                                 std::move(fields))});
    }
  }

  if (top.has("families")) {
    const Node families = top.at("families");
    families.need_object();
    for (const auto& [id, unused] : families.v().items()) {
      sc.families.emplace(id, parse_family(families.at(id), sc.groupoid));
    }
  }

  if (top.has("settings")) parse_settings(top.at("settings"), sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(Errc::IoError, "cannot read scenario file '" + path + "'");
  return parse_scenario(buf.str());
}

}  // namespace holonomy
