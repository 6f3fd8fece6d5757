// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/expr.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/pform.hpp"
#include "holonomy/scalar.hpp"

namespace holonomy {

/// Key for cochain and form-family entries. Quotient groupoids key by the
/// group tuple (g1, ..., gk), optionally prefixed by the base point index for
/// full point tables; cover groupoids key by the chart chain (i0, ..., ik).
using TupleKey = std::vector<std::uint32_t>;

/// Nonvanishing complex-valued function on nerve level k, in one of four
/// backings:
///   One        constant 1 at any level over any groupoid,
///   PointTable exact values keyed by (point index, g1..gk), finite bases,
///   GroupTable exact values keyed by (g1..gk), constant across the base,
///   GroupExpr  expressions in x1..xd keyed by (g1..gk), torus bases,
///   ChartExpr  expressions keyed by chart chains (i0..ik), cover groupoids.
/// Chart expressions are evaluated at the canonical representative of the
/// point in [0,1)^d; chart boxes define membership only.
class CochainFunction {
 public:
  enum class Rep { One, PointTable, GroupTable, GroupExpr, ChartExpr };

  /// Constant one at level 0.
  CochainFunction() = default;

  static CochainFunction constant_one(std::size_t level);

  /// Exact table keyed by (point index, g1..gk). The table must cover the
  /// whole nerve level and every value must be nonzero.
  static CochainFunction point_table(const Groupoid& gpd, std::size_t level,
                                     std::map<TupleKey, Scalar> values);

  /// Exact table keyed by (g1..gk), constant in the base point. Complete and
  /// nonvanishing as above.
  static CochainFunction group_table(const Groupoid& gpd, std::size_t level,
                                     std::map<TupleKey, Scalar> values);

  /// Expressions keyed by (g1..gk) over a torus base. Values identically
  /// zero are rejected; certified nonvanishing is demanded only where a
  /// logarithmic derivative is formed.
  static CochainFunction group_expr(const Groupoid& gpd, std::size_t level,
                                    std::map<TupleKey, Expr> values);

  /// Expressions keyed by chart chains (i0..ik) over a cover groupoid. Only
  /// chains with nonempty common domain need entries; evaluating a missing
  /// chain throws Errc::DomainMismatch.
  static CochainFunction chart_expr(const Groupoid& gpd, std::size_t level,
                                    std::map<TupleKey, Expr> values);

  Rep rep() const { return rep_; }
  std::size_t level() const { return level_; }
  bool is_constant_one() const { return rep_ == Rep::One; }

  /// Exact when the backing is a table, floating otherwise.
  Scalar eval(const Groupoid& gpd, const NerveTuple& tup) const;

  /// Pointwise product; representations promote (One < GroupTable <
  /// PointTable and One < GroupTable < GroupExpr). Mixing chart and group
  /// keyed data throws Errc::DomainMismatch.
  CochainFunction product(const Groupoid& gpd, const CochainFunction& o) const;

  CochainFunction inverse() const;
  CochainFunction pow(std::int64_t k) const;

  const std::map<TupleKey, Scalar>& table() const { return table_; }
  const std::map<TupleKey, Expr>& exprs() const { return exprs_; }

 private:
  Rep rep_ = Rep::One;
  std::size_t level_ = 0;
  std::map<TupleKey, Scalar> table_;
  std::map<TupleKey, Expr> exprs_;
};

/// Family of differential forms on nerve level k: one PForm per group tuple
/// (quotient groupoids; the level-0 family is a single form on the base) or
/// per chart chain (cover groupoids). Missing keys denote the zero form.
class FormFamily {
 public:
  enum class Keying { Action, Cover };

  FormFamily() = default;
  FormFamily(Keying keying, std::size_t level, std::size_t degree,
             std::size_t dim);

  /// Level-0 family on a quotient groupoid holding one form on the base.
  static FormFamily single(PForm w);

  static FormFamily action_family(std::size_t level, std::size_t degree,
                                  std::size_t dim,
                                  std::map<TupleKey, PForm> forms);
  static FormFamily cover_family(std::size_t level, std::size_t degree,
                                 std::size_t dim,
                                 std::map<TupleKey, PForm> forms);

  Keying keying() const { return keying_; }
  std::size_t level() const { return level_; }
  std::size_t degree() const { return degree_; }
  std::size_t dim() const { return dim_; }
  bool is_zero() const;

  /// Form at the key; the zero form when absent. Key length must match the
  /// keying convention (level, or level + 1 for chart chains).
  PForm at(const TupleKey& key) const;

  void set(TupleKey key, PForm w);
  const std::map<TupleKey, PForm>& forms() const { return forms_; }

  FormFamily operator+(const FormFamily& o) const;
  FormFamily operator-() const;
  FormFamily operator-(const FormFamily& o) const;

 private:
  void check_key(const TupleKey& key) const;

  Keying keying_ = Keying::Action;
  std::size_t level_ = 0;
  std::size_t degree_ = 1;
  std::size_t dim_ = 0;
  std::map<TupleKey, PForm> forms_;
};

/// Line-bundle data on a groupoid: transition functions h at nerve level 1
/// and a connection 1-form family A at level 0.
struct LineData {
  CochainFunction h;
  FormFamily A;

  LineData product(const Groupoid& gpd, const LineData& o) const;
  LineData inverse() const;
};

/// Gerbe data: h at nerve level 2, 1-form family A at level 1, 2-form family
/// B at level 0.
struct GerbeData {
  CochainFunction h;
  FormFamily A;
  FormFamily B;

  GerbeData product(const Groupoid& gpd, const GerbeData& o) const;
};

/// Degree-n data in the flat or semi-flat regime: omega at nerve level n,
/// plus optionally a 1-form family theta1 at level n-1. All higher connection
/// forms are zero by construction.
struct FlatNData {
  std::size_t n = 1;
  CochainFunction omega;
  std::optional<FormFamily> theta1;
};

/// Multiplicative Cech coboundary: face 0 drops the first arrow (pulling the
/// base along it), middle faces compose adjacent arrows, the last face drops
/// the final arrow; faces alternate as a product of (+1/-1) exponents. For a
/// level-0 function, (delta f)(g) = f(t(g)) / f(s(g)).
CochainFunction cech_delta(const Groupoid& gpd, const CochainFunction& sigma);

/// Additive Cech coboundary on form families, same face convention.
FormFamily cech_delta_form(const Groupoid& gpd, const FormFamily& w);

/// Componentwise logarithmic differential d(h)/h as a form family at the same
/// level. Table-backed data (locally constant) gives the zero family. Throws
/// Errc::PossibleZero when an expression value lacks a nonvanishing
/// certificate.
FormFamily dlog_family(const Groupoid& gpd, const CochainFunction& h,
                       std::size_t dim);

/// Componentwise exterior derivative.
FormFamily exterior_d_family(const FormFamily& w);

/// Total coboundary of a degree-1 element (h, A): the gerbe data
/// (delta h, delta A + dlog h, dA). Applying it to line data produced by
/// gauge_coboundary yields data that verifies as a gerbe cocycle.
GerbeData total_coboundary(const Groupoid& gpd, const LineData& c);

/// Total coboundary of a degree-0 element f: the line data
/// (delta f, -dlog f); always a verified line cocycle.
LineData gauge_coboundary(const Groupoid& gpd, const CochainFunction& f);

/// Degree-3 residual of gerbe data: (delta h, delta A - dlog h,
/// delta B - dA). All components trivial exactly when the gerbe is a
/// cocycle.
struct GerbeResidual {
  CochainFunction dh;
  FormFamily dA;
  FormFamily dB;
};
GerbeResidual total_coboundary(const Groupoid& gpd, const GerbeData& c);

/// One verification condition: name, worst residual, witness of the worst
/// sample, pass flag.
struct CheckResult {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  std::string witness;
};

/// Outcome of a verification run.
struct VerifyReport {
  std::vector<CheckResult> checks;
  std::uint64_t seed = 0;

  bool pass() const;
  double max_residual() const;
  void add(CheckResult r);
  std::string summary() const;
};

/// Knobs for sampled verification.
struct VerifyOptions {
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::size_t paths = 20;
  std::size_t samples = 100;
  std::size_t quadrature_n = 256;
};

/// Checks the line-bundle cocycle conditions: the multiplicative condition
/// on composable pairs (exact and exhaustive over finite nerves, sampled on
/// torus bases) and the connection condition in branch-free form
///   exp(int_gamma (t*A - s*A)) * h(gamma(1)) / h(gamma(0)) = 1
/// along sampled straight arrow paths.
VerifyReport verify_cocycle(const Groupoid& gpd, const LineData& c,
                            const VerifyOptions& opt = {});

/// Checks the gerbe cocycle conditions: the multiplicative condition on
/// nerve level 3, the A condition in branch-free exponentiated form over
/// paths in composable pairs, and t*B - s*B = dA at sampled point and
/// tangent-pair triples.
VerifyReport verify_cocycle(const Groupoid& gpd, const GerbeData& c,
                            const VerifyOptions& opt = {});

/// Checks delta omega = 1 at level n+1 and, in the semi-flat regime, the
/// theta1 condition in branch-free form.
VerifyReport verify_cocycle(const Groupoid& gpd, const FlatNData& c,
                            const VerifyOptions& opt = {});

}  // namespace holonomy
