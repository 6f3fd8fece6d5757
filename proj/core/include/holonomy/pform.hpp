// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <map>
#include <vector>

#include "holonomy/expr.hpp"
#include "holonomy/space.hpp"

namespace holonomy {

/// \brief Differential form of fixed degree on a d-dimensional chart, stored
/// as Expr coefficients over strictly increasing coordinate multi-indices.
///
/// Degree 0 forms hold a single coefficient at the empty index. A degree
/// larger than the ambient dimension is accepted and denotes the zero form.
class PForm {
 public:
  using Index = std::vector<std::size_t>;

  PForm() = default;
  PForm(std::size_t degree, std::size_t dim);

  /// Degree-0 form wrapping a chart-coordinate function.
  static PForm function(Expr f, std::size_t dim);
  /// The coordinate differential dx_{i+1} on a d-dimensional chart.
  static PForm d_coord(std::size_t i, std::size_t dim);

  std::size_t degree() const { return degree_; }
  std::size_t dim() const { return dim_; }

  /// True when every stored coefficient is the zero expression.
  bool is_zero() const;

  /// Sets one coefficient. The index must be strictly increasing with entries
  /// below dim() and length equal to degree().
  void set(Index idx, Expr coeff);

  /// Coefficient at idx; the zero expression when absent.
  Expr coeff(const Index& idx) const;

  const std::map<Index, Expr>& terms() const { return terms_; }

  PForm operator+(const PForm& other) const;
  PForm operator-(const PForm& other) const;
  PForm operator-() const;

  /// Pointwise multiplication by a function.
  PForm scaled(const Expr& f) const;

  PForm wedge(const PForm& other) const;

  std::string str() const;

 private:
  void check_index(const Index& idx) const;

  std::size_t degree_ = 0;
  std::size_t dim_ = 0;
  std::map<Index, Expr> terms_;
};

/// Exterior derivative; raises degree by one and satisfies d(d(w)) = 0.
PForm exterior_d(const PForm& w);

/// The degree-1 form df / f. The argument must carry a structural
/// nonvanishing certificate (nonzero constants, exponentials, and their
/// products, quotients, powers, negations); otherwise Errc::PossibleZero.
PForm dlog(const Expr& f, std::size_t dim);

/// Evaluates w at the environment's coordinates against tangent vectors, as
/// the alternating multilinear pairing sum_I coeff_I * det(vectors | I).
/// The vector count must equal the degree (Errc::InvalidArgument) and each
/// vector must have dim() components (Errc::DomainMismatch).
std::complex<double> eval_form(const PForm& w, const EvalEnv& env,
                               const std::vector<std::vector<double>>& vectors);

/// Convenience overload evaluating at a bare coordinate point.
std::complex<double> eval_form(const PForm& w, const std::vector<double>& point,
                               const std::vector<std::vector<double>>& vectors);

/// Pullback f*w along an affine map: coefficients are precomposed with the
/// map and differentials transform by integer minor determinants of the
/// linear part. Dimensions must agree (Errc::DomainMismatch).
PForm pullback_form(const PForm& w, const AffineMap& f);

/// Substitution map realizing precomposition with an affine map:
/// x_k -> sum_j R[k][j] x_j + t_k, for use with Expr::subst.
std::map<std::uint8_t, Expr> affine_subst(const AffineMap& f);

}  // namespace holonomy
