// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "holonomy/cochain.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/loop.hpp"
#include "holonomy/scalar.hpp"

namespace holonomy {

/// Degree-1 transgression: line data (h, A) on a groupoid induces the
/// function
///   H(psi) = exp(sum_i int_{I_i} psi_i* A) . prod_i h(psi(a_i))^{-1}
/// on segmented loops, where psi(a_i) runs over the connecting arrows. The
/// value is exact (a root of unity) whenever h is table-backed and A is
/// zero.
class HolonomyMap {
 public:
  explicit HolonomyMap(LineData data) : data_(std::move(data)) {}

  const LineData& data() const { return data_; }

  Scalar operator()(const Groupoid& gpd, const SegmentedLoop& psi) const;

 private:
  LineData data_;
};

/// Evaluates the degree-1 transgression; multiplicative in the data.
Scalar tau1_eval(const Groupoid& gpd, const LineData& data,
                 const SegmentedLoop& psi);

/// Degree-2 transgression: gerbe data (h, A, B) induces a line bundle on
/// the loop groupoid with transition function F and connection Delta,
///   F(Lambda) = exp(sum_i int_{I_i} Lambda_i* A)
///               . prod_i h(psi(a_i), Lambda_{i+1}(a_i))
///                        / h(Lambda_i(a_i), phi(a_i))
///   <Delta_psi, xi> = sum_i int_{I_i} B(dpsi_i/dt, xi_i(t)) dt
///                     + sum_i <A_{psi(a_i)}, xi(a_i)>
/// for Lambda : psi -> phi. On a one-segment quotient loop with wrap arrow
/// (y, g), y = phi_path(1), and a constant arrow element k this reduces to
///   F = exp(int_0^1 phi_path* A_k) . h(y; g, k) / h(y; k, k^{-1} g k).
class TransgressedBundle {
 public:
  explicit TransgressedBundle(GerbeData data) : data_(std::move(data)) {}

  const GerbeData& data() const { return data_; }

  /// Transition function on loop arrows; exact for table-backed flat data.
  Scalar F(const Groupoid& gpd, const LoopArrow& arrow) const;

  /// Connection pairing against a tangent field along the loop; linear in
  /// the field.
  std::complex<double> Delta(const Groupoid& gpd, const SegmentedLoop& psi,
                             const LoopTangent& xi) const;

 private:
  GerbeData data_;
};

/// Captures gerbe data for evaluation on the loop groupoid.
TransgressedBundle tau2_build(GerbeData g);

Scalar F_eval(const Groupoid& gpd, const TransgressedBundle& b,
              const LoopArrow& arrow);

std::complex<double> Delta_eval(const Groupoid& gpd,
                                const TransgressedBundle& b,
                                const SegmentedLoop& psi,
                                const LoopTangent& xi);

/// Degree-n transgression in the flat regime: omega at nerve level n (plus
/// an optional 1-form family theta1 at level n-1) induces
///   F(Lambda^1..Lambda^{n-1}) = exp(sum_i int_{I_i} Lambda_i* theta1)
///     . prod_i prod_{j=0}^{n-1} omega(Lambda^1_i(a_i), ..., Lambda^j_i(a_i),
///         psi^j(a_i), Lambda^{j+1}_{i+1}(a_i), ..., Lambda^{n-1}_{i+1}(a_i))
///       ^ ((-1)^{j+n})
/// on chains of n-1 composable loop arrows joining loops psi^0..psi^{n-1}.
/// For n = 2 this is the transition function of tau2_build.
class FlatTransgression {
 public:
  explicit FlatTransgression(FlatNData data) : data_(std::move(data)) {}

  std::size_t n() const { return data_.n; }
  const FlatNData& data() const { return data_; }

  /// Chain must hold n-1 pairwise composable loop arrows over one partition
  /// (Errc::NotComposable, Errc::InvalidArgument on length).
  Scalar F(const Groupoid& gpd, const std::vector<LoopArrow>& chain) const;

 private:
  FlatNData data_;
};

Scalar tau_n_flat_eval(const Groupoid& gpd, const FlatNData& data,
                       const std::vector<LoopArrow>& chain);

/// Central finite difference of log F along a one-parameter family: the
/// ratio F(Lambda^{+s}) / F(Lambda^{-s}) is formed first and must stay close
/// to 1 (Errc::StepTooLarge otherwise), so no branch of the logarithm is
/// chosen. step defaults to the family's radius.
std::complex<double> dlogF_fd(const Groupoid& gpd,
                              const TransgressedBundle& b,
                              const LoopFamily& fam, double step = 0.0);

/// The coboundary of Delta paired against a family direction:
///   <(delta Delta)_Lambda, nu> = <Delta_phi, nu_phi> - <Delta_psi, nu_psi>
/// with nu_psi, nu_phi the family's source and target tangents at s = 0.
/// For cocycle gerbe data, dlogF_fd + delta_Delta_eval vanishes to the
/// order of the finite-difference step.
std::complex<double> delta_Delta_eval(const Groupoid& gpd,
                                      const TransgressedBundle& b,
                                      const LoopFamily& fam);

/// Verifies tau2(total_coboundary(c)) = (delta - d)(tau1(c)) on samples:
/// for every loop arrow, F of the coboundary gerbe must equal
/// H(target) / H(source); for every family, Delta of the coboundary gerbe
/// paired with the source tangent must equal -dlog H along the family
/// (central finite differences at fd_step). Residuals land in the report;
/// nothing is thrown on mismatch.
VerifyReport check_commutation_square(const Groupoid& gpd, const LineData& c,
                                      const std::vector<LoopArrow>& arrows,
                                      const std::vector<LoopFamily>& families =
                                          {},
                                      double tol = 1e-9,
                                      double form_tol = 1e-4,
                                      double fd_step = 1e-3);

}  // namespace holonomy
