// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include "holonomy/rational.hpp"

namespace holonomy {

/// Nonzero complex scalar that stays exact as long as every factor is an
/// exact root of unity. Mixed arithmetic (exact with floating) promotes to
/// std::complex<double> and never silently demotes back.
class Scalar {
 public:
  /// Exact one.
  Scalar() : exact_(true), phase_() , value_(1.0, 0.0) {}

  static Scalar exact_phase(const RationalAngle& a) {
    Scalar s;
    s.exact_ = true;
    s.phase_ = a;
    return s;
  }
  static Scalar exact_phase(const Rational& turns) {
    return exact_phase(RationalAngle(turns));
  }
  static Scalar of(std::complex<double> z) {
    Scalar s;
    s.exact_ = false;
    s.value_ = z;
    return s;
  }

  bool is_exact() const { return exact_; }
  const RationalAngle& phase() const { return phase_; }

  std::complex<double> value() const {
    if (!exact_) return value_;
    double re, im;
    phase_.value(re, im);
    return {re, im};
  }

  Scalar operator*(const Scalar& o) const {
    if (exact_ && o.exact_) return exact_phase(phase_ * o.phase_);
    return of(value() * o.value());
  }
  Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

  Scalar inverse() const {
    if (exact_) return exact_phase(phase_.inverse());
    return of(1.0 / value_);
  }

  Scalar pow(std::int64_t k) const {
    if (exact_) return exact_phase(phase_.pow(k));
    return of(std::pow(value_, static_cast<double>(k)));
  }

  /// Exact equality when both sides are exact, otherwise false.
  bool exact_eq(const Scalar& o) const {
    return exact_ && o.exact_ && phase_ == o.phase_;
  }

  /// |this - o| in the complex plane.
  double dist(const Scalar& o) const { return std::abs(value() - o.value()); }

  /// Deviation from exact one; zero for the exact unit.
  double dist_one() const {
    if (exact_) return phase_.is_one() ? 0.0 : dist(Scalar());
    return std::abs(value_ - std::complex<double>(1.0, 0.0));
  }

  std::string str() const;

 private:
  bool exact_;
  RationalAngle phase_;
  std::complex<double> value_{1.0, 0.0};
};

}  // namespace holonomy
