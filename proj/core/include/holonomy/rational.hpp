// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "holonomy/error.hpp"

namespace holonomy {

/// Exact rational number with 64-bit numerator and denominator, always stored
/// normalized (gcd 1, denominator > 0). Arithmetic is overflow-checked and
/// throws Errc::Overflow instead of wrapping.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d);

  /// Parses "p", "-p", "p/q". Throws Errc::SyntaxError on malformed input.
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  /// Representative in [0, 1): subtracts the floor.
  Rational mod1() const;

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// "p" for integers, otherwise "p/q".
  std::string str() const;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

/// Exact point on the unit circle, stored as the rational angle a with value
/// exp(2*pi*i*a), a normalized to [0, 1). Products and integer powers stay
/// exact; use value() to leave the exact regime.
class RationalAngle {
 public:
  constexpr RationalAngle() : angle_() {}
  explicit RationalAngle(const Rational& turns) : angle_(turns.mod1()) {}

  const Rational& turns() const { return angle_; }

  RationalAngle operator*(const RationalAngle& o) const {
    return RationalAngle(angle_ + o.angle_);
  }
  RationalAngle inverse() const { return RationalAngle(-angle_); }
  RationalAngle pow(std::int64_t k) const;

  bool operator==(const RationalAngle& o) const { return angle_ == o.angle_; }
  bool operator!=(const RationalAngle& o) const { return !(*this == o); }

  bool is_one() const { return angle_.is_zero(); }

  /// exp(2*pi*i*angle) as a pair (re, im).
  void value(double& re, double& im) const;

  std::string str() const;

 private:
  Rational angle_;
};

}  // namespace holonomy
