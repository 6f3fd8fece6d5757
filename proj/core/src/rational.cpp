// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace holonomy {

namespace {

std::int64_t checked(__int128 v, const char* what) {
  if (v > static_cast<__int128>(INT64_MAX) ||
      v < static_cast<__int128>(INT64_MIN)) {
    fail(Errc::Overflow, std::string("rational ") + what +
                             " exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) fail(Errc::InvalidArgument, "rational with zero denominator");
  if (d < 0) {
    n = checked(-static_cast<__int128>(n), "negation");
    d = checked(-static_cast<__int128>(d), "negation");
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = n;
  den_ = d;
}

Rational Rational::parse(std::string_view text) {
  auto bad = [&] {
    fail(Errc::SyntaxError, "malformed rational '" + std::string(text) + "'");
  };
  if (text.empty()) bad();
  std::size_t slash = text.find('/');
  auto parse_int = [&](std::string_view part) -> std::int64_t {
    if (part.empty()) bad();
    std::size_t i = 0;
    bool neg = false;
    if (part[0] == '-' || part[0] == '+') {
      neg = part[0] == '-';
      i = 1;
      if (part.size() == 1) bad();
    }
    __int128 v = 0;
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') bad();
      v = v * 10 + (part[i] - '0');
      if (v > static_cast<__int128>(INT64_MAX) + 1) bad();
    }
    return checked(neg ? -v : v, "literal");
  };
  if (slash == std::string_view::npos) {
    return Rational(parse_int(text));
  }
  std::int64_t n = parse_int(text.substr(0, slash));
  std::int64_t d = parse_int(text.substr(slash + 1));
  if (d == 0) bad();
  return Rational(n, d);
}

Rational Rational::operator+(const Rational& o) const {
  __int128 n = static_cast<__int128>(num_) * o.den_ +
               static_cast<__int128>(o.num_) * den_;
  __int128 d = static_cast<__int128>(den_) * o.den_;
  // Reduce in 128-bit space before the range check so that representable
  // results never spuriously overflow.
  __int128 a = n < 0 ? -n : n;
  __int128 b = d;
  while (b != 0) {
    __int128 r = a % b;
    a = b;
    b = r;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  return Rational(checked(n, "sum"), checked(d, "sum"));
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  std::int64_t g1 = std::gcd(num_ < 0 ? -num_ : num_, o.den_);
  std::int64_t g2 = std::gcd(o.num_ < 0 ? -o.num_ : o.num_, den_);
  __int128 n = static_cast<__int128>(num_ / g1) * (o.num_ / g2);
  __int128 d = static_cast<__int128>(den_ / g2) * (o.den_ / g1);
  return Rational(checked(n, "product"), checked(d, "product"));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) fail(Errc::InvalidArgument, "rational division by zero");
  return *this * Rational(o.den_, o.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = checked(-static_cast<__int128>(num_), "negation");
  r.den_ = den_;
  return r;
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num_) * o.den_ <
         static_cast<__int128>(o.num_) * den_;
}

Rational Rational::mod1() const {
  std::int64_t r = num_ % den_;
  if (r < 0) r += den_;
  return Rational(r, den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

RationalAngle RationalAngle::pow(std::int64_t k) const {
  return RationalAngle(angle_ * Rational(k));
}

void RationalAngle::value(double& re, double& im) const {
  const double theta = 2.0 * M_PI * angle_.to_double();
  re = std::cos(theta);
  im = std::sin(theta);
  // Snap the axis-aligned roots of unity so exact data evaluates exactly.
  if (angle_.den() == 1) { re = 1.0; im = 0.0; }
  if (angle_.den() == 2) { re = -1.0; im = 0.0; }
  if (angle_.den() == 4) {
    re = 0.0;
    im = angle_.num() == 1 ? 1.0 : -1.0;
  }
}

std::string RationalAngle::str() const { return angle_.str(); }

}  // namespace holonomy
