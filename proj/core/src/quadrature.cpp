// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace holonomy {

std::complex<double> simpson(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    fail(Errc::InvalidArgument, "Simpson subinterval count must be even");
  }
  const double h = (b - a) / static_cast<double>(n);
  auto sample = [&](std::size_t k) {
    const double t = k == n ? b : a + h * static_cast<double>(k);
    const std::complex<double> v = f(t);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      fail(Errc::QuadratureDiverged,
           "non-finite integrand sample at t = " + std::to_string(t));
    }
    return v;
  };
  std::complex<double> acc = sample(0) + sample(n);
  for (std::size_t k = 1; k < n; ++k) {
    acc += (k % 2 == 1 ? 4.0 : 2.0) * sample(k);
  }
  return acc * (h / 3.0);
}

QuadratureResult integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    std::size_t n, double target, std::size_t max_n) {
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  std::complex<double> prev = simpson(f, a, b, n);
  QuadratureResult out;
  out.value = prev;
  out.intervals = n;
  out.error_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t m = n * 2; m <= max_n; m *= 2) {
    const std::complex<double> cur = simpson(f, a, b, m);
    out.value = cur;
    out.intervals = m;
    out.error_estimate = std::abs(cur - prev) / 15.0;
    if (out.error_estimate <= target) return out;
    prev = cur;
  }
  return out;
}

}  // namespace holonomy
