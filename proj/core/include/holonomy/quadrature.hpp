// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include "holonomy/error.hpp"

namespace holonomy {

/// Composite Simpson rule on [a, b] with n subintervals (n even, at least 2).
/// Throws Errc::QuadratureDiverged when a sample is non-finite.
std::complex<double> simpson(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    std::size_t n);

struct QuadratureResult {
  std::complex<double> value{0.0, 0.0};
  /// Richardson-style estimate |S_2n - S_n| / 15 at the final halving step.
  double error_estimate = 0.0;
  std::size_t intervals = 0;
};

/// Simpson with halving: starts at n subintervals and doubles until the
/// Richardson estimate meets target or max_n is reached; returns the finest
/// result either way. Callers inspect error_estimate for unmet targets.
QuadratureResult integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    std::size_t n = 256, double target = 1e-9, std::size_t max_n = 16384);

}  // namespace holonomy
