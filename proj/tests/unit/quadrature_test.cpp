// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>

#include "doctest.h"
#include "holonomy/error.hpp"
#include "holonomy/quadrature.hpp"

namespace {

using namespace holonomy;

constexpr double kPi = 3.14159265358979323846;

// Closed-form integrals used as oracles below:
//   int_0^1 t^3 dt            = 1/4      (cubic, exact for Simpson)
//   int_0^1 sin(2 pi t) dt    = 0
//   int_0^a sin(2 pi t) dt    = (1 - cos(2 pi a)) / (2 pi)
//   int_0^1 e^{it} dt         = sin(1) + i (1 - cos(1))

TEST_CASE("simpson is exact on cubics") {
  const auto f = [](double t) {
    return std::complex<double>(t * t * t, 0.0);
  };
  const std::complex<double> got = simpson(f, 0.0, 1.0, 2);
  CHECK(std::abs(got - std::complex<double>(0.25)) < 1e-15);
}

TEST_CASE("simpson matches trigonometric closed forms") {
  const auto f = [](double t) {
    return std::complex<double>(std::sin(2.0 * kPi * t), 0.0);
  };
  CHECK(std::abs(simpson(f, 0.0, 1.0, 64)) < 1e-12);

  const double a = 0.3;
  const double exact = (1.0 - std::cos(2.0 * kPi * a)) / (2.0 * kPi);
  CHECK(std::abs(simpson(f, 0.0, a, 64) - exact) < 1e-9);
}

TEST_CASE("simpson handles complex integrands") {
  const auto f = [](double t) {
    return std::exp(std::complex<double>(0.0, t));
  };
  const std::complex<double> exact(std::sin(1.0), 1.0 - std::cos(1.0));
  CHECK(std::abs(simpson(f, 0.0, 1.0, 32) - exact) < 1e-10);
}

TEST_CASE("simpson error falls at fourth order under halving") {
  const auto f = [](double t) {
    return std::complex<double>(std::sin(2.0 * kPi * t), 0.0);
  };
  const double a = 1.0 / 3.0;
  const double exact = (1.0 - std::cos(2.0 * kPi * a)) / (2.0 * kPi);
  const double e1 = std::abs(simpson(f, 0.0, a, 8) - exact);
  const double e2 = std::abs(simpson(f, 0.0, a, 16) - exact);
  CHECK(e2 > 0.0);
  CHECK(e1 / e2 > 8.0);
}

TEST_CASE("simpson rejects odd interval counts") {
  const auto f = [](double) { return std::complex<double>(1.0); };
  CHECK_THROWS_AS(simpson(f, 0.0, 1.0, 3), Error);
  CHECK_THROWS_AS(simpson(f, 0.0, 1.0, 0), Error);
}

TEST_CASE("simpson reports non-finite integrands") {
  const auto f = [](double t) {
    return std::complex<double>(1.0 / (t - 0.5), 0.0);
  };
  try {
    (void)simpson(f, 0.0, 1.0, 4);
    FAIL("expected QuadratureDiverged");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::QuadratureDiverged);
  }
}

TEST_CASE("adaptive integration reaches the requested target") {
  const auto f = [](double t) {
    return std::complex<double>(std::exp(std::sin(2.0 * kPi * t)), 0.0);
  };
  const QuadratureResult coarse = integrate_adaptive(f, 0.0, 1.0, 8, 1e-10);
  const QuadratureResult fine = integrate_adaptive(f, 0.0, 1.0, 512, 1e-13);
  CHECK(coarse.error_estimate <= 1e-10);
  CHECK(std::abs(coarse.value - fine.value) < 1e-9);
  CHECK(coarse.intervals >= 8);
}

}  // namespace
