// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/scalar.hpp"

#include <cstdio>

namespace holonomy {

std::string Scalar::str() const {
  if (exact_) return "e(" + phase_.str() + ")";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", value_.real(),
                value_.imag());
  return buf;
}

}  // namespace holonomy
