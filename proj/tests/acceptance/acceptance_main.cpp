// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: runs the seeded end-to-end identity suite and prints one
// verdict line per criterion. Exits nonzero when any criterion fails its
// residual tolerance or wall-time budget.

#include <cstdio>

#include "holonomy/selftest.hpp"

int main() {
  bool ok = true;
  holonomy::run_selftest([&ok](const holonomy::SelftestResult& r) {
    std::puts(holonomy::selftest_line(r).c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  });
  std::puts(ok ? "acceptance: PASS" : "acceptance: FAIL");
  return ok ? 0 : 1;
}
