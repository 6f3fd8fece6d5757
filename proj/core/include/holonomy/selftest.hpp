// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

/// \file
/// End-to-end identity suite: seeded random data drives every transgression
/// identity the library promises, at fixed tolerances and wall-time budgets.
/// Deterministic and self-contained; needs no external inputs.

#include <functional>
#include <string>
#include <vector>

namespace holonomy {

/// Outcome of one suite entry. pass requires both residual <= tolerance and
/// seconds <= budget.
struct SelftestResult {
  std::string name;
  bool pass = false;
  /// Worst observed defect across the entry's samples.
  double residual = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  double budget = 0.0;
  /// Sample counts, backend split, convergence ratios, failure specifics.
  std::string detail;
};

/// Runs the full suite with fixed seeds. Entries never throw; construction
/// or evaluation errors are reported as failures with the message in
/// detail. The callback, when given, receives each result as soon as its
/// entry finishes.
std::vector<SelftestResult> run_selftest(
    const std::function<void(const SelftestResult&)>& on_result = {});

/// One-line rendering: PASS/FAIL, name, residual, tolerance, time, detail.
std::string selftest_line(const SelftestResult& r);

}  // namespace holonomy
