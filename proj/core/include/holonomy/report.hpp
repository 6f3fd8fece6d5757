// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

/// \file
/// Command reports: named checks plus tabulated values, with a canonical
/// machine rendering (versioned schema, fixed field order) and a human
/// rendering derived from the same content.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "holonomy/cochain.hpp"

namespace holonomy {

/// Titled grid of preformatted cells emitted by a command.
struct ReportTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Outcome of one command run. The machine rendering is the contract; the
/// human rendering presents the same fields and nothing else.
struct Report {
  std::string command;
  std::string scenario_digest = "builtin";
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::vector<ReportTable> tables;
  /// Wall time is emitted as 0 unless timing is set, so that identical
  /// inputs produce byte-identical machine reports.
  double wall_ms = 0.0;
  bool timing = false;

  bool pass() const;
  void add(CheckResult check);
  void absorb(const VerifyReport& verify);
};

/// 64-bit FNV-1a hash of raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

/// fnv1a64 rendered as 16 lowercase hex digits.
std::string digest_hex(std::string_view bytes);

/// Canonical machine rendering as JSON text with a trailing newline.
std::string machine_report(const Report& report);

/// Human rendering of exactly the machine report's content.
std::string human_report(const Report& report);

}  // namespace holonomy
