// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

/// \file
/// Scenario files: a JSON description of one groupoid, optional cochain
/// data, and named loops, loop arrows, tangent fields, and loop families,
/// plus verification settings. Rational values are written as "p/q" strings
/// to stay exact; unit-modulus table entries are written as rational turn
/// counts; smooth data is written as expression strings.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "holonomy/cochain.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/loop.hpp"

namespace holonomy {

/// Tangent field together with the name of the loop it lives on; the loop
/// is looked up in Scenario::loops.
struct ScenarioTangent {
  std::string loop;
  LoopTangent tangent;
};

/// Parsed scenario. Cross references between sections are resolved during
/// parsing; every validation error names the JSON path of the offending
/// node.
struct Scenario {
  explicit Scenario(Groupoid g) : groupoid(std::move(g)) {}

  Groupoid groupoid;
  std::optional<LineData> line;
  std::optional<GerbeData> gerbe;
  std::optional<FlatNData> flat;
  std::map<std::string, SegmentedLoop> loops;
  std::map<std::string, LoopArrow> loop_arrows;
  std::map<std::string, ScenarioTangent> tangents;
  std::map<std::string, LoopFamily> families;
  VerifyOptions settings;
  double form_tol = 1e-4;
  double fd_step = 1e-3;
  /// Hex FNV-1a digest of the raw scenario text.
  std::string digest;
};

/// Parses scenario text. Throws Errc::SyntaxError with a JSON path on
/// malformed input and Errc::InvalidArgument on structurally valid input
/// that fails groupoid or loop validation.
Scenario parse_scenario(const std::string& text);

/// Reads and parses a scenario file. Throws Errc::IoError when the file
/// cannot be read.
Scenario load_scenario(const std::string& path);

}  // namespace holonomy
