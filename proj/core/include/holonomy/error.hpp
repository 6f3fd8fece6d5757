// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holonomy {

/// Machine-readable failure codes carried by every thrown Error.
enum class Errc {
  ActionNotCompatible,
  NonInvertibleLinearPart,
  NotComposable,
  InfiniteNerve,
  LevelTooLarge,
  GroupTooLarge,
  SyntaxError,
  DomainMismatch,
  EndpointMismatch,
  BadPartition,
  DuplicateBreakpoint,
  PartitionMismatch,
  QuadratureDiverged,
  StepTooLarge,
  PossibleZero,
  Overflow,
  InvalidArgument,
  IoError,
};

std::string_view errc_name(Errc code);

/// Exception type used across the library. `code()` is stable API; the
/// message is diagnostic text for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace holonomy
