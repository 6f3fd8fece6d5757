// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/error.hpp"

namespace holonomy {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::ActionNotCompatible: return "ActionNotCompatible";
    case Errc::NonInvertibleLinearPart: return "NonInvertibleLinearPart";
    case Errc::NotComposable: return "NotComposable";
    case Errc::InfiniteNerve: return "InfiniteNerve";
    case Errc::LevelTooLarge: return "LevelTooLarge";
    case Errc::GroupTooLarge: return "GroupTooLarge";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::EndpointMismatch: return "EndpointMismatch";
    case Errc::BadPartition: return "BadPartition";
    case Errc::DuplicateBreakpoint: return "DuplicateBreakpoint";
    case Errc::PartitionMismatch: return "PartitionMismatch";
    case Errc::QuadratureDiverged: return "QuadratureDiverged";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::PossibleZero: return "PossibleZero";
    case Errc::Overflow: return "Overflow";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace holonomy
