// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holonomy/error.hpp"

namespace holonomy {

using GroupElement = std::uint16_t;

/// Finite group given by a full multiplication table. Construction validates
/// the group laws (closure, associativity, identity, inverses) and throws
/// Errc::InvalidArgument when they fail; the order cap is 256.
class FiniteGroup {
 public:
  static constexpr std::size_t kMaxOrder = 256;

  FiniteGroup(std::vector<std::vector<GroupElement>> table,
              std::vector<std::string> labels, std::string name);

  /// Parses a group description:
  ///   "Z/n"                cyclic group of order n
  ///   "Z/nxZ/m[xZ/k...]"   direct product of cyclic groups
  ///   "S3", "D4", "Q8"     builtin nonabelian tables
  static FiniteGroup parse(std::string_view spec);

  static FiniteGroup cyclic(std::uint32_t n);
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);
  static FiniteGroup symmetric3();
  static FiniteGroup dihedral4();
  static FiniteGroup quaternion8();

  std::size_t order() const { return order_; }
  GroupElement identity() const { return identity_; }
  GroupElement mul(GroupElement a, GroupElement b) const {
    return table_[a][b];
  }
  GroupElement inv(GroupElement a) const { return inverse_[a]; }
  GroupElement conj(GroupElement v, GroupElement a) const {
    return mul(mul(inv(a), v), a);
  }

  const std::string& label(GroupElement a) const { return labels_[a]; }
  const std::string& name() const { return name_; }

  bool is_abelian() const;
  std::uint64_t exponent() const;

 private:
  std::size_t order_;
  std::vector<std::vector<GroupElement>> table_;
  std::vector<GroupElement> inverse_;
  std::vector<std::string> labels_;
  GroupElement identity_;
  std::string name_;
};

/// Conjugacy classes and centralizers, in deterministic order: classes are
/// sorted by their smallest element, class members and centralizer elements
/// ascending.
struct ConjugacyData {
  std::vector<GroupElement> class_reps;
  std::vector<std::vector<GroupElement>> classes;
  std::vector<std::vector<GroupElement>> centralizers;
};

ConjugacyData conjugacy_data(const FiniteGroup& group);

}  // namespace holonomy
