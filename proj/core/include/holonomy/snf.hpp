// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace holonomy {

using BigInt = boost::multiprecision::cpp_int;
using IntMat = std::vector<std::vector<BigInt>>;

/// Outputs of smith_normal_form. With all transforms enabled the invariants
/// are U*A*V = S, U*Uinv = I, V*Vinv = I; S is diagonal with
/// S[0] | S[1] | ... | S[rank-1], all positive, zeros afterwards.
struct SmithResult {
  std::vector<BigInt> diag;  // length min(rows, cols)
  std::size_t rank = 0;
  IntMat U, Uinv;  // rows x rows, tracked on demand
  IntMat V, Vinv;  // cols x cols, tracked on demand
};

struct SmithOptions {
  bool track_U = false;
  bool track_Uinv = false;
  bool track_V = false;
  bool track_Vinv = false;
};

/// Smith normal form over Z with exact big-integer arithmetic.
SmithResult smith_normal_form(IntMat a, const SmithOptions& opt = {});

/// Basis of the row lattice of a (possibly very tall) integer matrix,
/// accumulated row by row; the result has at most `cols` rows, each with a
/// distinct pivot column. Row order follows pivot columns ascending.
class RowLatticeAccumulator {
 public:
  explicit RowLatticeAccumulator(std::size_t cols);

  void add_row(std::vector<BigInt> row);

  /// Extracts the accumulated basis (rows with pivots, ascending).
  IntMat basis() const;

 private:
  std::size_t cols_;
  // pivot_rows_[j] is either empty or a row whose first nonzero is column j.
  std::vector<std::vector<BigInt>> pivot_rows_;
};

/// Convenience: mat * vec with exact arithmetic.
std::vector<BigInt> mat_vec(const IntMat& m, const std::vector<BigInt>& v);

/// Convenience: mat * mat with exact arithmetic.
IntMat mat_mul(const IntMat& a, const IntMat& b);

}  // namespace holonomy
