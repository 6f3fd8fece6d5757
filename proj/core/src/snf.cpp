// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/snf.hpp"

#include <algorithm>

#include "holonomy/error.hpp"

namespace holonomy {

namespace {

IntMat identity(std::size_t n) {
  IntMat m(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

}  // namespace

SmithResult smith_normal_form(IntMat a, const SmithOptions& opt) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  SmithResult res;
  if (opt.track_U) res.U = identity(rows);
  if (opt.track_Uinv) res.Uinv = identity(rows);
  if (opt.track_V) res.V = identity(cols);
  if (opt.track_Vinv) res.Vinv = identity(cols);

  // Row ops act as U*A (and Uinv absorbs the inverse op on the right);
  // column ops act as A*V (Vinv absorbs the inverse on the left).
  auto row_swap = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    if (opt.track_U) std::swap(res.U[i], res.U[j]);
    if (opt.track_Uinv) {
      for (std::size_t k = 0; k < rows; ++k) {
        std::swap(res.Uinv[k][i], res.Uinv[k][j]);
      }
    }
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < rows; ++k) std::swap(a[k][i], a[k][j]);
    if (opt.track_V) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(res.V[k][i], res.V[k][j]);
    }
    if (opt.track_Vinv) std::swap(res.Vinv[i], res.Vinv[j]);
  };
  // row i += q * row j
  auto row_add = [&](std::size_t i, std::size_t j, const BigInt& q) {
    for (std::size_t k = 0; k < cols; ++k) a[i][k] += q * a[j][k];
    if (opt.track_U) {
      for (std::size_t k = 0; k < rows; ++k) res.U[i][k] += q * res.U[j][k];
    }
    if (opt.track_Uinv) {
      for (std::size_t k = 0; k < rows; ++k) res.Uinv[k][j] -= q * res.Uinv[k][i];
    }
  };
  // col i += q * col j
  auto col_add = [&](std::size_t i, std::size_t j, const BigInt& q) {
    for (std::size_t k = 0; k < rows; ++k) a[k][i] += q * a[k][j];
    if (opt.track_V) {
      for (std::size_t k = 0; k < cols; ++k) res.V[k][i] += q * res.V[k][j];
    }
    if (opt.track_Vinv) {
      for (std::size_t k = 0; k < cols; ++k) res.Vinv[j][k] -= q * res.Vinv[i][k];
    }
  };
  auto row_negate = [&](std::size_t i) {
    for (auto& v : a[i]) v = -v;
    if (opt.track_U) {
      for (auto& v : res.U[i]) v = -v;
    }
    if (opt.track_Uinv) {
      for (std::size_t k = 0; k < rows; ++k) res.Uinv[k][i] = -res.Uinv[k][i];
    }
  };

  const std::size_t bound = std::min(rows, cols);
  std::size_t t = 0;
  for (; t < bound; ++t) {
    // Pivot selection: smallest nonzero magnitude in the remaining block,
    // which keeps intermediate entries small on the matrices in play.
    std::size_t pi = t, pj = t;
    BigInt best = 0;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (a[i][j] == 0) continue;
        BigInt mag = abs(a[i][j]);
        if (best == 0 || mag < best) {
          best = mag;
          pi = i;
          pj = j;
        }
      }
    }
    if (best == 0) break;
    if (pi != t) row_swap(t, pi);
    if (pj != t) col_swap(t, pj);

    // Clear row and column t; a successful pass may recreate entries, so
    // iterate until the pivot divides everything it must.
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        BigInt q = a[i][t] / a[t][t];
        if (q != 0) row_add(i, t, -q);
        if (a[i][t] != 0) {
          // Remainder left: swap up to shrink the pivot and restart.
          row_swap(t, i);
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        BigInt q = a[t][j] / a[t][t];
        if (q != 0) col_add(j, t, -q);
        if (a[t][j] != 0) {
          col_swap(t, j);
          dirty = true;
        }
      }
    }
    if (a[t][t] < 0) row_negate(t);
  }
  res.rank = t;

  // Enforce the divisibility chain d1 | d2 | ... by folding offending pairs.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < res.rank; ++i) {
      if (a[i + 1][i + 1] % a[i][i] == 0) continue;
      changed = true;
      // Standard 2x2 fix-up: gcd goes to position i, lcm to i+1.
      col_add(i, i + 1, 1);
      bool dirty = true;
      while (dirty) {
        dirty = false;
        if (a[i + 1][i] != 0) {
          BigInt q = a[i + 1][i] / a[i][i];
          if (q != 0) row_add(i + 1, i, -q);
          if (a[i + 1][i] != 0) {
            row_swap(i, i + 1);
            dirty = true;
          }
        }
        if (a[i][i + 1] != 0) {
          BigInt q = a[i][i + 1] / a[i][i];
          if (q != 0) col_add(i + 1, i, -q);
          if (a[i][i + 1] != 0) {
            col_swap(i, i + 1);
            dirty = true;
          }
        }
      }
      if (a[i][i] < 0) row_negate(i);
      if (a[i + 1][i + 1] < 0) row_negate(i + 1);
    }
  }

  res.diag.resize(bound);
  for (std::size_t i = 0; i < bound; ++i) res.diag[i] = a[i][i];
  return res;
}

RowLatticeAccumulator::RowLatticeAccumulator(std::size_t cols)
    : cols_(cols), pivot_rows_(cols) {}

void RowLatticeAccumulator::add_row(std::vector<BigInt> row) {
  if (row.size() != cols_) {
    fail(Errc::InvalidArgument, "row width mismatch in lattice accumulator");
  }
  std::size_t j = 0;
  while (j < cols_) {
    if (row[j] == 0) {
      ++j;
      continue;
    }
    if (pivot_rows_[j].empty()) {
      if (row[j] < 0) {
        for (auto& v : row) v = -v;
      }
      pivot_rows_[j] = std::move(row);
      return;
    }
    // Euclidean exchange at column j until the incoming row vanishes there.
    auto& pivot = pivot_rows_[j];
    while (row[j] != 0) {
      BigInt q = row[j] / pivot[j];
      if (q != 0) {
        for (std::size_t k = j; k < cols_; ++k) row[k] -= q * pivot[k];
      }
      if (row[j] != 0) std::swap(pivot, row);
    }
    if (pivot[j] < 0) {
      for (auto& v : pivot) v = -v;
    }
    ++j;
  }
}

IntMat RowLatticeAccumulator::basis() const {
  IntMat out;
  for (const auto& r : pivot_rows_) {
    if (!r.empty()) out.push_back(r);
  }
  return out;
}

std::vector<BigInt> mat_vec(const IntMat& m, const std::vector<BigInt>& v) {
  std::vector<BigInt> out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (m[i][j] != 0 && v[j] != 0) out[i] += m[i][j] * v[j];
    }
  }
  return out;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = k ? b[0].size() : 0;
  IntMat out(n, std::vector<BigInt>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (b[l][j] != 0) out[i][j] += a[i][l] * b[l][j];
      }
    }
  }
  return out;
}

}  // namespace holonomy
