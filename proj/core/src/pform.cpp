// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/pform.hpp"

#include <algorithm>
#include <cmath>

namespace holonomy {

namespace {

/// Determinant of a small real matrix by Gaussian elimination with partial
/// pivoting. m is row-major p x p.
double det_real(std::vector<std::vector<double>> m) {
  const std::size_t p = m.size();
  double det = 1.0;
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (m[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < p; ++r) {
      const double q = m[r][col] / m[col][col];
      for (std::size_t c = col; c < p; ++c) m[r][c] -= q * m[col][c];
    }
  }
  return det;
}

/// Exact determinant of a small integer matrix by Laplace expansion.
std::int64_t det_int(const std::vector<std::vector<std::int64_t>>& m) {
  const std::size_t p = m.size();
  if (p == 0) return 1;
  if (p == 1) return m[0][0];
  if (p == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  std::int64_t acc = 0;
  for (std::size_t j = 0; j < p; ++j) {
    if (m[0][j] == 0) continue;
    std::vector<std::vector<std::int64_t>> minor(p - 1);
    for (std::size_t r = 1; r < p; ++r) {
      for (std::size_t c = 0; c < p; ++c) {
        if (c != j) minor[r - 1].push_back(m[r][c]);
      }
    }
    const std::int64_t cofactor = det_int(minor);
    acc += (j % 2 == 0 ? 1 : -1) * m[0][j] * cofactor;
  }
  return acc;
}

/// Sign of inserting k into the strictly increasing index set I as
/// dx_k ^ dx_I, i.e. (-1)^(number of entries of I below k).
int insert_sign(const PForm::Index& idx, std::size_t k) {
  std::size_t below = 0;
  for (std::size_t i : idx) {
    if (i < k) ++below;
  }
  return below % 2 == 0 ? 1 : -1;
}

}  // namespace

PForm::PForm(std::size_t degree, std::size_t dim) : degree_(degree), dim_(dim) {}

PForm PForm::function(Expr f, std::size_t dim) {
  PForm w(0, dim);
  if (!f.is_zero()) w.terms_[{}] = std::move(f);
  return w;
}

PForm PForm::d_coord(std::size_t i, std::size_t dim) {
  if (i >= dim) fail(Errc::DomainMismatch, "coordinate index out of range");
  PForm w(1, dim);
  w.terms_[{i}] = Expr::constant(1.0);
  return w;
}

bool PForm::is_zero() const {
  for (const auto& [idx, c] : terms_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

void PForm::check_index(const Index& idx) const {
  if (idx.size() != degree_) {
    fail(Errc::DomainMismatch, "multi-index length must equal form degree");
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= dim_) {
      fail(Errc::DomainMismatch, "multi-index entry out of range");
    }
    if (i > 0 && idx[i - 1] >= idx[i]) {
      fail(Errc::DomainMismatch, "multi-index must be strictly increasing");
    }
  }
}

void PForm::set(Index idx, Expr coeff) {
  check_index(idx);
  if (coeff.is_zero()) {
    terms_.erase(idx);
  } else {
    terms_[std::move(idx)] = std::move(coeff);
  }
}

Expr PForm::coeff(const Index& idx) const {
  check_index(idx);
  auto it = terms_.find(idx);
  return it == terms_.end() ? Expr() : it->second;
}

PForm PForm::operator+(const PForm& other) const {
  if (degree_ != other.degree_ || dim_ != other.dim_) {
    fail(Errc::DomainMismatch, "form degree and dimension must agree");
  }
  PForm out(degree_, dim_);
  out.terms_ = terms_;
  for (const auto& [idx, c] : other.terms_) {
    auto it = out.terms_.find(idx);
    if (it == out.terms_.end()) {
      out.terms_[idx] = c;
    } else {
      Expr s = it->second + c;
      if (s.is_zero()) {
        out.terms_.erase(it);
      } else {
        it->second = std::move(s);
      }
    }
  }
  return out;
}

PForm PForm::operator-() const {
  PForm out(degree_, dim_);
  for (const auto& [idx, c] : terms_) out.terms_[idx] = -c;
  return out;
}

PForm PForm::operator-(const PForm& other) const { return *this + (-other); }

PForm PForm::scaled(const Expr& f) const {
  PForm out(degree_, dim_);
  if (f.is_zero()) return out;
  for (const auto& [idx, c] : terms_) {
    Expr s = f * c;
    if (!s.is_zero()) out.terms_[idx] = std::move(s);
  }
  return out;
}

PForm PForm::wedge(const PForm& other) const {
  if (dim_ != other.dim_) {
    fail(Errc::DomainMismatch, "wedge requires equal ambient dimensions");
  }
  PForm out(degree_ + other.degree_, dim_);
  if (out.degree_ > dim_) return out;
  for (const auto& [ia, ca] : terms_) {
    for (const auto& [ib, cb] : other.terms_) {
      Index merged = ia;
      int sign = 1;
      bool zero = false;
      // Insert entries of ib one by one, tracking the interleaving parity.
      for (std::size_t k : ib) {
        if (std::find(merged.begin(), merged.end(), k) != merged.end()) {
          zero = true;
          break;
        }
        std::size_t above = 0;
        for (std::size_t i : merged) {
          if (i > k) ++above;
        }
        if (above % 2 == 1) sign = -sign;
        merged.insert(std::upper_bound(merged.begin(), merged.end(), k), k);
      }
      if (zero) continue;
      Expr c = ca * cb;
      if (sign < 0) c = -c;
      auto it = out.terms_.find(merged);
      if (it == out.terms_.end()) {
        if (!c.is_zero()) out.terms_[std::move(merged)] = std::move(c);
      } else {
        Expr s = it->second + c;
        if (s.is_zero()) {
          out.terms_.erase(it);
        } else {
          it->second = std::move(s);
        }
      }
    }
  }
  return out;
}

std::string PForm::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [idx, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")";
    for (std::size_t i : idx) out += " dx" + std::to_string(i + 1);
  }
  return out;
}

PForm exterior_d(const PForm& w) {
  PForm out(w.degree() + 1, w.dim());
  if (out.degree() > w.dim()) return out;
  for (const auto& [idx, c] : w.terms()) {
    for (std::size_t k = 0; k < w.dim(); ++k) {
      if (std::find(idx.begin(), idx.end(), k) != idx.end()) continue;
      Expr dk = c.diff(Symbol::coord(k));
      if (dk.is_zero()) continue;
      if (insert_sign(idx, k) < 0) dk = -dk;
      PForm::Index target = idx;
      target.insert(std::upper_bound(target.begin(), target.end(), k), k);
      Expr prev = out.coeff(target);
      out.set(std::move(target), prev + dk);
    }
  }
  return out;
}

PForm dlog(const Expr& f, std::size_t dim) {
  if (!f.certified_nonvanishing()) {
    fail(Errc::PossibleZero,
         "dlog requires a structurally nonvanishing expression, got '" +
             f.str() + "'");
  }
  PForm out(1, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    Expr dk = f.diff(Symbol::coord(k));
    if (!dk.is_zero()) out.set({k}, dk / f);
  }
  return out;
}

std::complex<double> eval_form(const PForm& w, const EvalEnv& env,
                               const std::vector<std::vector<double>>& vectors) {
  if (vectors.size() != w.degree()) {
    fail(Errc::InvalidArgument, "vector count must equal form degree");
  }
  for (const auto& v : vectors) {
    if (v.size() != w.dim()) {
      fail(Errc::DomainMismatch, "tangent vector dimension mismatch");
    }
  }
  const std::size_t p = w.degree();
  std::complex<double> acc = 0.0;
  for (const auto& [idx, c] : w.terms()) {
    std::vector<std::vector<double>> minor(p, std::vector<double>(p));
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = 0; b < p; ++b) minor[a][b] = vectors[b][idx[a]];
    }
    const double d = det_real(std::move(minor));
    if (d != 0.0) acc += c.eval(env) * d;
  }
  return acc;
}

std::complex<double> eval_form(const PForm& w, const std::vector<double>& point,
                               const std::vector<std::vector<double>>& vectors) {
  if (point.size() != w.dim()) {
    fail(Errc::DomainMismatch, "point dimension mismatch");
  }
  EvalEnv env;
  env.set_coords(point);
  return eval_form(w, env, vectors);
}

std::map<std::uint8_t, Expr> affine_subst(const AffineMap& f) {
  const std::size_t d = f.dim();
  std::map<std::uint8_t, Expr> subst;
  for (std::size_t k = 0; k < d; ++k) {
    Expr e = Expr::constant(f.translation[k].to_double());
    for (std::size_t j = 0; j < d; ++j) {
      const std::int64_t r = f.linear[k][j];
      if (r == 0) continue;
      e = e + Expr::constant(static_cast<double>(r)) * Expr::var(Symbol::coord(j));
    }
    subst.emplace(Symbol::coord(k).id, std::move(e));
  }
  return subst;
}

PForm pullback_form(const PForm& w, const AffineMap& f) {
  if (f.dim() != w.dim()) {
    fail(Errc::DomainMismatch, "pullback dimension mismatch");
  }
  const std::size_t d = w.dim();
  const std::size_t p = w.degree();
  const std::map<std::uint8_t, Expr> subst = affine_subst(f);

  PForm out(p, d);
  if (p > d) return out;

  // Enumerate strictly increasing source indices J; for each target index I
  // of w the contribution is det(R[I, J]) * (coeff_I after substitution).
  std::vector<std::size_t> J(p);
  for (std::size_t i = 0; i < p; ++i) J[i] = i;
  auto advance = [&]() -> bool {
    if (p == 0) return false;
    std::size_t i = p;
    while (i > 0) {
      --i;
      if (J[i] + 1 <= d - (p - i)) {
        ++J[i];
        for (std::size_t k = i + 1; k < p; ++k) J[k] = J[k - 1] + 1;
        return true;
      }
    }
    return false;
  };

  do {
    Expr total;
    for (const auto& [I, c] : w.terms()) {
      std::vector<std::vector<std::int64_t>> minor(p, std::vector<std::int64_t>(p));
      for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) minor[a][b] = f.linear[I[a]][J[b]];
      }
      const std::int64_t det = det_int(minor);
      if (det == 0) continue;
      total = total + Expr::constant(static_cast<double>(det)) * c.subst(subst);
    }
    if (!total.is_zero()) out.set(J, std::move(total));
  } while (advance());

  return out;
}

}  // namespace holonomy
