// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/group.hpp"

#include <algorithm>
#include <numeric>

namespace holonomy {

FiniteGroup::FiniteGroup(std::vector<std::vector<GroupElement>> table,
                         std::vector<std::string> labels, std::string name)
    : order_(table.size()),
      table_(std::move(table)),
      labels_(std::move(labels)),
      name_(std::move(name)) {
  if (order_ == 0 || order_ > kMaxOrder) {
    fail(Errc::InvalidArgument,
         "group order must be in [1, " + std::to_string(kMaxOrder) + "]");
  }
  for (const auto& row : table_) {
    if (row.size() != order_) {
      fail(Errc::InvalidArgument, "multiplication table is not square");
    }
    for (GroupElement v : row) {
      if (v >= order_) {
        fail(Errc::InvalidArgument, "table entry out of range");
      }
    }
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < order_; ++i) {
      labels_.push_back("g" + std::to_string(i));
    }
  }
  if (labels_.size() != order_) {
    fail(Errc::InvalidArgument, "label count does not match group order");
  }

  // Identity: the unique e with e*a = a*e = a for all a.
  bool found = false;
  for (GroupElement e = 0; e < order_; ++e) {
    bool ok = true;
    for (GroupElement a = 0; a < order_ && ok; ++a) {
      ok = table_[e][a] == a && table_[a][e] == a;
    }
    if (ok) {
      identity_ = e;
      found = true;
      break;
    }
  }
  if (!found) fail(Errc::InvalidArgument, "table has no identity element");

  inverse_.assign(order_, 0);
  for (GroupElement a = 0; a < order_; ++a) {
    bool has = false;
    for (GroupElement b = 0; b < order_; ++b) {
      if (table_[a][b] == identity_ && table_[b][a] == identity_) {
        inverse_[a] = b;
        has = true;
        break;
      }
    }
    if (!has) {
      fail(Errc::InvalidArgument,
           "element " + labels_[a] + " has no two-sided inverse");
    }
  }

  for (GroupElement a = 0; a < order_; ++a) {
    for (GroupElement b = 0; b < order_; ++b) {
      for (GroupElement c = 0; c < order_; ++c) {
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
          fail(Errc::InvalidArgument, "multiplication table is not associative");
        }
      }
    }
  }
}

FiniteGroup FiniteGroup::cyclic(std::uint32_t n) {
  if (n == 0 || n > kMaxOrder) {
    fail(Errc::InvalidArgument, "cyclic order out of range");
  }
  std::vector<std::vector<GroupElement>> table(n,
                                               std::vector<GroupElement>(n));
  std::vector<std::string> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    labels[i] = std::to_string(i);
    for (std::uint32_t j = 0; j < n; ++j) {
      table[i][j] = static_cast<GroupElement>((i + j) % n);
    }
  }
  return FiniteGroup(std::move(table), std::move(labels),
                     "Z/" + std::to_string(n));
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t n = a.order() * b.order();
  if (n > kMaxOrder) fail(Errc::GroupTooLarge, "product order exceeds cap");
  std::vector<std::vector<GroupElement>> table(n,
                                               std::vector<GroupElement>(n));
  std::vector<std::string> labels(n);
  auto pack = [&](std::size_t i, std::size_t j) {
    return static_cast<GroupElement>(i * b.order() + j);
  };
  for (std::size_t i = 0; i < a.order(); ++i) {
    for (std::size_t j = 0; j < b.order(); ++j) {
      labels[pack(i, j)] = "(" + a.label(static_cast<GroupElement>(i)) + "," +
                           b.label(static_cast<GroupElement>(j)) + ")";
      for (std::size_t k = 0; k < a.order(); ++k) {
        for (std::size_t l = 0; l < b.order(); ++l) {
          table[pack(i, j)][pack(k, l)] =
              pack(a.mul(static_cast<GroupElement>(i),
                         static_cast<GroupElement>(k)),
                   b.mul(static_cast<GroupElement>(j),
                         static_cast<GroupElement>(l)));
        }
      }
    }
  }
  return FiniteGroup(std::move(table), std::move(labels),
                     a.name() + "x" + b.name());
}

FiniteGroup FiniteGroup::symmetric3() {
  // Elements are permutations of {0,1,2} in lexicographic one-line order:
  // 012, 021, 102, 120, 201, 210. Product (p*q)(x) = q(p(x)), matching the
  // right-action convention used throughout.
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto index_of = [&](const int p[3]) {
    for (int i = 0; i < 6; ++i) {
      if (perms[i][0] == p[0] && perms[i][1] == p[1] && perms[i][2] == p[2]) {
        return i;
      }
    }
    return -1;
  };
  std::vector<std::vector<GroupElement>> table(6, std::vector<GroupElement>(6));
  std::vector<std::string> labels = {"e",   "(12)", "(01)",
                                     "(012)", "(021)", "(02)"};
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      int comp[3];
      for (int x = 0; x < 3; ++x) comp[x] = perms[j][perms[i][x]];
      table[i][j] = static_cast<GroupElement>(index_of(comp));
    }
  }
  return FiniteGroup(std::move(table), std::move(labels), "S3");
}

FiniteGroup FiniteGroup::dihedral4() {
  // r^4 = s^2 = e, s r s = r^-1; element 2a+b encodes r^a s^b.
  std::vector<std::vector<GroupElement>> table(8, std::vector<GroupElement>(8));
  std::vector<std::string> labels(8);
  auto pack = [](int a, int b) {
    return static_cast<GroupElement>(2 * a + b);
  };
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 2; ++b) {
      labels[pack(a, b)] =
          (a ? "r" + std::to_string(a) : std::string("e")) + (b ? "s" : "");
      if (a == 0 && b == 1) labels[pack(a, b)] = "s";
      for (int c = 0; c < 4; ++c) {
        for (int d = 0; d < 2; ++d) {
          // (r^a s^b)(r^c s^d) = r^(a + c*(-1)^b) s^(b+d)
          int e = b ? (a - c) : (a + c);
          e = ((e % 4) + 4) % 4;
          table[pack(a, b)][pack(c, d)] = pack(e, (b + d) % 2);
        }
      }
    }
  }
  return FiniteGroup(std::move(table), std::move(labels), "D4");
}

FiniteGroup FiniteGroup::quaternion8() {
  // {1, -1, i, -i, j, -j, k, -k} with the usual quaternion relations.
  // Encode q = s * u with sign s in {+,-} and unit u in {1,i,j,k}:
  // index = 2*u + (s<0), u in {0:1, 1:i, 2:j, 3:k}.
  auto mul_unit = [](int a, int b, int& sign) {
    // Multiplication table of {1,i,j,k} with sign output.
    static const int unit[4][4] = {{0, 1, 2, 3},
                                   {1, 0, 3, 2},
                                   {2, 3, 0, 1},
                                   {3, 2, 1, 0}};
    static const int sgn[4][4] = {{+1, +1, +1, +1},
                                  {+1, -1, +1, -1},
                                  {+1, -1, -1, +1},
                                  {+1, +1, -1, -1}};
    sign = sgn[a][b];
    return unit[a][b];
  };
  std::vector<std::vector<GroupElement>> table(8, std::vector<GroupElement>(8));
  std::vector<std::string> labels = {"1", "-1", "i", "-i",
                                     "j", "-j", "k", "-k"};
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      int ua = a / 2, sa = a % 2 ? -1 : 1;
      int ub = b / 2, sb = b % 2 ? -1 : 1;
      int sign;
      int u = mul_unit(ua, ub, sign);
      int s = sa * sb * sign;
      table[a][b] = static_cast<GroupElement>(2 * u + (s < 0 ? 1 : 0));
    }
  }
  return FiniteGroup(std::move(table), std::move(labels), "Q8");
}

FiniteGroup FiniteGroup::parse(std::string_view spec) {
  if (spec == "S3") return symmetric3();
  if (spec == "D4") return dihedral4();
  if (spec == "Q8") return quaternion8();

  std::vector<std::uint32_t> orders;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    if (spec.compare(pos, 2, "Z/") != 0) {
      fail(Errc::SyntaxError,
           "group spec must be Z/n products or a builtin name, got '" +
               std::string(spec) + "'");
    }
    pos += 2;
    std::size_t start = pos;
    std::uint64_t n = 0;
    while (pos < spec.size() && spec[pos] >= '0' && spec[pos] <= '9') {
      n = n * 10 + (spec[pos] - '0');
      if (n > kMaxOrder) fail(Errc::GroupTooLarge, "cyclic factor too large");
      ++pos;
    }
    if (pos == start || n == 0) {
      fail(Errc::SyntaxError, "expected a positive order after Z/");
    }
    orders.push_back(static_cast<std::uint32_t>(n));
    if (pos < spec.size()) {
      if (spec[pos] != 'x') {
        fail(Errc::SyntaxError, "expected 'x' between factors");
      }
      ++pos;
      if (pos == spec.size()) {
        fail(Errc::SyntaxError, "trailing 'x' in group spec");
      }
    }
  }
  if (orders.empty()) fail(Errc::SyntaxError, "empty group spec");
  FiniteGroup g = cyclic(orders[0]);
  for (std::size_t i = 1; i < orders.size(); ++i) {
    g = product(g, cyclic(orders[i]));
  }
  return g;
}

bool FiniteGroup::is_abelian() const {
  for (GroupElement a = 0; a < order_; ++a) {
    for (GroupElement b = 0; b < a; ++b) {
      if (mul(a, b) != mul(b, a)) return false;
    }
  }
  return true;
}

std::uint64_t FiniteGroup::exponent() const {
  std::uint64_t e = 1;
  for (GroupElement a = 0; a < order_; ++a) {
    std::uint64_t ord = 1;
    GroupElement x = a;
    while (x != identity_) {
      x = mul(x, a);
      ++ord;
    }
    e = std::lcm(e, ord);
  }
  return e;
}

ConjugacyData conjugacy_data(const FiniteGroup& group) {
  const std::size_t n = group.order();
  ConjugacyData out;
  std::vector<bool> seen(n, false);
  for (GroupElement v = 0; v < n; ++v) {
    if (seen[v]) continue;
    std::vector<GroupElement> cls;
    for (GroupElement a = 0; a < n; ++a) {
      GroupElement w = group.conj(v, a);
      if (!seen[w]) {
        seen[w] = true;
        cls.push_back(w);
      }
    }
    std::sort(cls.begin(), cls.end());
    out.class_reps.push_back(cls.front());
    out.classes.push_back(std::move(cls));
  }
  for (GroupElement rep : out.class_reps) {
    std::vector<GroupElement> cent;
    for (GroupElement a = 0; a < n; ++a) {
      if (group.mul(rep, a) == group.mul(a, rep)) cent.push_back(a);
    }
    out.centralizers.push_back(std::move(cent));
  }
  return out;
}

}  // namespace holonomy
