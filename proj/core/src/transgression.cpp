// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/transgression.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "holonomy/error.hpp"

namespace holonomy {

namespace {

constexpr std::complex<double> kZero{0.0, 0.0};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::uint32_t segment_chart(const SegmentedLoop& loop, std::size_t i) {
  return *loop.segment(i).chart();
}

/// Nerve tuple of the connecting arrow at breakpoint b of a loop.
NerveTuple arrow_tuple(const Groupoid& gpd, const SegmentedLoop& loop,
                       std::size_t b) {
  NerveTuple tup;
  tup.base = loop.connecting_arrow(b).src;
  if (gpd.kind() == Groupoid::Kind::Action) {
    tup.elems = {loop.connecting_arrow(b).g};
  } else {
    tup.charts = {loop.connecting_arrow(b).chart_from,
                  loop.connecting_arrow(b).chart_to};
  }
  return tup;
}

/// Key of the 1-form governing the arrow path Lambda_i over segment i.
TupleKey arrow_form_key(const Groupoid& gpd, const LoopArrow& arrow,
                        std::size_t i) {
  if (gpd.kind() == Groupoid::Kind::Action) {
    return {static_cast<std::uint32_t>(arrow.elem(i))};
  }
  return {segment_chart(arrow.source(), i), segment_chart(arrow.target(), i)};
}

/// Key of the level-0 form family over segment i of a loop.
TupleKey base_form_key(const Groupoid& gpd, const SegmentedLoop& loop,
                       std::size_t i) {
  if (gpd.kind() == Groupoid::Kind::Action) {
    return {};
  }
  return {segment_chart(loop, i)};
}

/// Key of the 1-form at the connecting arrow of breakpoint b.
TupleKey connecting_form_key(const Groupoid& gpd, const SegmentedLoop& loop,
                             std::size_t b) {
  const Arrow& a = loop.connecting_arrow(b);
  if (gpd.kind() == Groupoid::Kind::Action) {
    return {static_cast<std::uint32_t>(a.g)};
  }
  return {a.chart_from, a.chart_to};
}

}  // namespace

Scalar HolonomyMap::operator()(const Groupoid& gpd,
                               const SegmentedLoop& psi) const {
  Scalar out;
  for (std::size_t b = 0; b < psi.size(); ++b) {
    out = out * data_.h.eval(gpd, arrow_tuple(gpd, psi, b)).inverse();
  }
  if (!data_.A.is_zero()) {
    std::complex<double> sum = kZero;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      sum += integrate_along(data_.A.at(base_form_key(gpd, psi, i)),
                             psi.segment(i));
    }
    if (sum != kZero) {
      out = out * Scalar::of(std::exp(sum));
    }
  }
  return out;
}

Scalar tau1_eval(const Groupoid& gpd, const LineData& data,
                 const SegmentedLoop& psi) {
  return HolonomyMap(data)(gpd, psi);
}

Scalar TransgressedBundle::F(const Groupoid& gpd,
                             const LoopArrow& arrow) const {
  const SegmentedLoop& psi = arrow.source();
  const SegmentedLoop& phi = arrow.target();
  const std::size_t m = psi.size();
  const bool action = gpd.kind() == Groupoid::Kind::Action;
  Scalar out;
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t nb = (b + 1) % m;
    NerveTuple num;
    num.base = psi.connecting_arrow(b).src;
    NerveTuple den;
    den.base = psi.connecting_arrow(b).src;
    if (action) {
      num.elems = {psi.connecting_arrow(b).g, arrow.elem(nb)};
      den.elems = {arrow.elem(b), phi.connecting_arrow(b).g};
    } else {
      num.charts = {segment_chart(psi, b), segment_chart(psi, nb),
                    segment_chart(phi, nb)};
      den.charts = {segment_chart(psi, b), segment_chart(phi, b),
                    segment_chart(phi, nb)};
    }
    out = out * data_.h.eval(gpd, num) / data_.h.eval(gpd, den);
  }
  if (!data_.A.is_zero()) {
    std::complex<double> sum = kZero;
    for (std::size_t i = 0; i < m; ++i) {
      sum += integrate_along(data_.A.at(arrow_form_key(gpd, arrow, i)),
                             psi.segment(i));
    }
    if (sum != kZero) {
      out = out * Scalar::of(std::exp(sum));
    }
  }
  return out;
}

std::complex<double> TransgressedBundle::Delta(const Groupoid& gpd,
                                               const SegmentedLoop& psi,
                                               const LoopTangent& xi) const {
  std::complex<double> out = kZero;
  if (!data_.B.is_zero()) {
    for (std::size_t i = 0; i < psi.size(); ++i) {
      out += integrate_along(data_.B.at(base_form_key(gpd, psi, i)),
                             psi.segment(i), xi, i);
    }
  }
  if (!data_.A.is_zero()) {
    for (std::size_t b = 0; b < psi.size(); ++b) {
      PForm a = data_.A.at(connecting_form_key(gpd, psi, b));
      if (a.is_zero()) continue;
      const PathSegment& seg = psi.segment(b);
      out += eval_form(a, seg.at(seg.t1()), {xi.at(b, seg.t1())});
    }
  }
  return out;
}

TransgressedBundle tau2_build(GerbeData g) {
  return TransgressedBundle(std::move(g));
}

Scalar F_eval(const Groupoid& gpd, const TransgressedBundle& b,
              const LoopArrow& arrow) {
  return b.F(gpd, arrow);
}

std::complex<double> Delta_eval(const Groupoid& gpd,
                                const TransgressedBundle& b,
                                const SegmentedLoop& psi,
                                const LoopTangent& xi) {
  return b.Delta(gpd, psi, xi);
}

Scalar FlatTransgression::F(const Groupoid& gpd,
                            const std::vector<LoopArrow>& chain) const {
  const std::size_t n = data_.n;
  if (n < 2) {
    fail(Errc::InvalidArgument,
         "degree must be at least 2; an empty arrow chain carries no loop");
  }
  if (chain.size() != n - 1) {
    fail(Errc::InvalidArgument,
         "expected a chain of " + std::to_string(n - 1) + " loop arrows, got " +
             std::to_string(chain.size()));
  }
  for (std::size_t a = 0; a + 1 < chain.size(); ++a) {
    compose_loop_arrows(gpd, chain[a], chain[a + 1]);
  }
  const bool action = gpd.kind() == Groupoid::Kind::Action;
  const SegmentedLoop& psi0 = chain.front().source();
  const std::size_t m = psi0.size();

  // loop_at(j) is the object psi^j of the chain.
  auto loop_at = [&](std::size_t j) -> const SegmentedLoop& {
    return j == 0 ? chain.front().source() : chain[j - 1].target();
  };

  Scalar out;
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t nb = (b + 1) % m;
    for (std::size_t j = 0; j < n; ++j) {
      NerveTuple tup;
      tup.base = psi0.connecting_arrow(b).src;
      if (action) {
        for (std::size_t a = 1; a <= j; ++a) {
          tup.elems.push_back(chain[a - 1].elem(b));
        }
        tup.elems.push_back(loop_at(j).connecting_arrow(b).g);
        for (std::size_t a = j + 1; a <= n - 1; ++a) {
          tup.elems.push_back(chain[a - 1].elem(nb));
        }
      } else {
        for (std::size_t a = 0; a <= j; ++a) {
          tup.charts.push_back(segment_chart(loop_at(a), b));
        }
        for (std::size_t a = j; a <= n - 1; ++a) {
          tup.charts.push_back(segment_chart(loop_at(a), nb));
        }
      }
      const std::int64_t sign = ((j + n) % 2 == 0) ? 1 : -1;
      out = out * data_.omega.eval(gpd, tup).pow(sign);
    }
  }
  if (data_.theta1.has_value() && !data_.theta1->is_zero()) {
    std::complex<double> sum = kZero;
    for (std::size_t i = 0; i < m; ++i) {
      TupleKey key;
      if (action) {
        for (std::size_t a = 0; a + 1 < n; ++a) {
          key.push_back(static_cast<std::uint32_t>(chain[a].elem(i)));
        }
      } else {
        for (std::size_t a = 0; a < n; ++a) {
          key.push_back(segment_chart(loop_at(a), i));
        }
      }
      sum += integrate_along(data_.theta1->at(key), psi0.segment(i));
    }
    if (sum != kZero) {
      out = out * Scalar::of(std::exp(sum));
    }
  }
  return out;
}

Scalar tau_n_flat_eval(const Groupoid& gpd, const FlatNData& data,
                       const std::vector<LoopArrow>& chain) {
  return FlatTransgression(data).F(gpd, chain);
}

std::complex<double> dlogF_fd(const Groupoid& gpd,
                              const TransgressedBundle& b,
                              const LoopFamily& fam, double step) {
  if (fam.params() != 1) {
    fail(Errc::InvalidArgument,
         "the finite difference needs a one-parameter family");
  }
  const double s = step > 0.0 ? step : fam.eps();
  if (s > fam.eps() + 1e-12) {
    fail(Errc::InvalidArgument, "step exceeds the family radius");
  }
  const std::complex<double> fp = b.F(gpd, fam.arrow_at(gpd, {s})).value();
  const std::complex<double> fm = b.F(gpd, fam.arrow_at(gpd, {-s})).value();
  const std::complex<double> ratio = fp / fm;
  if (std::abs(ratio - std::complex<double>(1.0, 0.0)) > 0.5) {
    fail(Errc::StepTooLarge,
         "F ratio " + fmt(std::abs(ratio)) +
             " is too far from 1 for a branch-free logarithm; shrink the "
             "step");
  }
  return std::log(ratio) / (2.0 * s);
}

std::complex<double> delta_Delta_eval(const Groupoid& gpd,
                                      const TransgressedBundle& b,
                                      const LoopFamily& fam) {
  LoopArrow base = fam.base(gpd);
  LoopTangent nu_src = fam.source_tangent(gpd, 0);
  LoopTangent nu_tgt = fam.target_tangent(gpd, 0);
  return b.Delta(gpd, base.target(), nu_tgt) -
         b.Delta(gpd, base.source(), nu_src);
}

VerifyReport check_commutation_square(const Groupoid& gpd, const LineData& c,
                                      const std::vector<LoopArrow>& arrows,
                                      const std::vector<LoopFamily>& families,
                                      double tol, double form_tol,
                                      double fd_step) {
  VerifyReport rep;
  TransgressedBundle bundle = tau2_build(total_coboundary(gpd, c));
  HolonomyMap holonomy(c);

  CheckResult fr{"commutation.function", 0.0, true, ""};
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    Scalar lhs = bundle.F(gpd, arrows[a]);
    Scalar rhs = holonomy(gpd, arrows[a].target()) /
                 holonomy(gpd, arrows[a].source());
    const double r = lhs.dist(rhs);
    if (r > fr.residual) {
      fr.residual = r;
      fr.witness = "arrow " + std::to_string(a) + ": |F - deltaH| = " + fmt(r);
    }
  }
  fr.pass = fr.residual <= tol;
  rep.add(fr);

  if (!families.empty()) {
    CheckResult dr{"commutation.connection", 0.0, true, ""};
    for (std::size_t f = 0; f < families.size(); ++f) {
      const LoopFamily& fam = families[f];
      LoopArrow base = fam.base(gpd);
      const std::complex<double> delta =
          bundle.Delta(gpd, base.source(), fam.source_tangent(gpd, 0));
      const std::complex<double> hp =
          holonomy(gpd, fam.arrow_at(gpd, {fd_step}).source()).value();
      const std::complex<double> hm =
          holonomy(gpd, fam.arrow_at(gpd, {-fd_step}).source()).value();
      const std::complex<double> ratio = hp / hm;
      if (std::abs(ratio - std::complex<double>(1.0, 0.0)) > 0.5) {
        dr.residual = std::abs(ratio);
        dr.witness = "family " + std::to_string(f) +
                     ": H ratio too far from 1 at step " + fmt(fd_step);
        dr.pass = false;
        rep.add(dr);
        return rep;
      }
      const std::complex<double> dlog_h =
          std::log(ratio) / (2.0 * fd_step);
      const double r = std::abs(delta + dlog_h);
      if (r > dr.residual) {
        dr.residual = r;
        dr.witness =
            "family " + std::to_string(f) + ": |Delta + dlogH| = " + fmt(r);
      }
    }
    dr.pass = dr.residual <= form_tol;
    rep.add(dr);
  }
  return rep;
}

}  // namespace holonomy
