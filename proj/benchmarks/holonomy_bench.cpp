// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "holonomy/group.hpp"
#include "holonomy/quadrature.hpp"
#include "holonomy/randomgen.hpp"
#include "holonomy/rng.hpp"
#include "holonomy/sectors.hpp"
#include "holonomy/transgression.hpp"

namespace {

using namespace holonomy;

void BM_simpson_sin(benchmark::State& state) {
  const auto f = [](double t) {
    return std::complex<double>(std::sin(6.28318530717958 * t), 0.0);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simpson(f, 0.0, 1.0, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_simpson_sin)->Arg(64)->Arg(256)->Arg(1024);

void BM_tau1_circle(benchmark::State& state) {
  const Groupoid gpd = circle_shift();
  Rng rng(11);
  const LineData data = random_line_cocycle(gpd, rng);
  const SegmentedLoop psi = random_loop(gpd, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tau1_eval(gpd, data, psi));
  }
}
BENCHMARK(BM_tau1_circle);

void BM_F_eval_torus(benchmark::State& state) {
  const Groupoid gpd = torus2_shift();
  Rng rng(12);
  const TransgressedBundle bundle = tau2_build(random_gerbe_cocycle(gpd, rng));
  const SegmentedLoop psi = random_loop(gpd, rng);
  const LoopArrow arrow = random_loop_arrow(gpd, psi, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(F_eval(gpd, bundle, arrow));
  }
}
BENCHMARK(BM_F_eval_torus);

void BM_h2(benchmark::State& state) {
  const char* specs[] = {"Z/2xZ/2", "Q8", "Z/4xZ/4"};
  const FiniteGroup g = FiniteGroup::parse(specs[state.range(0)]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(h2_finite_group(g));
  }
}
BENCHMARK(BM_h2)->Arg(0)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
