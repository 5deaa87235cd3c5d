// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "perispec/blockjacobi.hpp"
#include "perispec/jacobi.hpp"
#include "perispec/magic.hpp"
#include "perispec/sumrules.hpp"
#include "perispec/torus.hpp"

using namespace perispec;

namespace {

PeriodicJacobi sample_operator(int p) {
  std::mt19937 rng(7 + p);
  std::uniform_real_distribution<double> ua(0.7, 1.4), ub(-0.7, 0.7);
  std::vector<double> a(p), b(p);
  for (int i = 0; i < p; ++i) {
    a[i] = ua(rng);
    b[i] = ub(rng);
  }
  return PeriodicJacobi(a, b);
}

void BM_DiscriminantAndBands(benchmark::State& state) {
  PeriodicJacobi j0 = sample_operator(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Discriminant d = discriminant_oprl(j0);
    BandSet bs = bands(d);
    benchmark::DoNotOptimize(bs.bands.size());
  }
}
BENCHMARK(BM_DiscriminantAndBands)->Arg(2)->Arg(4)->Arg(8);

void BM_MagicResidualWindow(benchmark::State& state) {
  PeriodicJacobi j0 = sample_operator(2);
  JacobiSeq seq = JacobiSeq::from_periodic(j0, 1, state.range(0), false);
  for (auto _ : state) {
    ResidualReport rep = magic_residual(seq, j0);
    benchmark::DoNotOptimize(rep.sup);
  }
}
BENCHMARK(BM_MagicResidualWindow)->Arg(256)->Arg(2048)->Arg(16384);

void BM_PeriodicM(benchmark::State& state) {
  PeriodicJacobi j0 = sample_operator(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    std::complex<double> m = periodic_m(j0, {0.3, 0.7});
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_PeriodicM)->Arg(2)->Arg(6);

void BM_TodaStep(benchmark::State& state) {
  PeriodicJacobi j0 = sample_operator(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    TorusSample s = toda_sample(j0, {0.1}, 1e-3);
    benchmark::DoNotOptimize(s.points.size());
  }
}
BENCHMARK(BM_TodaStep)->Arg(2)->Arg(4);

void BM_DiskHerglotz(benchmark::State& state) {
  BlockJacobi j = BlockJacobi::scalar({1.3, 0.8, 1.1}, {0.4, -0.2, 0.1});
  for (auto _ : state) {
    Matrix m = m_disk(j, {0.35, 0.2});
    benchmark::DoNotOptimize(m(0, 0));
  }
}
BENCHMARK(BM_DiskHerglotz);

void BM_P2SumRule(benchmark::State& state) {
  BlockJacobi j = BlockJacobi::scalar({}, {1.5});
  for (auto _ : state) {
    SumRuleReport r = p2_sides(j, 1e-7);
    benchmark::DoNotOptimize(r.residual);
  }
}
BENCHMARK(BM_P2SumRule);

}  // namespace

BENCHMARK_MAIN();
