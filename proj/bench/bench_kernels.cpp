#include <benchmark/benchmark.h>

#include <random>

#include "dca/certificates.hpp"
#include "dca/interpolation.hpp"
#include "dca/probe.hpp"
#include "dca/regimes.hpp"

using namespace dca;

namespace {

const GridSpec kGrid{-2, 2, 200};

void BM_RegimeMap(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto rows = parallel ? regime_map(ExtReal(3), ExtReal(2), kGrid, kGrid)
                         : regime_map_serial(ExtReal(3), ExtReal(2), kGrid, kGrid);
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(state.iterations() * kGrid.steps * kGrid.steps);
}

std::vector<Triplet> random_triplets(int n, int d) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Triplet> t(n);
  for (auto& p : t) {
    p.x.resize(d);
    p.g.resize(d);
    for (int i = 0; i < d; ++i) {
      p.x[i] = g(rng);
      p.g[i] = 1.5 * p.x[i];
    }
    for (int i = 0; i < d; ++i) p.f += 0.75 * p.x[i] * p.x[i];
  }
  return t;
}

void BM_Interpolation(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const auto t = random_triplets(static_cast<int>(state.range(1)), 3);
  const CurvatureClass cls{1, 2};
  for (auto _ : state) {
    auto r = parallel ? check_interpolation(t, cls) : check_interpolation_serial(t, cls);
    benchmark::DoNotOptimize(r.min_slack);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1) * state.range(1));
}

void BM_SoundnessSweep(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  SweepConfig cfg;
  cfg.instances = 800;
  for (auto _ : state) {
    auto r = parallel ? soundness_sweep(cfg) : soundness_sweep_serial(cfg);
    benchmark::DoNotOptimize(r.one_step_checks);
  }
  state.SetItemsProcessed(state.iterations() * cfg.instances);
}

void BM_NonsmoothSweep(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  SweepConfig cfg;
  cfg.instances = 1'000;
  for (auto _ : state) {
    auto r = parallel ? nonsmooth_sweep(cfg) : nonsmooth_sweep_serial(cfg);
    benchmark::DoNotOptimize(r.step_checks);
  }
  state.SetItemsProcessed(state.iterations() * cfg.instances);
}

void BM_Probe(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  ProbeOptions o;
  o.N = 2;
  o.d = 2;
  o.budget = 20'000;
  o.starts = 8;
  const DcParams p = make_params(2, 10, -1.5, 3);
  for (auto _ : state) {
    auto r = parallel ? probe(p, o) : probe_serial(p, o);
    benchmark::DoNotOptimize(r.best_ratio);
  }
}

}  // namespace

BENCHMARK(BM_RegimeMap)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Interpolation)->ArgNames({"omp", "n"})->ArgsProduct({{0, 1}, {100, 400}});
BENCHMARK(BM_SoundnessSweep)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NonsmoothSweep)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Probe)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
