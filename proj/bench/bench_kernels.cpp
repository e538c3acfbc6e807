// Serial vs parallel kernels, and reduced vs full-matrix nulling.

#include <random>

#include <benchmark/benchmark.h>

#include "fr3share/io.hpp"
#include "fr3share/nulling.hpp"
#include "fr3share/scenario.hpp"

using namespace fr3share;

namespace {

ScenarioConfig bench_config() {
  ScenarioConfig cfg;
  cfg.n_slots = 60;
  cfg.mode = Mode::Joint;
  return cfg;
}

void BM_RunScenario(benchmark::State& st) {
  const ScenarioConfig cfg = bench_config();
  const auto states = propagate_scenario(cfg);
  const RunOptions opts{st.range(0) != 0, false};
  for (auto _ : st) benchmark::DoNotOptimize(run_scenario(cfg, 1.0, cfg.seed, states, opts));
}
BENCHMARK(BM_RunScenario)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& st) {
  const ScenarioConfig cfg = bench_config();
  for (auto _ : st) benchmark::DoNotOptimize(propagate_scenario(cfg, st.range(0) != 0));
}
BENCHMARK(BM_Propagate)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

struct NullingCase {
  ComplexMatrix h;
  std::vector<ComplexMatrix> sats;
};

NullingCase nulling_case(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  auto rnd = [&](std::size_t r, std::size_t c) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = {g(rng), g(rng)};
    return normalized(m);
  };
  NullingCase c{rnd(2, n), {}};
  for (int j = 0; j < 12; ++j) c.sats.push_back(rnd(n, 1));
  return c;
}

void BM_NullingReduced(benchmark::State& st) {
  const NullingCase c = nulling_case(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_nulling(c.h, c.sats, {1.0}));
}
BENCHMARK(BM_NullingReduced)->Arg(16)->Arg(64)->Arg(256)->ArgName("N")->Unit(benchmark::kMicrosecond);

void BM_NullingFullEig(benchmark::State& st) {
  const NullingCase c = nulling_case(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_nulling_reference(c.h, c.sats, {1.0}));
}
BENCHMARK(BM_NullingFullEig)->Arg(16)->Arg(64)->Arg(256)->ArgName("N")->Unit(benchmark::kMicrosecond);

void BM_GainMap(benchmark::State& st) {
  const ScenarioConfig cfg = bench_config();
  const NullingCase c = nulling_case(64);
  const BeamformerPair p = solve_nulling(c.h, c.sats, {1.0});
  for (auto _ : st) benchmark::DoNotOptimize(gain_map(p.w_t, cfg.arrays.gnb, AngularGrid{}, st.range(0) != 0));
}
BENCHMARK(BM_GainMap)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
