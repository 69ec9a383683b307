#include <benchmark/benchmark.h>

#include "lpfield/experiments.hpp"
#include "lpfield/psido.hpp"

using namespace lpfield;

namespace {

GridFunction bench_input(const GridSpec& g) {
  return random_bandlimited(g, std::exp2(g.K - 1), 7);
}

}  // namespace

static void BM_transform(benchmark::State& state) {
  GridSpec g(1, static_cast<int>(state.range(0)));
  GridFunction f = bench_input(g);
  for (auto _ : state) {
    auto fhat = forward_transform(f);
    benchmark::DoNotOptimize(fhat);
  }
}
BENCHMARK(BM_transform)->Arg(6)->Arg(8)->Arg(10);

static void BM_partition_build(benchmark::State& state) {
  GridSpec g(1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto p = LPPartition::build(g);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_partition_build)->Arg(8)->Arg(10);

static void BM_band_project(benchmark::State& state) {
  GridSpec g(1, 8);
  LPPartition p = LPPartition::build(g);
  GridFunction f = bench_input(g);
  for (auto _ : state) {
    auto b = p.band_project(f, 4);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_band_project);

static void BM_apply_multiplier(benchmark::State& state) {
  GridSpec g(1, static_cast<int>(state.range(0)));
  GridFunction f = bench_input(g);
  Symbol c = make_cmrho(-0.25, 0.5);
  for (auto _ : state) {
    auto out = apply(c, f);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_apply_multiplier)->Arg(8)->Arg(10);

static void BM_apply_dense(benchmark::State& state) {
  GridSpec g(1, static_cast<int>(state.range(0)));
  GridFunction f = bench_input(g);
  Symbol a = make_xmod_cmrho(-0.25, 0.5, 3.0, 0.5, 16, 3, 1);
  for (auto _ : state) {
    auto out = apply(a, f);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_apply_dense)->Arg(6)->Arg(8);

static void BM_f_space_norm(benchmark::State& state) {
  GridSpec g(1, 8);
  LPPartition p = LPPartition::build(g);
  GridFunction f = bench_input(g);
  const SpaceParams prm(2.0, 2.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_space_norm(f, p, prm));
  }
}
BENCHMARK(BM_f_space_norm);

static void BM_f_infty_norm(benchmark::State& state) {
  GridSpec g(1, 8);
  LPPartition p = LPPartition::build(g);
  GridFunction f = bench_input(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_infty_norm(f, p, 2.0, 0.0));
  }
}
BENCHMARK(BM_f_infty_norm);

static void BM_peetre_maximal(benchmark::State& state) {
  GridSpec g(1, static_cast<int>(state.range(0)));
  GridFunction f = bench_input(g);
  for (auto _ : state) {
    auto m = peetre_maximal(f, 2.0, 16.0);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_peetre_maximal)->Arg(6)->Arg(8);

static void BM_phi_roundtrip(benchmark::State& state) {
  GridSpec g(1, 8);
  PhiFrame fr = PhiFrame::build(g);
  GridFunction f = random_bandlimited(g, fr.resolved_radius(), 7);
  for (auto _ : state) {
    auto back = phi_synthesis(phi_analysis(f, fr), fr);
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_phi_roundtrip);

static void BM_sample_random_f(benchmark::State& state) {
  GridSpec g(1, 11);
  RandomCubeFamily fam{g, 7, 0.5, 2.0, 5};
  for (auto _ : state) {
    auto f = sample_random_f(fam);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_sample_random_f);

BENCHMARK_MAIN();
