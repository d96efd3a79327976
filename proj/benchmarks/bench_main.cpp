// Hot-path benchmarks: per-pulse generation, estimation, key-rate math.
#include <benchmark/benchmark.h>

#include "hdblind/estimate.hpp"
#include "hdblind/keyrate.hpp"
#include "hdblind/mc.hpp"
#include "hdblind/rng.hpp"

namespace {

using namespace hdblind;

void BM_philox_normal(benchmark::State& state) {
  uint64_t pulse = 0;
  double acc = 0.0;
  for (auto _ : state) {
    acc += rng::normal(42, pulse++, rng::channel::alice_mod);
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_philox_normal);

mc::sim_scenario bench_scenario(bool attack) {
  mc::sim_scenario scn;
  scn.n = 100000;
  scn.seed = 42;
  scn.protocol.v_a = 1.2;
  scn.detector.eta = 0.55;
  scn.attack.active = attack;
  scn.attack.r = 0.1274;
  return scn;
}

void BM_run_honest(benchmark::State& state) {
  const auto scn = bench_scenario(false);
  for (auto _ : state) {
    auto batch = mc::run(scn);
    benchmark::DoNotOptimize(batch.x_b.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(scn.n));
}
BENCHMARK(BM_run_honest);

void BM_run_attack(benchmark::State& state) {
  const auto scn = bench_scenario(true);
  for (auto _ : state) {
    auto batch = mc::run(scn);
    benchmark::DoNotOptimize(batch.x_b.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(scn.n));
}
BENCHMARK(BM_run_attack);

void BM_accumulate(benchmark::State& state) {
  const auto batch = mc::run(bench_scenario(true));
  for (auto _ : state) {
    auto acc = estimate::accumulate(batch);
    benchmark::DoNotOptimize(acc.co_ab);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(batch.n()));
}
BENCHMARK(BM_accumulate);

void BM_key_rate(benchmark::State& state) {
  model::protocol_model proto;
  proto.v_a = 5.0;
  model::detector_model det;
  double acc = 0.0;
  for (auto _ : state) {
    acc += keyrate::key_rate(proto, 0.3, 0.05, det).k;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_key_rate);

void BM_xi_null(benchmark::State& state) {
  model::protocol_model proto;
  proto.v_a = 1.2;
  model::detector_model det;
  det.eta = 0.55;
  double acc = 0.0;
  for (auto _ : state) {
    acc += keyrate::xi_null(proto, 0.3, det).xi_null;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_xi_null);

void BM_optimize_va(benchmark::State& state) {
  model::detector_model det;
  double acc = 0.0;
  for (auto _ : state) {
    acc += keyrate::optimize_va(0.3, det, 0.01).v_a;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_optimize_va);

}  // namespace

BENCHMARK_MAIN();
