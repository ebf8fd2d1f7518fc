#include <benchmark/benchmark.h>

#include "spca/linalg.hpp"
#include "spca/sdp_solver.hpp"
#include "spca/synth.hpp"

namespace {

spca::Observation instance(std::size_t d) {
  const spca::GroundTruth gt = spca::generate_ground_truth(d, 5, 20.0, 11);
  return spca::sample_observation(gt, 0.7, spca::NoiseSpec{5.0, 0.1}, 12);
}

void BM_SymEig(benchmark::State& state) {
  const auto obs = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spca::sym_eig(obs.m));
}
BENCHMARK(BM_SymEig)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_ProjectSpectraplex(benchmark::State& state) {
  const auto obs = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spca::project_spectraplex(obs.m));
}
BENCHMARK(BM_ProjectSpectraplex)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state) {
  const auto obs = instance(static_cast<std::size_t>(state.range(0)));
  spca::SdpConfig cfg;
  cfg.rho = 0.1;
  std::size_t iters = 0;
  for (auto _ : state) {
    const auto sol = spca::solve(obs.m, cfg);
    iters = sol.iterations;
    benchmark::DoNotOptimize(sol.objective);
  }
  state.counters["iterations"] = static_cast<double>(iters);
}
BENCHMARK(BM_Solve)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
