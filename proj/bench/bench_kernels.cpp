// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ugir/kernels/kernels.hpp"
#include "ugir/pipeline/synthetic.hpp"

using namespace ugir;

namespace {

struct FuseInputs {
  std::vector<std::vector<float>> storage;
  std::vector<std::span<const float>> members;
  std::vector<double> mean, variance;
  std::vector<std::uint8_t> mask;

  FuseInputs(int n, std::size_t voxels) : mean(voxels), variance(voxels), mask(voxels) {
    SplitMix64 rng(1);
    for (int m = 0; m < n; ++m) {
      std::vector<float> v(voxels);
      for (auto& x : v) x = static_cast<float>(rng.uniform());
      storage.push_back(std::move(v));
    }
    for (const auto& v : storage) members.emplace_back(v);
  }
  kernels::FuseOutputs out() { return {mean, variance, mask}; }
};

template <bool Parallel>
void BM_Fuse(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  FuseInputs in(4, 20 * side * side);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::fuse_parallel(in.members, 0.5, in.out());
    else kernels::fuse_serial(in.members, 0.5, in.out());
    benchmark::DoNotOptimize(in.mean.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.mean.size()));
}

template <bool Parallel>
void BM_LevelSetStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ImageD phi(n, n), prob(n, n), log_odds(n, n, 0.0), next(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double sd = 0.3 * n - std::hypot(r - 0.5 * n, c - 0.5 * n);
      phi(r, c) = sd;
      prob(r, c) = sd >= 0 ? 0.9 : 0.1;
    }
  }
  kernels::StepCoefficients k{0.1, 0.5, 0.3, 0.005, 1.5, 1.0, 0.9, 0.1};
  kernels::StepWorkspace ws;
  ws.resize(n, n);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::levelset_step_parallel(phi, prob, log_odds, k, ws, next);
    else kernels::levelset_step_serial(phi, prob, log_odds, k, ws, next);
    benchmark::DoNotOptimize(next.values().data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

}  // namespace

BENCHMARK(BM_Fuse<false>)->Name("fuse/serial")->Arg(128)->Arg(256);
BENCHMARK(BM_Fuse<true>)->Name("fuse/parallel")->Arg(128)->Arg(256);
BENCHMARK(BM_LevelSetStep<false>)->Name("levelset_step/serial")->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_LevelSetStep<true>)->Name("levelset_step/parallel")->Arg(64)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
