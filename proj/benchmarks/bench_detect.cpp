#include <benchmark/benchmark.h>

#include "nagmcmc/channel.hpp"
#include "nagmcmc/detectors.hpp"
#include "nagmcmc/sampler.hpp"

using namespace nagmcmc;

namespace {

SamplerContext make_context(std::size_t n, double snr_db, const Constellation& c) {
  Rng ch(stream_seed(1, 0, 0, stream_role::channel));
  Rng noise(stream_seed(1, 0, 0, stream_role::noise));
  const ChannelInstance inst = make_channel_instance(n, n, c, snr_db, ch, noise);
  return precompute(inst.h, inst.y, inst.sigma2, c);
}

void DetectNagMcmc(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Constellation c = build_constellation(16);
  const SamplerContext ctx = make_context(n, 25.0, c);
  SamplerParams params;
  params.sample_augmentation = true;
  params.early_stopping = true;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    DetectionResult res = run_detector(ctx, params, trial++);
    benchmark::DoNotOptimize(res.symbols_hat.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(DetectNagMcmc)->Arg(8)->Arg(16)->Arg(32);

void DetectMmse(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Constellation c = build_constellation(16);
  Rng ch(stream_seed(2, 0, 0, stream_role::channel));
  Rng noise(stream_seed(2, 0, 0, stream_role::noise));
  const ChannelInstance inst = make_channel_instance(n, n, c, 25.0, ch, noise);
  for (auto _ : state) {
    auto sym = detect_mmse(inst.h, inst.y, inst.sigma2, c);
    benchmark::DoNotOptimize(sym.data());
  }
}
BENCHMARK(DetectMmse)->Arg(8)->Arg(64);

void NesterovBurst(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Constellation c = build_constellation(16);
  const SamplerContext ctx = make_context(n, 20.0, c);
  ComplexVector z(n, cplx{0.1, -0.1});
  ComplexVector traj(8 * n), momentum(n, 0.0);
  for (auto _ : state) {
    for (auto& m : momentum) m = 0.0;
    nesterov_burst(ctx, z, 8, traj, momentum);
    benchmark::DoNotOptimize(traj.data());
  }
}
BENCHMARK(NesterovBurst)->Arg(8)->Arg(64);

void CholeskyGram(benchmark::State& state) {
  const std::size_t n = state.range(0);
  Rng rng(5);
  ComplexMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col)
      h(r, col) = rng.normal_complex(1.0 / n);
  const ComplexMatrix a = gram(h);
  for (auto _ : state) {
    ComplexMatrix inv = invert_hpd(a);
    benchmark::DoNotOptimize(inv.entries().data());
  }
}
BENCHMARK(CholeskyGram)->Arg(8)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
