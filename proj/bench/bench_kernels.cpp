// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Serial reference vs OpenMP per-bin kernels on full-band frames.
// Arguments: stacked dimension P·L+1 (10 for CTF, 4 for MTF), exec (0 serial,
// 1 parallel).

#include <benchmark/benchmark.h>

#include <random>

#include "naec/auxiva.hpp"
#include "naec/ilrma.hpp"
#include "naec/pipeline.hpp"

using namespace naec;

namespace {

constexpr std::size_t kBins = 513;

std::vector<FrameObservations> random_frames(std::size_t dim, std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<FrameObservations> frames;
  for (std::size_t i = 0; i < n; ++i) {
    FrameObservations f(kBins, dim);
    for (auto& v : f.data) v = {g(rng), g(rng)};
    frames.push_back(std::move(f));
  }
  return frames;
}

Exec exec_arg(const benchmark::State& st) {
  return st.range(1) ? Exec::kParallel : Exec::kSerial;
}

void BM_AuxivaFrame(benchmark::State& st) {
  const auto dim = static_cast<std::size_t>(st.range(0));
  const auto frames = random_frames(dim, 64);
  auxiva::State s(kBins, dim, {});
  std::vector<cplx> out(kBins);
  std::size_t i = 0;
  for (auto _ : st) {
    auxiva::process_frame(s, frames[i++ % frames.size()], out, exec_arg(st));
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations());
}

void BM_IlrmaFrame(benchmark::State& st) {
  const auto dim = static_cast<std::size_t>(st.range(0));
  const auto frames = random_frames(dim, 64);
  ilrma::State s(kBins, dim, {});
  std::vector<cplx> out(kBins);
  std::size_t i = 0;
  for (auto _ : st) {
    ilrma::process_frame(s, frames[i++ % frames.size()], out, exec_arg(st));
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations());
}

// End to end: 2 s of audio through the streaming engine.
void BM_EngineRun(benchmark::State& st) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<double> x(32000), y(32000);
  for (std::size_t n = 0; n < x.size(); ++n) {
    x[n] = g(rng);
    y[n] = 0.5 * x[n] + 0.1 * g(rng);
  }
  const AudioSignal far(x), mic(y);
  EngineConfig cfg;
  cfg.algorithm = st.range(0) ? Algorithm::kIlrma : Algorithm::kAuxiva;
  cfg.exec = exec_arg(st);
  for (auto _ : st) benchmark::DoNotOptimize(run(far, mic, cfg).samples.data());
  st.SetItemsProcessed(st.iterations() * 2);  // audio seconds
}

}  // namespace

BENCHMARK(BM_AuxivaFrame)->ArgsProduct({{4, 10}, {0, 1}})->ArgNames({"dim", "omp"});
BENCHMARK(BM_IlrmaFrame)->ArgsProduct({{4, 10}, {0, 1}})->ArgNames({"dim", "omp"});
BENCHMARK(BM_EngineRun)
    ->ArgsProduct({{0, 1}, {0, 1}})
    ->ArgNames({"ilrma", "omp"})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
