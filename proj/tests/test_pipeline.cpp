// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>

#include "doctest.h"
#include "naec/metrics.hpp"
#include "naec/pipeline.hpp"
#include "naec/signals.hpp"
#include "test_util.hpp"

using namespace naec;

namespace {

EngineConfig engine(Algorithm alg) {
  EngineConfig cfg;
  cfg.algorithm = alg;
  return cfg;
}

// Feeds `far`/`mic` in hop chunks through run_streaming and collects output.
std::vector<double> stream(const AudioSignal& far, const AudioSignal& mic,
                           const EngineConfig& cfg, RunStats* stats = nullptr) {
  const std::size_t hop = cfg.stft.hop;
  std::size_t pos = 0;
  std::vector<double> out;
  auto source = [&]() -> std::optional<Chunk> {
    if (pos >= far.size()) return std::nullopt;
    Chunk c{std::vector<double>(hop, 0.0), std::vector<double>(hop, 0.0)};
    const std::size_t n = std::min(hop, far.size() - pos);
    std::copy_n(far.samples.begin() + pos, n, c.far.begin());
    std::copy_n(mic.samples.begin() + pos, n, c.mic.begin());
    pos += hop;
    return c;
  };
  auto sink = [&](std::span<const double> chunk) {
    CHECK(chunk.size() == hop);
    out.insert(out.end(), chunk.begin(), chunk.end());
  };
  const auto s = run_streaming(source, sink, cfg);
  if (stats) *stats = s;
  return out;
}

}  // namespace

TEST_CASE("silent far end: output is the microphone") {
  for (Algorithm alg : {Algorithm::kAuxiva, Algorithm::kIlrma}) {
    const auto s = signals::speech(2.0, signals::Voice::kFemale, 1);
    const AudioSignal far(std::vector<double>(s.size(), 0.0));
    const auto e = run(far, s, engine(alg));
    REQUIRE(e.size() == s.size());
    double res = 0.0, ref = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      res += (e.samples[i] - s.samples[i]) * (e.samples[i] - s.samples[i]);
      ref += s.samples[i] * s.samples[i];
      worst = std::max(worst, std::abs(e.samples[i] - s.samples[i]));
    }
    CHECK(res / ref < 1e-6);
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("rows stay passthrough without reference excitation") {
  Engine eng(EngineConfig{});
  const auto mic = test::randn(256 * 20, 2, 0.1);
  const std::vector<double> far(256, 0.0);
  std::vector<double> out(256);
  for (std::size_t c = 0; c < 20; ++c) {
    eng.process_chunk(far, std::span(mic).subspan(c * 256, 256), out);
  }
  const auto& bank = eng.optimizer().bank();
  for (std::size_t k = 0; k < bank.bins(); ++k) {
    CHECK(bank.row(k)[0] == cplx{1.0});
    for (std::size_t d = 1; d < bank.dim(); ++d) CHECK(bank.row(k)[d] == cplx{});
  }
}

TEST_CASE("chunked streaming equals batch run bit for bit") {
  for (Algorithm alg : {Algorithm::kAuxiva, Algorithm::kIlrma}) {
    const AudioSignal far(test::randn(32000, 3, 0.2));
    AudioSignal mic(test::randn(32000, 4, 0.05));
    for (std::size_t i = 5; i < mic.size(); ++i) mic.samples[i] += 0.6 * far.samples[i - 5];
    const auto cfg = engine(alg);
    const auto batch = run(far, mic, cfg);
    RunStats stats;
    const auto streamed = stream(far, mic, cfg, &stats);
    Engine probe(cfg);
    const std::size_t lat = probe.latency();
    REQUIRE(streamed.size() >= lat + batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      CHECK(streamed[lat + i] == batch.samples[i]);
    }
    CHECK(stats.frames == 32000 / 256 + lat / 256);
    CHECK(stats.realtime_factor() > 0.0);
    CHECK(stats.audio_seconds == doctest::Approx(2.0));
  }
}

TEST_CASE("latency is one window minus a hop for both CTF and MTF") {
  EngineConfig ctf;
  EngineConfig mtf;
  mtf.with_frames(1);
  CHECK(Engine(ctf).latency() == 768);
  CHECK(Engine(mtf).latency() == 768);
}

TEST_CASE("empty stream shuts down cleanly") {
  std::size_t sink_calls = 0;
  const auto stats = run_streaming([] { return std::optional<Chunk>{}; },
                                   [&](std::span<const double>) { ++sink_calls; },
                                   EngineConfig{});
  CHECK(sink_calls == 0);
  CHECK(stats.frames == 0);
  CHECK(stats.audio_seconds == 0.0);
}

TEST_CASE("shape and rate errors") {
  Engine eng(EngineConfig{});
  std::vector<double> a(256), b(255), out(256);
  CHECK_THROWS_AS(eng.process_chunk(a, b, out), ShapeError);
  CHECK_THROWS_AS(eng.process_chunk(b, a, out), ShapeError);
  CHECK_THROWS_AS(run(AudioSignal(std::vector<double>(100)), AudioSignal(std::vector<double>(99)),
                      EngineConfig{}),
                  ShapeError);
  CHECK_THROWS_AS(run(AudioSignal(std::vector<double>(100), 48000),
                      AudioSignal(std::vector<double>(100), 48000), EngineConfig{}),
                  RateError);
  EngineConfig bad;
  bad.expansion.order = 2;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  CHECK_THROWS_AS(parse_algorithm("nlms"), ConfigError);
  CHECK(parse_algorithm(to_string(Algorithm::kIlrma)) == Algorithm::kIlrma);
}

TEST_CASE("linear echo is cancelled with correct alignment") {
  const auto far = signals::white_noise(6.0, 5);
  AudioSignal mic(std::vector<double>(far.size(), 0.0));
  for (std::size_t i = 40; i < far.size(); ++i) {
    mic.samples[i] = 0.5 * far.samples[i - 40] - 0.2 * far.samples[i - 90];
  }
  for (Algorithm alg : {Algorithm::kAuxiva, Algorithm::kIlrma}) {
    const auto e = run(far, mic, engine(alg));
    const double steady = metrics::steady_state(metrics::erle(mic, e));
    MESSAGE(to_string(alg) << " steady ERLE " << steady << " dB");
    CHECK(steady > 20.0);
  }
}

TEST_CASE("serial and parallel engines agree exactly") {
  const AudioSignal far(test::randn(8000, 6, 0.2));
  const AudioSignal mic(test::randn(8000, 7, 0.2));
  for (Algorithm alg : {Algorithm::kAuxiva, Algorithm::kIlrma}) {
    auto cfg = engine(alg);
    cfg.exec = Exec::kSerial;
    const auto a = run(far, mic, cfg);
    cfg.exec = Exec::kParallel;
    const auto b = run(far, mic, cfg);
    CHECK(a.samples == b.samples);
  }
}

TEST_CASE("spectral runner reports stats") {
  const auto x = signals::white_noise(1.0, 8);
  const auto spec = analyze(x, StftConfig{});
  std::vector<Spectrogram> refs;
  for (const auto& ch : expand(x, {3})) refs.push_back(analyze(ch, StftConfig{}));
  RunStats stats;
  const auto out = run_spectral(spec, refs, EngineConfig{}, &stats);
  CHECK(out.frames == spec.frames);
  CHECK(stats.frames == spec.frames);
  CHECK(stats.skipped_bins == 0);
}
