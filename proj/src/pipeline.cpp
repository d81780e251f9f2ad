// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/pipeline.hpp"

#include <algorithm>
#include <chrono>

namespace naec {

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kAuxiva ? "auxiva" : "ilrma";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "auxiva") return Algorithm::kAuxiva;
  if (name == "ilrma") return Algorithm::kIlrma;
  throw ConfigError("unknown algorithm '" + name + "' (auxiva or ilrma)");
}

EngineConfig& EngineConfig::with_order(int order_P) {
  expansion.order = order_P;
  ctf.order_P = order_P;
  return *this;
}

EngineConfig& EngineConfig::with_frames(int frames_L) {
  ctf.frames_L = frames_L;
  return *this;
}

void validate(const EngineConfig& config) {
  validate(config.stft);
  validate(config.expansion);
  validate(config.ctf);
  if (config.expansion.order != config.ctf.order_P) {
    throw ConfigError("expansion order and CTF order_P differ");
  }
  if (config.algorithm == Algorithm::kAuxiva) {
    auxiva::validate(config.auxiva);
  } else {
    ilrma::validate(config.ilrma);
  }
}

namespace {

std::variant<auxiva::State, ilrma::State> make_state(const EngineConfig& c,
                                                     std::size_t bins) {
  const std::size_t dim = c.ctf.dim();
  if (c.algorithm == Algorithm::kAuxiva) return auxiva::State(bins, dim, c.auxiva);
  return ilrma::State(bins, dim, c.ilrma);
}

}  // namespace

Optimizer::Optimizer(const EngineConfig& config, std::size_t bins)
    : exec_(config.exec), state_(make_state(config, bins)) {}

void Optimizer::process_frame(const FrameObservations& obs,
                              std::span<cplx> out) {
  std::visit(
      [&](auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, auxiva::State>) {
          auxiva::process_frame(s, obs, out, exec_);
        } else {
          ilrma::process_frame(s, obs, out, exec_);
        }
      },
      state_);
}

std::size_t Optimizer::skipped_bins() const { return bank().skipped(); }

std::size_t Optimizer::frames() const {
  return std::visit([](const auto& s) { return s.frame_count; }, state_);
}

const DemixBank& Optimizer::bank() const {
  return std::visit([](const auto& s) -> const DemixBank& { return s.bank; },
                    state_);
}

Engine::Engine(const EngineConfig& config)
    : config_((validate(config), config)),
      transform_(config.stft),
      bins_(config.stft.bins()),
      far_windows_(config.ctf.order_P,
                   std::vector<double>(config.stft.window_len, 0.0)),
      mic_window_(config.stft.window_len, 0.0),
      chunk_channels_(config.ctf.order_P,
                      std::vector<double>(config.stft.hop, 0.0)),
      ref_spectra_(config.ctf.order_P, std::vector<cplx>(bins_)),
      mic_spectrum_(bins_),
      estimate_(bins_),
      frame_(config.stft.window_len),
      ola_(config.stft.window_len, 0.0),
      history_(bins_, config.ctf),
      obs_(bins_, config.ctf.dim()),
      optimizer_(config, bins_) {}

namespace {

void slide_in(std::vector<double>& window, std::span<const double> chunk) {
  const std::size_t keep = window.size() - chunk.size();
  std::copy(window.begin() + chunk.size(), window.end(), window.begin());
  std::copy(chunk.begin(), chunk.end(), window.begin() + keep);
}

}  // namespace

void Engine::process_chunk(std::span<const double> far,
                           std::span<const double> mic,
                           std::span<double> out) {
  const std::size_t hop = config_.stft.hop;
  if (far.size() != hop || mic.size() != hop || out.size() != hop) {
    throw ShapeError("engine: chunks must have exactly hop = " +
                     std::to_string(hop) + " samples");
  }
  expand_into(far, config_.expansion.order, chunk_channels_);
  for (std::size_t i = 0; i < far_windows_.size(); ++i) {
    slide_in(far_windows_[i], chunk_channels_[i]);
    transform_.forward(far_windows_[i], ref_spectra_[i]);
  }
  slide_in(mic_window_, mic);
  transform_.forward(mic_window_, mic_spectrum_);

  history_.push(ref_spectra_);
  history_.assemble(mic_spectrum_, obs_);
  optimizer_.process_frame(obs_, estimate_);

  transform_.inverse(estimate_, frame_);
  for (std::size_t i = 0; i < frame_.size(); ++i) ola_[i] += frame_[i];
  const double norm = transform_.synthesis_norm();
  for (std::size_t i = 0; i < hop; ++i) out[i] = ola_[i] / norm;
  std::copy(ola_.begin() + hop, ola_.end(), ola_.begin());
  std::fill(ola_.end() - hop, ola_.end(), 0.0);
}

std::vector<double> Engine::flush() {
  const std::size_t hop = config_.stft.hop;
  const std::vector<double> zeros(hop, 0.0);
  std::vector<double> out(latency());
  for (std::size_t off = 0; off < out.size(); off += hop) {
    process_chunk(zeros, zeros, std::span(out).subspan(off, hop));
  }
  return out;
}

AudioSignal run(const AudioSignal& far_end, const AudioSignal& microphone,
                const EngineConfig& config, RunStats* stats) {
  require_pipeline_signal(far_end, "far-end");
  require_pipeline_signal(microphone, "microphone");
  if (far_end.size() != microphone.size()) {
    throw ShapeError("run: far-end and microphone lengths differ");
  }
  const auto t0 = std::chrono::steady_clock::now();
  Engine engine(config);
  const std::size_t hop = engine.hop();
  const std::size_t len = far_end.size();
  const std::size_t chunks = (len + hop - 1) / hop;

  std::vector<double> far(hop), mic(hop), stream;
  stream.reserve(chunks * hop + engine.latency());
  std::vector<double> out(hop);
  for (std::size_t c = 0; c < chunks; ++c) {
    std::fill(far.begin(), far.end(), 0.0);
    std::fill(mic.begin(), mic.end(), 0.0);
    const std::size_t begin = c * hop;
    const std::size_t n = std::min(hop, len - begin);
    std::copy_n(far_end.samples.begin() + begin, n, far.begin());
    std::copy_n(microphone.samples.begin() + begin, n, mic.begin());
    engine.process_chunk(far, mic, out);
    stream.insert(stream.end(), out.begin(), out.end());
  }
  const auto tail = engine.flush();
  stream.insert(stream.end(), tail.begin(), tail.end());

  std::vector<double> estimate(stream.begin() + engine.latency(),
                               stream.begin() + engine.latency() + len);
  if (stats) {
    stats->frames = engine.frames();
    stats->skipped_bins = engine.optimizer().skipped_bins();
    stats->audio_seconds = far_end.duration_s();
    stats->wall_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
  }
  return AudioSignal(std::move(estimate));
}

RunStats run_streaming(const ChunkSource& source, const ChunkSink& sink,
                       const EngineConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Engine engine(config);
  RunStats stats;
  std::vector<double> out(engine.hop());
  std::size_t consumed = 0;
  while (auto chunk = source()) {
    engine.process_chunk(chunk->far, chunk->mic, out);
    consumed += chunk->far.size();
    sink(out);
  }
  if (engine.frames() > 0) {
    const auto tail = engine.flush();
    for (std::size_t off = 0; off < tail.size(); off += engine.hop()) {
      sink(std::span(tail).subspan(off, engine.hop()));
    }
  }
  stats.frames = engine.frames();
  stats.skipped_bins = engine.optimizer().skipped_bins();
  stats.audio_seconds = static_cast<double>(consumed) / kSampleRate;
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return stats;
}

Spectrogram run_spectral(const Spectrogram& mic,
                         std::span<const Spectrogram> refs,
                         const EngineConfig& config, RunStats* stats) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  Optimizer optimizer(config, mic.bins);
  FrameObservations obs(mic.bins, config.ctf.dim());
  Spectrogram out(mic.bins, mic.frames, mic.config);
  for (std::size_t n = 0; n < mic.frames; ++n) {
    build_frame(mic, refs, n, config.ctf, obs);
    optimizer.process_frame(obs, out.frame(n));
  }
  if (stats) {
    stats->frames = optimizer.frames();
    stats->skipped_bins = optimizer.skipped_bins();
    stats->audio_seconds =
        static_cast<double>(mic.frames * mic.config.hop) / kSampleRate;
    stats->wall_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
  }
  return out;
}

}  // namespace naec
