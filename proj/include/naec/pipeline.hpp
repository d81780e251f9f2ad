// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "naec/auxiva.hpp"
#include "naec/ctf.hpp"
#include "naec/demix.hpp"
#include "naec/ilrma.hpp"
#include "naec/nonlin.hpp"
#include "naec/stft.hpp"
#include "naec/types.hpp"

namespace naec {

enum class Algorithm { kAuxiva, kIlrma };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);

struct EngineConfig {
  StftConfig stft;
  ExpansionConfig expansion;
  CtfConfig ctf;
  Algorithm algorithm = Algorithm::kAuxiva;
  auxiva::Config auxiva;
  ilrma::Config ilrma;
  Exec exec = Exec::kParallel;

  // Sets P and L consistently across the sub-configs.
  EngineConfig& with_order(int order_P);
  EngineConfig& with_frames(int frames_L);
};

void validate(const EngineConfig& config);

// Either optimizer behind one per-frame interface.
class Optimizer {
 public:
  Optimizer(const EngineConfig& config, std::size_t bins);

  void process_frame(const FrameObservations& obs, std::span<cplx> out);
  std::size_t skipped_bins() const;
  std::size_t frames() const;
  const DemixBank& bank() const;

  auxiva::State* auxiva_state() { return std::get_if<auxiva::State>(&state_); }
  ilrma::State* ilrma_state() { return std::get_if<ilrma::State>(&state_); }

 private:
  Exec exec_;
  std::variant<auxiva::State, ilrma::State> state_;
};

// Frame-synchronous echo canceller fed with hop-sized chunks. Output chunk m
// holds the estimate of the input samples [m·hop - latency(), (m+1)·hop -
// latency()); latency() = window_len - hop.
class Engine {
 public:
  explicit Engine(const EngineConfig& config);

  std::size_t hop() const { return config_.stft.hop; }
  std::size_t latency() const { return config_.stft.lead_pad(); }
  const EngineConfig& config() const { return config_; }
  const Optimizer& optimizer() const { return optimizer_; }
  std::size_t frames() const { return optimizer_.frames(); }

  // Throws ShapeError unless all three spans have hop() samples.
  void process_chunk(std::span<const double> far, std::span<const double> mic,
                     std::span<double> out);

  // Feeds latency()/hop() zero chunks; returns their output.
  std::vector<double> flush();

 private:
  EngineConfig config_;
  FrameTransform transform_;
  std::size_t bins_;
  std::vector<std::vector<double>> far_windows_;  // φ_i(x), last window_len
  std::vector<double> mic_window_;
  std::vector<std::vector<double>> chunk_channels_;
  std::vector<std::vector<cplx>> ref_spectra_;
  std::vector<cplx> mic_spectrum_;
  std::vector<cplx> estimate_;
  std::vector<double> frame_;
  std::vector<double> ola_;
  ReferenceHistory history_;
  FrameObservations obs_;
  Optimizer optimizer_;
};

struct RunStats {
  std::size_t frames = 0;
  std::size_t skipped_bins = 0;
  double audio_seconds = 0.0;
  double wall_seconds = 0.0;
  // Processed audio seconds per wall-clock second.
  double realtime_factor() const {
    return wall_seconds > 0.0 ? audio_seconds / wall_seconds : 0.0;
  }
};

// Whole-signal processing; the returned estimate is latency compensated, so
// it lines up sample-for-sample with `microphone`.
AudioSignal run(const AudioSignal& far_end, const AudioSignal& microphone,
                const EngineConfig& config, RunStats* stats = nullptr);

struct Chunk {
  std::vector<double> far;
  std::vector<double> mic;
};

using ChunkSource = std::function<std::optional<Chunk>()>;
using ChunkSink = std::function<void(std::span<const double>)>;

// Pulls chunks until the source is exhausted, pushes every output chunk to
// the sink, then flushes. The concatenated sink output, dropped by latency()
// samples, equals run() on the concatenated input.
RunStats run_streaming(const ChunkSource& source, const ChunkSink& sink,
                       const EngineConfig& config);

// Processing directly on spectrograms (mic and P reference channels).
Spectrogram run_spectral(const Spectrogram& mic,
                         std::span<const Spectrogram> refs,
                         const EngineConfig& config, RunStats* stats = nullptr);

}  // namespace naec
