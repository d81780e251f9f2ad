// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "naec/types.hpp"

namespace naec {

// Periodic Hann analysis/synthesis with weighted overlap-add.
struct StftConfig {
  std::size_t window_len = 1024;
  std::size_t hop = 256;

  std::size_t fft_len() const { return window_len; }
  std::size_t bins() const { return window_len / 2 + 1; }
  // Zero padding in front of the signal so frame 0 ends at sample `hop`.
  std::size_t lead_pad() const { return window_len - hop; }
};

// Throws ConfigError if the window length is not a power of two, the hop does
// not divide it, or the squared window does not overlap-add to a constant.
void validate(const StftConfig& config);

std::vector<double> hann_window(std::size_t len);

// Frame-major complex spectrogram: entry (k, n) at data[n * bins + k].
struct Spectrogram {
  std::size_t bins = 0;
  std::size_t frames = 0;
  StftConfig config;
  std::vector<cplx> data;

  Spectrogram() = default;
  Spectrogram(std::size_t k, std::size_t n, StftConfig cfg)
      : bins(k), frames(n), config(cfg), data(k * n) {}

  cplx& at(std::size_t k, std::size_t n) { return data[n * bins + k]; }
  const cplx& at(std::size_t k, std::size_t n) const {
    return data[n * bins + k];
  }
  std::span<cplx> frame(std::size_t n) {
    return {data.data() + n * bins, bins};
  }
  std::span<const cplx> frame(std::size_t n) const {
    return {data.data() + n * bins, bins};
  }
};

// Owns FFTW plans and scratch buffers for one window length. Not thread-safe;
// use one instance per thread.
class FrameTransform {
 public:
  explicit FrameTransform(const StftConfig& config);
  ~FrameTransform();
  FrameTransform(FrameTransform&&) noexcept;
  FrameTransform& operator=(FrameTransform&&) noexcept;
  FrameTransform(const FrameTransform&) = delete;
  FrameTransform& operator=(const FrameTransform&) = delete;

  const StftConfig& config() const;
  std::span<const double> window() const;
  // Σ_m w²(i + m·hop); constant across i for a valid config.
  double synthesis_norm() const;

  // Windowed one-sided DFT of window_len samples.
  void forward(std::span<const double> frame, std::span<cplx> spectrum);
  // Inverse DFT of a one-sided spectrum, multiplied by the synthesis window
  // (not yet normalized by synthesis_norm()).
  void inverse(std::span<const cplx> spectrum, std::span<double> frame);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Number of frames analyze() produces for `length` samples.
std::size_t frame_count(std::size_t length, const StftConfig& config);

// Frame n covers samples [n·hop, n·hop + window_len) of the signal after
// lead_pad() zeros are prepended. The tail is zero padded the same way, so
// every input sample is covered by window_len/hop frames and
// synthesize_aligned(analyze(x)) reproduces all of x.
Spectrogram analyze(const AudioSignal& signal, const StftConfig& config);
Spectrogram analyze(std::span<const double> samples, const StftConfig& config);

// Weighted overlap-add normalized by synthesis_norm(). The result has
// (frames - 1)·hop + window_len samples on the padded time axis of analyze();
// reconstruction is exact wherever window_len/hop frames overlap.
AudioSignal synthesize(const Spectrogram& spec);

// synthesize() with the lead padding removed and the output cut to `length`
// samples, i.e. aligned with the signal given to analyze().
AudioSignal synthesize_aligned(const Spectrogram& spec, std::size_t length);

}  // namespace naec
