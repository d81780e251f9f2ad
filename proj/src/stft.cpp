// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/stft.hpp"

#include "fftw_lock.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>

namespace naec {

namespace detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

namespace {

std::vector<double> overlap_sums(const std::vector<double>& w,
                                 std::size_t hop) {
  std::vector<double> sums(hop, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) sums[i % hop] += w[i] * w[i];
  return sums;
}

}  // namespace

std::vector<double> hann_window(std::size_t len) {
  std::vector<double> w(len);
  for (std::size_t i = 0; i < len; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(len));
  }
  return w;
}

void validate(const StftConfig& config) {
  if (config.window_len < 4 || !std::has_single_bit(config.window_len)) {
    throw ConfigError("stft: window_len must be a power of two >= 4");
  }
  if (config.hop == 0 || config.hop > config.window_len ||
      config.window_len % config.hop != 0) {
    throw ConfigError("stft: hop must divide window_len");
  }
  const auto sums = overlap_sums(hann_window(config.window_len), config.hop);
  const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
  if (*lo <= 0.0 || (*hi - *lo) > 1e-9 * *hi) {
    throw ConfigError(
        "stft: window/hop pair does not satisfy constant overlap-add");
  }
}

struct FrameTransform::Impl {
  StftConfig config;
  std::vector<double> window;
  double norm = 1.0;
  double* time = nullptr;
  fftw_complex* freq = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(const StftConfig& cfg) : config(cfg) {
    validate(cfg);
    window = hann_window(cfg.window_len);
    norm = overlap_sums(window, cfg.hop)[0];
    const std::size_t n = cfg.fft_len();
    std::lock_guard lock(detail::fftw_planner_mutex());
    time = fftw_alloc_real(n);
    freq = fftw_alloc_complex(n / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), time, freq, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), freq, time, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(time);
    fftw_free(freq);
  }
};

FrameTransform::FrameTransform(const StftConfig& config)
    : impl_(std::make_unique<Impl>(config)) {}
FrameTransform::~FrameTransform() = default;
FrameTransform::FrameTransform(FrameTransform&&) noexcept = default;
FrameTransform& FrameTransform::operator=(FrameTransform&&) noexcept = default;

const StftConfig& FrameTransform::config() const { return impl_->config; }
std::span<const double> FrameTransform::window() const {
  return impl_->window;
}
double FrameTransform::synthesis_norm() const { return impl_->norm; }

void FrameTransform::forward(std::span<const double> frame,
                             std::span<cplx> spectrum) {
  const std::size_t n = impl_->config.fft_len();
  if (frame.size() != n || spectrum.size() != n / 2 + 1) {
    throw ShapeError("stft: frame/spectrum size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    impl_->time[i] = frame[i] * impl_->window[i];
  }
  fftw_execute(impl_->fwd);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    spectrum[k] = {impl_->freq[k][0], impl_->freq[k][1]};
  }
}

void FrameTransform::inverse(std::span<const cplx> spectrum,
                             std::span<double> frame) {
  const std::size_t n = impl_->config.fft_len();
  if (frame.size() != n || spectrum.size() != n / 2 + 1) {
    throw ShapeError("stft: frame/spectrum size mismatch");
  }
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    impl_->freq[k][0] = spectrum[k].real();
    impl_->freq[k][1] = spectrum[k].imag();
  }
  // DC and Nyquist bins of a real signal are real.
  impl_->freq[0][1] = 0.0;
  impl_->freq[n / 2][1] = 0.0;
  fftw_execute(impl_->inv);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    frame[i] = impl_->time[i] * scale * impl_->window[i];
  }
}

std::size_t frame_count(std::size_t length, const StftConfig& config) {
  // Trailing frames mirror the lead padding, so every sample sits under
  // window_len/hop frames.
  return (length + config.hop - 1) / config.hop +
         config.window_len / config.hop - 1;
}

Spectrogram analyze(std::span<const double> samples, const StftConfig& config) {
  FrameTransform transform(config);
  const std::size_t n_frames = frame_count(samples.size(), config);
  const std::size_t lead = config.lead_pad();
  std::vector<double> padded((n_frames - 1) * config.hop + config.window_len,
                             0.0);
  std::copy(samples.begin(), samples.end(), padded.begin() + lead);

  Spectrogram spec(config.bins(), n_frames, config);
  for (std::size_t n = 0; n < n_frames; ++n) {
    transform.forward({padded.data() + n * config.hop, config.window_len},
                      spec.frame(n));
  }
  return spec;
}

Spectrogram analyze(const AudioSignal& signal, const StftConfig& config) {
  return analyze(std::span<const double>(signal.samples), config);
}

AudioSignal synthesize(const Spectrogram& spec) {
  FrameTransform transform(spec.config);
  const auto& cfg = spec.config;
  if (spec.bins != cfg.bins()) throw ShapeError("stft: bin count mismatch");
  if (spec.frames == 0) return AudioSignal{};
  const std::size_t len = (spec.frames - 1) * cfg.hop + cfg.window_len;
  std::vector<double> out(len, 0.0), frame(cfg.window_len);
  for (std::size_t n = 0; n < spec.frames; ++n) {
    transform.inverse(spec.frame(n), frame);
    const std::size_t off = n * cfg.hop;
    for (std::size_t i = 0; i < cfg.window_len; ++i) out[off + i] += frame[i];
  }
  // Fixed WOLA normalization: exact wherever all overlapping frames are
  // present, tapered (never amplified) at the two ends.
  const double norm = transform.synthesis_norm();
  for (double& v : out) v /= norm;
  return AudioSignal(std::move(out));
}

AudioSignal synthesize_aligned(const Spectrogram& spec, std::size_t length) {
  AudioSignal full = synthesize(spec);
  const std::size_t lead = spec.config.lead_pad();
  std::vector<double> out(length, 0.0);
  for (std::size_t i = 0; i < length && lead + i < full.samples.size(); ++i) {
    out[i] = full.samples[lead + i];
  }
  return AudioSignal(std::move(out));
}

}  // namespace naec
