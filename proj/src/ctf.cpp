// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/ctf.hpp"

namespace naec {

void validate(const CtfConfig& config) {
  if (config.frames_L < 1) throw ConfigError("CTF frames L must be >= 1");
  if (config.order_P < 1) throw ConfigError("expansion order P must be >= 1");
}

namespace {

void check_shapes(const Spectrogram& mic, std::span<const Spectrogram> refs,
                  const CtfConfig& config) {
  validate(config);
  if (refs.size() != static_cast<std::size_t>(config.order_P)) {
    throw ShapeError("ctf: expected " + std::to_string(config.order_P) +
                     " reference spectrograms, got " +
                     std::to_string(refs.size()));
  }
  for (const auto& r : refs) {
    if (r.bins != mic.bins || r.frames != mic.frames) {
      throw ShapeError("ctf: reference spectrogram shape differs from mic");
    }
  }
}

}  // namespace

ObservationVector build_observation(const Spectrogram& mic,
                                    std::span<const Spectrogram> refs,
                                    std::size_t k, std::size_t n,
                                    const CtfConfig& config) {
  check_shapes(mic, refs, config);
  if (k >= mic.bins || n >= mic.frames) {
    throw ShapeError("ctf: (k, n) out of range");
  }
  ObservationVector y(config.dim(), cplx{});
  y[0] = mic.at(k, n);
  std::size_t d = 1;
  for (int i = 0; i < config.order_P; ++i) {
    for (int l = 0; l < config.frames_L; ++l, ++d) {
      if (n >= static_cast<std::size_t>(l)) y[d] = refs[i].at(k, n - l);
    }
  }
  return y;
}

void build_frame(const Spectrogram& mic, std::span<const Spectrogram> refs,
                 std::size_t n, const CtfConfig& config,
                 FrameObservations& out) {
  check_shapes(mic, refs, config);
  if (n >= mic.frames) throw ShapeError("ctf: frame out of range");
  const std::size_t dim = config.dim();
  if (out.bins != mic.bins || out.dim != dim) {
    out = FrameObservations(mic.bins, dim);
  }
  for (std::size_t k = 0; k < mic.bins; ++k) {
    auto y = out.bin(k);
    y[0] = mic.at(k, n);
    std::size_t d = 1;
    for (int i = 0; i < config.order_P; ++i) {
      for (int l = 0; l < config.frames_L; ++l, ++d) {
        y[d] = n >= static_cast<std::size_t>(l) ? refs[i].at(k, n - l)
                                                : cplx{};
      }
    }
  }
}

ReferenceHistory::ReferenceHistory(std::size_t bins, const CtfConfig& config)
    : bins_(bins), config_(config) {
  validate(config);
  slots_.assign(config.frames_L,
                std::vector<std::vector<cplx>>(
                    config.order_P, std::vector<cplx>(bins, cplx{})));
}

void ReferenceHistory::push(std::span<const std::vector<cplx>> channel_spectra) {
  if (channel_spectra.size() != static_cast<std::size_t>(config_.order_P)) {
    throw ShapeError("ctf history: channel count mismatch");
  }
  head_ = (head_ + slots_.size() - 1) % slots_.size();
  for (std::size_t i = 0; i < channel_spectra.size(); ++i) {
    if (channel_spectra[i].size() != bins_) {
      throw ShapeError("ctf history: bin count mismatch");
    }
    slots_[head_][i] = channel_spectra[i];
  }
}

void ReferenceHistory::assemble(std::span<const cplx> mic_spectrum,
                                FrameObservations& out) const {
  if (mic_spectrum.size() != bins_) {
    throw ShapeError("ctf history: mic bin count mismatch");
  }
  const std::size_t dim = config_.dim();
  if (out.bins != bins_ || out.dim != dim) out = FrameObservations(bins_, dim);
  const std::size_t n_slots = slots_.size();
  for (std::size_t k = 0; k < bins_; ++k) {
    auto y = out.bin(k);
    y[0] = mic_spectrum[k];
    std::size_t d = 1;
    for (int i = 0; i < config_.order_P; ++i) {
      for (std::size_t l = 0; l < n_slots; ++l, ++d) {
        y[d] = slots_[(head_ + l) % n_slots][i][k];
      }
    }
  }
}

cplx apply_demixing(const DemixingRow& row, std::span<const cplx> y) {
  if (row.w_full.size() != y.size()) {
    throw ShapeError("apply_demixing: dimension mismatch");
  }
  return apply_demixing(std::span<const cplx>(row.w_full), y);
}

std::vector<cplx> demix_full(const DemixingRow& row, std::span<const cplx> y) {
  std::vector<cplx> e(y.begin(), y.end());
  e.at(0) = apply_demixing(row, y);
  return e;
}

}  // namespace naec
