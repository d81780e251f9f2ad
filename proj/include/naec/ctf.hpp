// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "naec/stft.hpp"
#include "naec/types.hpp"

namespace naec {

// CTF stacking: L frames of each of the P reference channels. L = 1 is the
// multiplicative transfer function model.
struct CtfConfig {
  int frames_L = 3;
  int order_P = 3;

  std::size_t dim() const {
    return static_cast<std::size_t>(order_P * frames_L + 1);
  }
};

void validate(const CtfConfig& config);

// y(k, n) = [Y, X_1(n), X_1(n-1), .., X_1(n-L+1), X_2(n), .., X_P(n-L+1)].
using ObservationVector = std::vector<cplx>;

// Observation vectors of all bins of one frame, bin-major: bin k occupies
// [k·dim, (k+1)·dim).
struct FrameObservations {
  std::size_t bins = 0;
  std::size_t dim = 0;
  std::vector<cplx> data;

  FrameObservations() = default;
  FrameObservations(std::size_t k, std::size_t d)
      : bins(k), dim(d), data(k * d) {}

  std::span<cplx> bin(std::size_t k) { return {data.data() + k * dim, dim}; }
  std::span<const cplx> bin(std::size_t k) const {
    return {data.data() + k * dim, dim};
  }
};

// Lags reaching before frame 0 are zero.
ObservationVector build_observation(const Spectrogram& mic,
                                    std::span<const Spectrogram> refs,
                                    std::size_t k, std::size_t n,
                                    const CtfConfig& config);

void build_frame(const Spectrogram& mic, std::span<const Spectrogram> refs,
                 std::size_t n, const CtfConfig& config,
                 FrameObservations& out);

// Sliding window of the last L spectra of every reference channel for
// frame-by-frame streaming. Starts as zero history.
class ReferenceHistory {
 public:
  ReferenceHistory(std::size_t bins, const CtfConfig& config);

  // Pushes the current-frame spectra of all P channels (oldest lag drops).
  void push(std::span<const std::vector<cplx>> channel_spectra);
  void assemble(std::span<const cplx> mic_spectrum,
                FrameObservations& out) const;

 private:
  std::size_t bins_;
  CtfConfig config_;
  std::size_t head_ = 0;  // slot of the current frame
  // slots_[lag slot][channel][bin]
  std::vector<std::vector<std::vector<cplx>>> slots_;
};

// Constrained first row of the demixing matrix. The leading entry is 1; the
// tail holds the adaptive coefficients. E = w_fullᴴ y.
struct DemixingRow {
  std::vector<cplx> w_full;

  DemixingRow() = default;
  explicit DemixingRow(std::size_t dim) : w_full(dim, cplx{}) {
    w_full.at(0) = 1.0;
  }
  std::span<cplx> w_tail() { return std::span(w_full).subspan(1); }
  std::span<const cplx> w_tail() const {
    return std::span(w_full).subspan(1);
  }
};

// Σ_d conj(row[d])·y[d]; the first output of e = W y.
inline cplx apply_demixing(std::span<const cplx> row,
                           std::span<const cplx> y) {
  cplx acc = std::conj(row[0]) * y[0];
  for (std::size_t d = 1; d < row.size(); ++d) acc += std::conj(row[d]) * y[d];
  return acc;
}

cplx apply_demixing(const DemixingRow& row, std::span<const cplx> y);

// Full e = W y: first entry is E, the reference entries pass through.
std::vector<cplx> demix_full(const DemixingRow& row, std::span<const cplx> y);

}  // namespace naec
