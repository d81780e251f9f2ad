// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace naec {

using cplx = std::complex<double>;

inline constexpr int kSampleRate = 16000;

// Error hierarchy. Every precondition failure in the library throws one of
// these; the CLI maps them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class RateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

// Mono time-domain signal. All pipeline entry points require 16 kHz.
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  AudioSignal() = default;
  explicit AudioSignal(std::vector<double> s, int rate = kSampleRate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws RateError unless the signal is at 16 kHz, FormatError on non-finite
// samples. `what` names the signal in the diagnostic.
void require_pipeline_signal(const AudioSignal& signal, const std::string& what);

}  // namespace naec
