// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/signals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace naec::signals {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two-pole resonator with unit gain at its centre frequency (approximately).
struct Resonator {
  double a1 = 0.0, a2 = 0.0, g = 1.0;
  double y1 = 0.0, y2 = 0.0;

  void tune(double freq, double bandwidth) {
    const double radius = std::exp(-std::numbers::pi * bandwidth / kSampleRate);
    const double theta = kTwoPi * freq / kSampleRate;
    a1 = 2.0 * radius * std::cos(theta);
    a2 = -radius * radius;
    g = (1.0 - radius) *
        std::sqrt(1.0 - 2.0 * radius * std::cos(2.0 * theta) + radius * radius);
  }
  double step(double x) {
    const double y = g * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

void normalize_peak(std::vector<double>& x, double peak) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m > 0.0) {
    for (double& v : x) v *= peak / m;
  }
}

std::size_t sample_count(double seconds) {
  if (!(seconds > 0.0)) throw ConfigError("signal duration must be positive");
  return static_cast<std::size_t>(std::llround(seconds * kSampleRate));
}

// F1..F3 (Hz) of a few vowels, adult male.
constexpr std::array<std::array<double, 3>, 6> kVowels{{
    {730.0, 1090.0, 2440.0},
    {530.0, 1840.0, 2480.0},
    {270.0, 2290.0, 3010.0},
    {570.0, 840.0, 2410.0},
    {300.0, 870.0, 2240.0},
    {660.0, 1720.0, 2410.0},
}};

enum class Segment { kVoiced, kFricative, kPause };

}  // namespace

AudioSignal speech(double seconds, Voice voice, std::uint64_t seed) {
  const std::size_t total = sample_count(seconds);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  const bool female = voice == Voice::kFemale;
  const double f0_base = female ? 215.0 : 115.0;
  const double formant_scale = female ? 1.15 : 1.0;
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> out(total, 0.0);
  std::array<Resonator, 3> formants;
  std::array<double, 3> cur_f{500.0 * formant_scale, 1500.0 * formant_scale,
                              2500.0 * formant_scale};
  Resonator fricative;
  double phase = 0.0;
  const double contour_rate = uniform(0.4, 0.9);
  const double contour_phase = uniform(0.0, kTwoPi);

  std::size_t pos = 0;
  while (pos < total) {
    const double r = u(rng);
    const Segment kind = r < 0.72   ? Segment::kVoiced
                         : r < 0.90 ? Segment::kFricative
                                    : Segment::kPause;
    double dur = 0.0;
    switch (kind) {
      case Segment::kVoiced: dur = uniform(0.10, 0.28); break;
      case Segment::kFricative: dur = uniform(0.05, 0.14); break;
      case Segment::kPause: dur = uniform(0.03, 0.10); break;
    }
    const std::size_t len = std::min(
        total - pos, static_cast<std::size_t>(dur * kSampleRate));
    if (len == 0) break;
    const double level = uniform(0.5, 1.0);
    const auto& vowel = kVowels[static_cast<std::size_t>(u(rng) * kVowels.size()) %
                                kVowels.size()];
    const double pitch_offset = uniform(0.88, 1.12);
    fricative.tune(uniform(2500.0, 5000.0), 1500.0);
    const std::size_t ramp = std::min<std::size_t>(len / 2, 240);  // 15 ms

    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t t = pos + i;
      double env = level;
      if (i < ramp) env *= 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
      if (len - i <= ramp) {
        env *= 0.5 - 0.5 * std::cos(std::numbers::pi * (len - i) / ramp);
      }

      // Formants glide towards the segment targets with a ~20 ms constant.
      if (i % 32 == 0) {
        for (int f = 0; f < 3; ++f) {
          const double target = vowel[f] * formant_scale;
          cur_f[f] += (target - cur_f[f]) * (1.0 - std::exp(-32.0 / 320.0));
          formants[f].tune(cur_f[f], 90.0 + 40.0 * f);
        }
      }

      const double time = static_cast<double>(t) / kSampleRate;
      const double f0 = f0_base * pitch_offset *
                        (1.0 + 0.1 * std::sin(kTwoPi * contour_rate * time +
                                              contour_phase));
      phase += kTwoPi * f0 / kSampleRate;
      if (phase > kTwoPi) phase -= kTwoPi;

      double excitation = 0.0;
      if (kind == Segment::kVoiced) {
        const int harmonics = static_cast<int>(3800.0 / f0);
        for (int h = 1; h <= harmonics; ++h) {
          excitation += std::sin(h * phase) / h;
        }
        excitation += 0.02 * gauss(rng);
        double y = excitation;
        for (auto& f : formants) y = f.step(y);
        out[t] = env * y;
      } else {
        const double noise = gauss(rng);
        for (auto& f : formants) f.step(0.0);
        out[t] = kind == Segment::kFricative ? 0.35 * env * fricative.step(noise)
                                             : 0.0;
      }
    }
    pos += len;
  }
  normalize_peak(out, 0.5);
  return AudioSignal(std::move(out));
}

AudioSignal music(double seconds, std::uint64_t seed) {
  const std::size_t total = sample_count(seconds);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr std::array<int, 5> kPentatonic{0, 3, 5, 7, 10};
  constexpr std::array<double, 3> kDurations{0.25, 0.5, 0.75};

  std::vector<double> out(total, 0.0);
  for (int voice = 0; voice < 3; ++voice) {
    std::size_t pos = 0;
    while (pos < total) {
      const double dur =
          kDurations[static_cast<std::size_t>(u(rng) * 3.0) % kDurations.size()];
      const int degree = static_cast<int>(u(rng) * 10.0);
      const int midi = 45 + 12 * voice + 12 * (degree / 5) +
                       kPentatonic[static_cast<std::size_t>(degree % 5)];
      const double freq = 440.0 * std::pow(2.0, (midi - 69) / 12.0);
      const double level = 0.4 + 0.6 * u(rng);
      const std::size_t len =
          std::min(total - pos, static_cast<std::size_t>(dur * kSampleRate));
      if (len == 0) break;
      const std::size_t release = std::min<std::size_t>(len / 2, 320);
      for (std::size_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(i) / kSampleRate;
        double env = level * std::exp(-t / 0.4);
        if (i < 160) env *= static_cast<double>(i) / 160.0;
        if (len - i <= release) env *= static_cast<double>(len - i) / release;
        double tone = 0.0;
        double amp = 1.0;
        for (int h = 1; h <= 8 && h * freq < 7000.0; ++h, amp *= 0.6) {
          tone += amp * std::sin(kTwoPi * h * freq * t);
        }
        out[pos + i] += env * tone;
      }
      pos += len;
    }
  }
  normalize_peak(out, 0.5);
  return AudioSignal(std::move(out));
}

AudioSignal white_noise(double seconds, std::uint64_t seed) {
  std::vector<double> out(sample_count(seconds));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : out) v = gauss(rng);
  normalize_peak(out, 0.5);
  return AudioSignal(std::move(out));
}

AudioSignal by_name(const std::string& name, double seconds,
                    std::uint64_t seed) {
  if (name == "speech_male") return speech(seconds, Voice::kMale, seed);
  if (name == "speech_female") return speech(seconds, Voice::kFemale, seed);
  if (name == "music") return music(seconds, seed);
  if (name == "noise") return white_noise(seconds, seed);
  throw ConfigError("unknown synthetic signal '" + name + "'");
}

}  // namespace naec::signals
