// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "naec/ctf.hpp"
#include "naec/stft.hpp"
#include "naec/types.hpp"

namespace naec::sim {

using Vec3 = std::array<double, 3>;

inline constexpr double kSpeedOfSound = 343.0;

// How the uniform wall reflection coefficient follows from T60.
//   kCalibrated: matched to the image lattice's own energy envelope, so the
//                generated RIR decays by 60 dB in T60.
//   kSabine:     β = sqrt(1 - α) with Sabine's α. Image-method RIRs built
//                this way decay noticeably slower than T60 in long rooms.
enum class ReflectionModel { kCalibrated, kSabine };

struct RoomSpec {
  Vec3 dimensions{6.0, 5.0, 3.0};
  Vec3 source{2.0, 3.0, 1.2};
  Vec3 mic{4.0, 2.0, 1.2};
  double t60 = 0.3;
  // 0 selects auto_rir_length(t60).
  std::size_t rir_length = 0;
  ReflectionModel model = ReflectionModel::kCalibrated;
  // Allen-Berkley 100 Hz high-pass on the finished RIR. Nearest-sample
  // images all carry positive gain and pile up coherently at DC in the tail;
  // the filter removes that build-up. The first sample passes unchanged.
  bool highpass = true;
  // Overrides the T60-derived wall reflection coefficient when set.
  std::optional<double> reflection;
};

// max(4096, ceil(1.25·T60·fs)): long enough for the decay to pass -60 dB.
std::size_t auto_rir_length(double t60);

// Uniform wall reflection coefficient from Sabine's formula. Throws
// GeometryError when the requested T60 is below what the room can produce.
double sabine_reflection(const RoomSpec& room);

// Reflection coefficient β for which the direction-averaged image-lattice
// energy envelope ⟨β^(2·c·t·Σ|u_i|/L_i)⟩ has a Schroeder decay of 60 dB at
// t = T60.
double calibrated_reflection(const RoomSpec& room);

// Dispatches on room.model (room.reflection wins when set).
double wall_reflection(const RoomSpec& room);

void validate(const RoomSpec& room);

// Allen-Berkley image method, nearest-sample delays, 16 kHz.
// Reflection coefficient from wall_reflection(room); high-passed when room.highpass.
AudioSignal image_method_rir(const RoomSpec& room);

// Time (s) at which the Schroeder backward-integrated energy decay curve
// first falls to `level_db` (negative) relative to the total energy; the RIR
// length if it never does.
double schroeder_decay_time(std::span<const double> rir, double level_db);

enum class NonlinearityKind { kHardClip, kPowerSeries, kNone };

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::kHardClip;
  double clip_ratio = 0.2;
  std::vector<double> coeffs;
};

void validate(const NonlinearitySpec& spec);

// Clamps to ±clip_ratio·max|x|. All-zero input comes back unchanged.
AudioSignal hard_clip(const AudioSignal& x, double clip_ratio);
// Clamps to an explicit threshold.
AudioSignal clip_at(const AudioSignal& x, double threshold);

// Σ_i a_i x^(2i-1).
AudioSignal power_series_nonlinearity(const AudioSignal& x,
                                      std::span<const double> coeffs);

AudioSignal apply_nonlinearity(const AudioSignal& x,
                               const NonlinearitySpec& spec);

// Linear convolution truncated to the first `out_len` samples (FFT based).
std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h, std::size_t out_len);

enum class SnrReference { kMixture, kEcho };

struct SceneSpec {
  RoomSpec room;
  NonlinearitySpec nonlinearity;
  AudioSignal far_end;
  std::optional<AudioSignal> near_end;
  double ser_db = 0.0;
  // +inf disables noise.
  double snr_db = 60.0;
  SnrReference snr_reference = SnrReference::kMixture;
  std::uint64_t seed = 1;
};

struct Scene {
  AudioSignal microphone;  // y = d + s + noise
  AudioSignal echo;        // d = h * f(x)
  AudioSignal near_end;    // s, zero when absent
  AudioSignal noise;
  AudioSignal rir;
};

Scene synthesize_scene(const SceneSpec& spec);

// Mean of x².
double mean_power(std::span<const double> x);
double power_ratio_db(std::span<const double> num, std::span<const double> den);

// Echo built directly in the STFT domain from random fixed CTF filters:
// Y(k,n) = Σ_i Σ_l H_{i,l}(k) X_i(k, n-l). The exact cancelling row exists.
struct CtfEchoScene {
  std::vector<Spectrogram> refs;  // X_{φi}, i = 1..P
  Spectrogram mic;
  // H_{i,l}(k) at (k·P + i)·L + l.
  std::vector<cplx> filters;
  CtfConfig ctf;

  // Demixing row achieving exact cancellation in bin k.
  DemixingRow ideal_row(std::size_t k) const;
};

CtfEchoScene make_ctf_echo_scene(const AudioSignal& far_end,
                                 const StftConfig& stft, const CtfConfig& ctf,
                                 std::uint64_t seed);

}  // namespace naec::sim
