// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/sim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "fftw_lock.hpp"
#include "naec/nonlin.hpp"

namespace naec::sim {

namespace {

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool inside(const Vec3& p, const Vec3& dims) {
  for (int i = 0; i < 3; ++i) {
    if (!(p[i] > 0.0 && p[i] < dims[i])) return false;
  }
  return true;
}

}  // namespace

std::size_t auto_rir_length(double t60) {
  const auto tail = static_cast<std::size_t>(std::ceil(1.25 * t60 * kSampleRate));
  return std::max<std::size_t>(4096, tail);
}

void validate(const RoomSpec& room) {
  for (double d : room.dimensions) {
    if (!(d > 0.0)) throw GeometryError("room dimensions must be positive");
  }
  if (!inside(room.source, room.dimensions)) {
    throw GeometryError("source position outside the room");
  }
  if (!inside(room.mic, room.dimensions)) {
    throw GeometryError("microphone position outside the room");
  }
  if (distance(room.source, room.mic) < 0.1) {
    throw GeometryError("source-microphone distance below 0.1 m");
  }
  if (room.reflection) {
    if (!(*room.reflection >= 0.0 && *room.reflection < 1.0)) {
      throw GeometryError("reflection coefficient must lie in [0, 1)");
    }
  } else if (!(room.t60 >= 0.1 && room.t60 <= 2.0)) {
    throw GeometryError("t60 must lie in [0.1, 2.0] s");
  }
}

double sabine_reflection(const RoomSpec& room) {
  const auto& d = room.dimensions;
  const double volume = d[0] * d[1] * d[2];
  const double surface = 2.0 * (d[0] * d[1] + d[0] * d[2] + d[1] * d[2]);
  const double absorption =
      24.0 * std::log(10.0) * volume / (kSpeedOfSound * surface * room.t60);
  if (absorption > 1.0) {
    throw GeometryError("t60 too short for this room (Sabine absorption > 1)");
  }
  return std::sqrt(1.0 - absorption);
}

namespace {

// Allen-Berkley two-pole 100 Hz high-pass.
void allen_berkley_highpass(std::vector<double>& h) {
  const double w = 2.0 * std::numbers::pi * 100.0 / kSampleRate;
  const double r1 = std::exp(-w);
  const double b1 = 2.0 * r1 * std::cos(w);
  const double b2 = -r1 * r1;
  const double a1 = -(1.0 + r1);
  double y0 = 0.0, y1 = 0.0, y2 = 0.0;
  for (double& v : h) {
    y2 = y1;
    y1 = y0;
    y0 = b1 * y1 + b2 * y2 + v;
    v = y0 + a1 * y1 + r1 * y2;
  }
}

}  // namespace

double calibrated_reflection(const RoomSpec& room) {
  const auto& d = room.dimensions;
  // Midpoint quadrature over one octant of the unit sphere, uniform in
  // cos(theta) and phi so every node carries equal solid angle.
  constexpr int kNodes = 96;
  std::vector<double> g;
  g.reserve(kNodes * kNodes);
  for (int i = 0; i < kNodes; ++i) {
    const double z = (i + 0.5) / kNodes;
    const double rho = std::sqrt(1.0 - z * z);
    for (int j = 0; j < kNodes; ++j) {
      const double phi = 0.5 * std::numbers::pi * (j + 0.5) / kNodes;
      g.push_back(rho * std::cos(phi) / d[0] + rho * std::sin(phi) / d[1] +
                  z / d[2]);
    }
  }
  // Normalized Schroeder integral at decay exponent x = a·T60, where the
  // envelope is exp(-a·t·g): ⟨e^(-x g)/g⟩ / ⟨1/g⟩.
  double inv_sum = 0.0;
  for (double v : g) inv_sum += 1.0 / v;
  auto edc = [&](double x) {
    double acc = 0.0;
    for (double v : g) acc += std::exp(-x * v) / v;
    return acc / inv_sum;
  };
  const double target = 1e-6;
  double lo = 0.0, hi = 1.0;
  while (edc(hi) > target) hi *= 2.0;
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (edc(mid) > target ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);
  // Energy per reflection is β², reflections accrue at rate c·g.
  return std::exp(-x / (2.0 * kSpeedOfSound * room.t60));
}

double wall_reflection(const RoomSpec& room) {
  if (room.reflection) return *room.reflection;
  return room.model == ReflectionModel::kSabine ? sabine_reflection(room)
                                                : calibrated_reflection(room);
}

AudioSignal image_method_rir(const RoomSpec& room) {
  validate(room);
  const double beta = wall_reflection(room);
  const std::size_t len =
      room.rir_length > 0 ? room.rir_length : auto_rir_length(room.t60);
  const double fs = kSampleRate;
  const double samples_per_m = fs / kSpeedOfSound;

  std::vector<double> h(len, 0.0);
  const auto& L = room.dimensions;
  const auto& s = room.source;
  const auto& r = room.mic;
  const double max_dist = static_cast<double>(len) / samples_per_m;
  int n_img[3];
  for (int a = 0; a < 3; ++a) {
    n_img[a] = static_cast<int>(std::ceil(max_dist / (2.0 * L[a]))) + 1;
  }
  const int max_order = 2 * (n_img[0] + n_img[1] + n_img[2]) + 6;
  std::vector<double> beta_pow(max_order + 1);
  beta_pow[0] = 1.0;
  for (int i = 1; i <= max_order; ++i) beta_pow[i] = beta_pow[i - 1] * beta;

  for (int mx = -n_img[0]; mx <= n_img[0]; ++mx) {
    for (int my = -n_img[1]; my <= n_img[1]; ++my) {
      for (int mz = -n_img[2]; mz <= n_img[2]; ++mz) {
        for (int q = 0; q <= 1; ++q) {
          const double dx = (1 - 2 * q) * s[0] - r[0] + 2 * mx * L[0];
          const int ox = std::abs(mx - q) + std::abs(mx);
          for (int j = 0; j <= 1; ++j) {
            const double dy = (1 - 2 * j) * s[1] - r[1] + 2 * my * L[1];
            const int oy = std::abs(my - j) + std::abs(my);
            for (int k = 0; k <= 1; ++k) {
              const double dz = (1 - 2 * k) * s[2] - r[2] + 2 * mz * L[2];
              const int oz = std::abs(mz - k) + std::abs(mz);
              const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
              const double delay = std::round(dist * samples_per_m);
              if (delay >= static_cast<double>(len)) continue;
              const double gain = beta_pow[ox + oy + oz];
              if (gain == 0.0) continue;
              h[static_cast<std::size_t>(delay)] +=
                  gain / (4.0 * std::numbers::pi * dist);
            }
          }
        }
      }
    }
  }
  if (room.highpass) allen_berkley_highpass(h);
  return AudioSignal(std::move(h));
}

double schroeder_decay_time(std::span<const double> rir, double level_db) {
  std::vector<double> edc(rir.size() + 1, 0.0);
  for (std::size_t i = rir.size(); i-- > 0;) {
    edc[i] = edc[i + 1] + rir[i] * rir[i];
  }
  const double total = edc[0];
  if (!(total > 0.0)) return 0.0;
  const double threshold = total * std::pow(10.0, level_db / 10.0);
  for (std::size_t i = 0; i < rir.size(); ++i) {
    if (edc[i] <= threshold) return static_cast<double>(i) / kSampleRate;
  }
  return static_cast<double>(rir.size()) / kSampleRate;
}

void validate(const NonlinearitySpec& spec) {
  if (spec.kind == NonlinearityKind::kHardClip &&
      !(spec.clip_ratio > 0.0 && spec.clip_ratio <= 1.0)) {
    throw ConfigError("clip_ratio must lie in (0, 1]");
  }
  if (spec.kind == NonlinearityKind::kPowerSeries && spec.coeffs.empty()) {
    throw ConfigError("power_series nonlinearity needs coefficients");
  }
}

AudioSignal clip_at(const AudioSignal& x, double threshold) {
  AudioSignal out = x;
  for (double& v : out.samples) {
    if (v < -threshold) {
      v = -threshold;
    } else if (v > threshold) {
      v = threshold;
    }
  }
  return out;
}

AudioSignal hard_clip(const AudioSignal& x, double clip_ratio) {
  if (x.empty()) throw Error("hard_clip: empty signal");
  double peak = 0.0;
  for (double v : x.samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return x;
  return clip_at(x, clip_ratio * peak);
}

AudioSignal power_series_nonlinearity(const AudioSignal& x,
                                      std::span<const double> coeffs) {
  if (coeffs.empty()) throw ConfigError("power series: no coefficients");
  AudioSignal out = x;
  for (double& v : out.samples) {
    const double sq = v * v;
    double p = v;
    double acc = coeffs[0] * p;
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
      p *= sq;
      acc += coeffs[i] * p;
    }
    v = acc;
  }
  return out;
}

AudioSignal apply_nonlinearity(const AudioSignal& x,
                               const NonlinearitySpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case NonlinearityKind::kHardClip:
      return hard_clip(x, spec.clip_ratio);
    case NonlinearityKind::kPowerSeries:
      return power_series_nonlinearity(x, spec.coeffs);
    case NonlinearityKind::kNone:
      break;
  }
  return x;
}

std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h, std::size_t out_len) {
  std::vector<double> out(out_len, 0.0);
  if (x.empty() || h.empty() || out_len == 0) return out;
  const std::size_t full = x.size() + h.size() - 1;
  const std::size_t n = std::bit_ceil(std::min(full, out_len + h.size()));
  const std::size_t bins = n / 2 + 1;

  double* buf = nullptr;
  fftw_complex* fx = nullptr;
  fftw_complex* fh = nullptr;
  fftw_plan fwd_x, fwd_h, inv;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    buf = fftw_alloc_real(n);
    fx = fftw_alloc_complex(bins);
    fh = fftw_alloc_complex(bins);
    fwd_x = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf, fx, FFTW_ESTIMATE);
    fwd_h = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf, fh, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), fx, buf, FFTW_ESTIMATE);
  }
  // Circular wrap only lands beyond out_len because n >= out_len + |h| - 1.
  std::fill(buf, buf + n, 0.0);
  std::copy_n(x.begin(), std::min(x.size(), out_len), buf);
  fftw_execute(fwd_x);
  std::fill(buf, buf + n, 0.0);
  std::copy(h.begin(), h.end(), buf);
  fftw_execute(fwd_h);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = fx[k][0] * fh[k][0] - fx[k][1] * fh[k][1];
    const double im = fx[k][0] * fh[k][1] + fx[k][1] * fh[k][0];
    fx[k][0] = re;
    fx[k][1] = im;
  }
  fftw_execute(inv);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out_len && i < full; ++i) out[i] = buf[i] * scale;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd_x);
    fftw_destroy_plan(fwd_h);
    fftw_destroy_plan(inv);
    fftw_free(buf);
    fftw_free(fx);
    fftw_free(fh);
  }
  return out;
}

double mean_power(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double power_ratio_db(std::span<const double> num,
                      std::span<const double> den) {
  return 10.0 * std::log10(mean_power(num) / mean_power(den));
}

Scene synthesize_scene(const SceneSpec& spec) {
  require_pipeline_signal(spec.far_end, "far-end");
  if (spec.far_end.empty()) throw Error("scene: empty far-end signal");
  const std::size_t len = spec.far_end.size();

  Scene scene;
  scene.rir = image_method_rir(spec.room);
  const AudioSignal loudspeaker =
      apply_nonlinearity(spec.far_end, spec.nonlinearity);
  scene.echo = AudioSignal(convolve(loudspeaker.samples, scene.rir.samples, len));

  scene.near_end = AudioSignal(std::vector<double>(len, 0.0));
  if (spec.near_end) {
    require_pipeline_signal(*spec.near_end, "near-end");
    auto& s = scene.near_end.samples;
    std::copy_n(spec.near_end->samples.begin(),
                std::min(len, spec.near_end->size()), s.begin());
    const double ps = mean_power(s);
    const double pd = mean_power(scene.echo.samples);
    if (ps > 0.0 && pd > 0.0) {
      const double gain = std::sqrt(pd * std::pow(10.0, spec.ser_db / 10.0) / ps);
      for (double& v : s) v *= gain;
    }
  }

  scene.noise = AudioSignal(std::vector<double>(len, 0.0));
  if (std::isfinite(spec.snr_db)) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto& n = scene.noise.samples;
    for (double& v : n) v = gauss(rng);
    std::vector<double> ref = scene.echo.samples;
    if (spec.snr_reference == SnrReference::kMixture) {
      for (std::size_t i = 0; i < len; ++i) ref[i] += scene.near_end.samples[i];
    }
    const double pr = mean_power(ref);
    const double pn = mean_power(n);
    const double gain = pr > 0.0
                            ? std::sqrt(pr / (pn * std::pow(10.0, spec.snr_db / 10.0)))
                            : 0.0;
    for (double& v : n) v *= gain;
  }

  scene.microphone = AudioSignal(std::vector<double>(len));
  for (std::size_t i = 0; i < len; ++i) {
    scene.microphone.samples[i] = scene.echo.samples[i] +
                                  scene.near_end.samples[i] +
                                  scene.noise.samples[i];
  }
  return scene;
}

DemixingRow CtfEchoScene::ideal_row(std::size_t k) const {
  DemixingRow row(ctf.dim());
  const std::size_t block = static_cast<std::size_t>(ctf.order_P * ctf.frames_L);
  for (std::size_t d = 0; d < block; ++d) {
    row.w_full[d + 1] = -std::conj(filters[k * block + d]);
  }
  return row;
}

CtfEchoScene make_ctf_echo_scene(const AudioSignal& far_end,
                                 const StftConfig& stft, const CtfConfig& ctf,
                                 std::uint64_t seed) {
  validate(ctf);
  CtfEchoScene scene;
  scene.ctf = ctf;
  for (const auto& ch : expand(far_end, ExpansionConfig{ctf.order_P})) {
    scene.refs.push_back(analyze(ch, stft));
  }
  const std::size_t bins = stft.bins();
  const std::size_t frames = scene.refs[0].frames;
  const std::size_t P = ctf.order_P, L = ctf.frames_L;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  scene.filters.resize(bins * P * L);
  for (std::size_t k = 0; k < bins; ++k) {
    for (std::size_t i = 0; i < P; ++i) {
      for (std::size_t l = 0; l < L; ++l) {
        const double scale = std::pow(0.5, static_cast<double>(l));
        const double re = gauss(rng), im = gauss(rng);
        scene.filters[(k * P + i) * L + l] = scale * cplx{re, im};
      }
    }
  }

  scene.mic = Spectrogram(bins, frames, stft);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t k = 0; k < bins; ++k) {
      cplx acc{};
      for (std::size_t i = 0; i < P; ++i) {
        for (std::size_t l = 0; l < L && l <= n; ++l) {
          acc += scene.filters[(k * P + i) * L + l] * scene.refs[i].at(k, n - l);
        }
      }
      scene.mic.at(k, n) = acc;
    }
  }
  return scene;
}

}  // namespace naec::sim
