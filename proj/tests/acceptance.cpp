// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// End-to-end acceptance checks. Prints one [PASS]/[FAIL] line per criterion
// and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "naec/experiment.hpp"
#include "naec/hermitian.hpp"
#include "naec/metrics.hpp"
#include "naec/signals.hpp"
#include "test_util.hpp"

using namespace naec;
using test::MatC;
using test::VecC;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. STFT perfect reconstruction.
Outcome stft_reconstruction() {
  const auto x = signals::white_noise(2.0, 7);
  const auto t0 = Clock::now();
  const auto y = synthesize_aligned(analyze(x, StftConfig{}), x.size());
  const double secs = seconds_since(t0);
  double worst = 0.0;
  for (std::size_t i = 1024; i + 1024 < x.size(); ++i) {
    worst = std::max(worst, std::abs(y.samples[i] - x.samples[i]));
  }
  return {worst <= 1e-9 && secs < 1.0,
          fmt("max interior error %.3g", worst) + fmt(", %.3f s", secs)};
}

// 2. (W V)⁻¹e₁ == V⁻¹e₁ for constrained W.
Outcome first_column_identity() {
  std::mt19937_64 rng(2);
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t dim : {2u, 4u, 10u}) {
    std::vector<cplx> v(dim * dim), x(dim), scratch(dim * dim);
    for (int trial = 0; trial < 1000; ++trial, ++count) {
      const MatC a = test::random_hpd(dim, rng);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) v[i * dim + j] = a(i, j);
      MatC w = MatC::Identity(dim, dim);
      const auto tail = test::crandn(dim - 1, rng);
      for (std::size_t j = 1; j < dim; ++j) w(0, j) = std::conj(tail[j - 1]);
      if (!hermitian::solve_e1(v, dim, 0.0, x, scratch)) return {false, "solve failed"};
      const VecC lhs = (w * a).partialPivLu().solve(VecC::Unit(dim, 0));
      const VecC rhs = test::to_eigen_vec(x.data(), dim);
      worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 5.0,
          std::to_string(count) + " matrices" + fmt(", worst relative error %.3g", worst) +
              fmt(", %.3f s", secs)};
}

// Time-domain ERLE of a spectral-domain run on the oracle scene.
double spectral_erle(const Spectrogram& mic, const Spectrogram& out,
                     std::size_t length) {
  const auto y = synthesize_aligned(mic, length);
  const auto e = synthesize_aligned(out, length);
  return metrics::steady_state(metrics::erle(y, e));
}

// 3. Model-matched convergence.
Outcome oracle_scene() {
  const auto far = signals::speech(10.0, signals::Voice::kMale, 3);
  const StftConfig stft;
  const CtfConfig ctf{3, 3};
  const auto scene = sim::make_ctf_echo_scene(far, stft, ctf, 3);

  // Least-squares oracle: per-bin best fixed row over the whole run.
  const std::size_t dim = ctf.dim(), bins = stft.bins(), frames = scene.mic.frames;
  Spectrogram ls_out(bins, frames, stft);
  double ideal_gap = 0.0;
  FrameObservations obs(bins, dim);
  std::vector<FrameObservations> all(frames, FrameObservations(bins, dim));
  for (std::size_t n = 0; n < frames; ++n) build_frame(scene.mic, scene.refs, n, ctf, all[n]);
  for (std::size_t k = 0; k < bins; ++k) {
    MatC a(frames, dim - 1);
    VecC b(frames);
    for (std::size_t n = 0; n < frames; ++n) {
      const auto y = all[n].bin(k);
      b(n) = y[0];
      for (std::size_t d = 1; d < dim; ++d) a(n, d - 1) = y[d];
    }
    const VecC h = a.completeOrthogonalDecomposition().solve(b);
    DemixingRow row(dim);
    for (std::size_t d = 1; d < dim; ++d) row.w_full[d] = -std::conj(h(d - 1));
    const auto ideal = scene.ideal_row(k);
    for (std::size_t d = 1; d < dim; ++d) {
      ideal_gap = std::max(ideal_gap, std::abs(ideal.w_full[d] - row.w_full[d]));
    }
    for (std::size_t n = 0; n < frames; ++n) ls_out.at(k, n) = apply_demixing(row, all[n].bin(k));
  }
  const double ls_db = spectral_erle(scene.mic, ls_out, far.size());

  std::string detail = fmt("least-squares oracle %.1f dB", ls_db) +
                       fmt(" (max |w_ls - w_ideal| %.2g)", ideal_gap);
  bool pass = ls_db >= 25.0;
  for (Algorithm alg : {Algorithm::kAuxiva, Algorithm::kIlrma}) {
    EngineConfig cfg;
    cfg.algorithm = alg;
    const auto out = run_spectral(scene.mic, scene.refs, cfg);
    const double db = spectral_erle(scene.mic, out, far.size());
    detail += ", " + to_string(alg) + fmt(" %.2f dB", db);
    pass = pass && db >= 25.0;
  }
  return {pass, detail};
}

experiment::ExperimentSpec make_spec(const std::string& text) {
  return experiment::load(KeyValueConfig::parse(text), std::nullopt, true);
}

// 4. L = 3 beats L = 1 under reverberation and clipping.
Outcome ctf_over_mtf() {
  bool pass = true;
  std::string detail;
  for (const char* alg : {"auxiva", "ilrma"}) {
    const auto spec = make_spec(std::string("seed = 1\n[scene]\nduration_s = 10\n"
                                            "[scene.room]\nt60 = 0.8\n"
                                            "[engine]\nalgorithm = ") +
                                alg +
                                "\n[compare]\nconfigs = ctf, mtf\n"
                                "[engine.ctf]\nframes_L = 3\n[engine.mtf]\nframes_L = 1\n");
    const auto result = experiment::run(spec);
    const double ctf = result.steady.at(0).steady_db;
    const double mtf = result.steady.at(1).steady_db;
    pass = pass && ctf - mtf >= 2.0;
    if (!detail.empty()) detail += "; ";
    detail += std::string(alg) + fmt(" L=3 %.2f dB", ctf) + fmt(" vs L=1 %.2f dB", mtf);
  }
  return {pass, detail};
}

// 5. Double-talk near-end preservation.
Outcome double_talk() {
  bool pass = true;
  std::string detail;
  const auto base = experiment::load(
      KeyValueConfig::parse("seed = 1\n[scene]\nduration_s = 10\n"
                            "near_end = synth:speech_female\nser_db = 0\n"
                            "[scene.room]\nt60 = 0.3\n"),
      std::nullopt, false);
  const auto scene_spec = experiment::scene_from_config(base.config, base.seed);
  const auto scene = sim::synthesize_scene(scene_spec);
  for (Algorithm alg : {Algorithm::kAuxiva, Algorithm::kIlrma}) {
    EngineConfig cfg;
    cfg.algorithm = alg;
    const auto e = run(scene_spec.far_end, scene.microphone, cfg);
    const double terle =
        metrics::steady_state(metrics::terle(scene.echo, e, scene.near_end));
    // Residual against the near end over the same steady-state tail.
    const std::size_t n = e.size();
    const std::size_t start = n - static_cast<std::size_t>(0.3 * n);
    double res_out = 0.0, res_mic = 0.0;
    for (std::size_t i = start; i < n; ++i) {
      const double s = scene.near_end.samples[i];
      res_out += (e.samples[i] - s) * (e.samples[i] - s);
      res_mic += (scene.microphone.samples[i] - s) * (scene.microphone.samples[i] - s);
    }
    pass = pass && terle > 5.0 && res_out < res_mic;
    if (!detail.empty()) detail += "; ";
    detail += to_string(alg) + fmt(" tERLE %.2f dB", terle) +
              fmt(", residual out/mic %.3f", res_out / res_mic);
  }
  return {pass, detail};
}

// 6. ILRMA NMF properties on random small instances.
Outcome ilrma_suite() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> uni(0.05, 2.0);
  const std::size_t K = 8, B = 2;
  const double floor = 1e-12;
  const auto t0 = Clock::now();
  double worst_fixed = 0.0, worst_consistency = 0.0;
  bool floors_ok = true;
  auto check_consistency = [&](const ilrma::NmfSourceModel& m) {
    for (std::size_t k = 0; k < K; ++k) {
      double r = 0.0;
      for (std::size_t b = 0; b < B; ++b) r += m.basis(k, b) * m.v[b];
      r = std::max(r, floor);
      worst_consistency = std::max(worst_consistency, std::abs(m.r[k] - r) / r);
      floors_ok = floors_ok && m.r[k] >= floor;
      for (std::size_t b = 0; b < B; ++b) floors_ok = floors_ok && m.basis(k, b) >= floor;
    }
    for (double v : m.v) floors_ok = floors_ok && v >= floor;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    ilrma::NmfSourceModel m(K, B, floor);
    for (auto& t : m.t) t = uni(rng);
    for (auto& v : m.v) v = uni(rng);
    ilrma::recompute_variance(m);
    // Fixed point: |e|² == r everywhere.
    std::vector<cplx> e(K);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    for (std::size_t k = 0; k < K; ++k) e[k] = std::polar(std::sqrt(m.r[k]), phase(rng));
    const auto t_before = m.t;
    const auto v_before = m.v;
    ilrma::update_bases(m, e);
    ilrma::update_activations(m, e);
    for (std::size_t i = 0; i < m.t.size(); ++i)
      worst_fixed = std::max(worst_fixed, std::abs(m.t[i] - t_before[i]) / t_before[i]);
    for (std::size_t i = 0; i < m.v.size(); ++i)
      worst_fixed = std::max(worst_fixed, std::abs(m.v[i] - v_before[i]) / v_before[i]);
    check_consistency(m);
    // Random frames, including silent ones that push towards the floor.
    for (int step = 0; step < 5; ++step) {
      const bool silent = step == 4 && trial % 2 == 0;
      for (auto& v : e) v = silent ? cplx{} : test::crandn(1, rng, uni(rng))[0];
      ilrma::update_bases(m, e);
      check_consistency(m);
      ilrma::update_activations(m, e);
      check_consistency(m);
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_fixed <= 1e-12 && worst_consistency <= 1e-12 && floors_ok && secs < 5.0;
  return {pass, fmt("fixed-point drift %.2g", worst_fixed) +
                    fmt(", consistency %.2g", worst_consistency) +
                    (floors_ok ? ", floors held" : ", FLOOR VIOLATED") + fmt(", %.3f s", secs)};
}

// 7. Online AuxIVA converges to the offline batch rows.
Outcome offline_agreement() {
  std::mt19937_64 rng(7);
  const std::size_t K = 33, dim = 10;
  FrameObservations frame(K, dim);
  frame.data = test::crandn(K * dim, rng, 0.1);
  const std::vector<FrameObservations> batch(16, frame);
  const auxiva::Config cfg;
  const auto rows = auxiva::offline_batch(batch, 20, cfg);

  auxiva::State state(K, dim, cfg);
  std::vector<cplx> out(K);
  for (int rep = 0; rep < 400; ++rep) {
    for (const auto& f : batch) auxiva::process_frame(state, f, out);
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const VecC a = test::to_eigen_vec(state.bank.row(k).data(), dim);
    const VecC b = test::to_eigen_vec(rows[k].w_full.data(), dim);
    worst = std::max(worst, (a - b).norm() / b.norm());
  }
  return {worst <= 1e-6, fmt("worst per-bin relative difference %.3g", worst) +
                             fmt(" after %.0f online frames", 400.0 * 16)};
}

// 8. Real-time factor of a default 10 s run.
Outcome realtime() {
  const auto far = signals::speech(10.0, signals::Voice::kMale, 8);
  sim::SceneSpec spec;
  spec.far_end = far;
  const auto scene = sim::synthesize_scene(spec);
  RunStats stats;
  run(far, scene.microphone, EngineConfig{}, &stats);
  return {stats.wall_seconds < 10.0,
          fmt("%.2f s wall for 10 s audio", stats.wall_seconds) +
              fmt(" (%.1fx real time)", stats.realtime_factor())};
}

// 9. Simulator fidelity.
Outcome simulator() {
  bool pass = true;
  std::string detail;
  double worst_t60 = 0.0;
  for (double t60 : {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}) {
    sim::RoomSpec room;
    room.t60 = t60;
    const auto rir = sim::image_method_rir(room);
    const double measured = sim::schroeder_decay_time(rir.samples, -60.0);
    worst_t60 = std::max(worst_t60, std::abs(measured - t60) / t60);
  }
  pass = pass && worst_t60 <= 0.2;
  detail += fmt("worst T60 deviation %.1f%%", 100.0 * worst_t60);

  double worst_db = 0.0;
  for (double ser : {-10.0, 0.0, 10.0}) {
    for (double snr : {20.0, 40.0, 60.0}) {
      for (auto ref : {sim::SnrReference::kMixture, sim::SnrReference::kEcho}) {
        sim::SceneSpec spec;
        spec.far_end = signals::speech(2.0, signals::Voice::kMale, 1);
        spec.near_end = signals::speech(2.0, signals::Voice::kFemale, 2);
        spec.ser_db = ser;
        spec.snr_db = snr;
        spec.snr_reference = ref;
        const auto s = sim::synthesize_scene(spec);
        std::vector<double> clean(s.echo.size());
        for (std::size_t i = 0; i < clean.size(); ++i)
          clean[i] = ref == sim::SnrReference::kMixture ? s.echo.samples[i] + s.near_end.samples[i]
                                                        : s.echo.samples[i];
        worst_db = std::max(worst_db, std::abs(sim::power_ratio_db(s.near_end.samples, s.echo.samples) - ser));
        worst_db = std::max(worst_db, std::abs(sim::power_ratio_db(clean, s.noise.samples) - snr));
      }
    }
  }
  pass = pass && worst_db <= 0.01;
  detail += fmt(", worst SER/SNR error %.2g dB", worst_db);

  const double grid[] = {-1.0, -0.7, -0.2, -0.05, 0.0, 0.05, 0.2, 0.7, 1.0};
  std::size_t cases = 0, mismatches = 0;
  for (double ratio : {0.2, 0.5, 1.0}) {
    for (double a : grid)
      for (double b : grid)
        for (double c : grid) {
          const std::vector<double> x{a, b, c};
          const double peak = std::max({std::abs(a), std::abs(b), std::abs(c)});
          const double xmax = ratio * peak;
          const auto y = sim::hard_clip(AudioSignal(x), ratio);
          for (std::size_t i = 0; i < 3; ++i) {
            const double ref = x[i] > xmax ? xmax : (x[i] < -xmax ? -xmax : x[i]);
            mismatches += y.samples[i] != ref;
          }
          ++cases;
        }
  }
  pass = pass && mismatches == 0;
  detail += ", hard clip " + std::to_string(cases) + " vectors, " +
            std::to_string(mismatches) + " mismatches";
  return {pass, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// 10. Byte-identical reruns.
Outcome determinism() {
  const auto dir = test::scratch_dir("determinism");
  {
    std::ofstream cfg(dir / "exp.ini");
    cfg << "seed = 5\n[scene]\nduration_s = 4\nnear_end = synth:speech_female\n"
           "ser_db = 5\nsnr_db = 40\n[scene.room]\nt60 = 0.4\n";
  }
  std::ostringstream log, err;
  const int a = cli::cmd_simulate(dir / "exp.ini", dir / "a", std::nullopt, log, err);
  const int b = cli::cmd_simulate(dir / "exp.ini", dir / "b", std::nullopt, log, err);
  if (a != 0 || b != 0) return {false, "cmd_simulate failed: " + err.str()};
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    if (name.extension() != ".csv" && name.extension() != ".wav") continue;
    if (slurp(entry.path()) != slurp(dir / "b" / name)) {
      return {false, name.string() + " differs"};
    }
    ++files;
  }
  return {files >= 3, std::to_string(files) + " CSV/WAV files identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"STFT perfect reconstruction", stft_reconstruction},
      {"first-column identity of the constrained demixing matrix", first_column_identity},
      {"model-matched convergence on the CTF oracle scene", oracle_scene},
      {"CTF beats MTF at T60 = 0.8 s", ctf_over_mtf},
      {"double-talk near-end preservation", double_talk},
      {"ILRMA NMF fixed point, consistency and floors", ilrma_suite},
      {"online AuxIVA matches the offline batch oracle", offline_agreement},
      {"real-time factor", realtime},
      {"simulator fidelity", simulator},
      {"determinism of cmd_simulate", determinism},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << index++ << ". " << name << ": "
              << o.detail << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failures ? 1 : 0;
}
