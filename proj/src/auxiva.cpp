// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/auxiva.hpp"

#include <cmath>

#include "naec/hermitian.hpp"

namespace naec::auxiva {

void validate(const Config& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw ConfigError("auxiva: alpha must lie in (0, 1]");
  }
  if (!(config.beta > 0.0 && config.beta < 2.0)) {
    throw ConfigError("auxiva: beta must lie in (0, 2)");
  }
  if (!(config.diag_load > 0.0) || !(config.r_floor > 0.0)) {
    throw ConfigError("auxiva: diag_load and r_floor must be positive");
  }
}

State::State(std::size_t bins, std::size_t dim, const Config& cfg)
    : config(cfg), bank(bins, dim, cfg.init_scale) {}

double compute_r1(std::span<const cplx> e, const Config& config) {
  return std::max(std::sqrt(frame_energy(e)), config.r_floor);
}

double compute_r1(const State& state, const FrameObservations& obs) {
  std::vector<cplx> e(obs.bins);
  demix_frame(state.bank, obs, e, Exec::kSerial);
  return compute_r1(e, state.config);
}

double weight(double r1, const Config& config) {
  return std::pow(r1, config.beta - 2.0);
}

void update_covariance(State& state, std::size_t k, std::span<const cplx> y,
                       double phi) {
  state.bank.update_covariance(k, y, state.config.alpha, phi);
}

bool update_row(State& state, std::size_t k) {
  const std::size_t dim = state.bank.dim();
  std::vector<cplx> scratch(dim * (dim + 1));
  const bool ok = state.bank.update_row(k, state.config.diag_load, scratch);
  if (!ok) state.bank.add_skipped(1);
  return ok;
}

void process_frame(State& state, const FrameObservations& obs,
                   std::span<cplx> out, Exec exec) {
  demix_frame(state.bank, obs, out, exec);
  state.last_r1 = compute_r1(out, state.config);
  state.last_phi = weight(state.last_r1, state.config);
  const std::vector<double> weights(obs.bins, state.last_phi);
  update_bins(state.bank, obs, weights, state.config.alpha,
              state.config.diag_load, exec);
  demix_frame(state.bank, obs, out, exec);
  ++state.frame_count;
}

std::vector<DemixingRow> offline_batch(
    std::span<const FrameObservations> frames, int iterations,
    const Config& config) {
  validate(config);
  if (frames.empty()) return {};
  const std::size_t bins = frames[0].bins;
  const std::size_t dim = frames[0].dim;
  for (const auto& f : frames) {
    if (f.bins != bins || f.dim != dim) {
      throw ShapeError("auxiva offline: inconsistent frame shapes");
    }
  }
  const auto n_frames = static_cast<double>(frames.size());

  std::vector<DemixingRow> rows(bins, DemixingRow(dim));
  std::vector<double> phi(frames.size());
  std::vector<cplx> e(bins), cov(dim * dim);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t n = 0; n < frames.size(); ++n) {
      for (std::size_t k = 0; k < bins; ++k) {
        e[k] = apply_demixing(rows[k], frames[n].bin(k));
      }
      phi[n] = weight(compute_r1(e, config), config);
    }
    for (std::size_t k = 0; k < bins; ++k) {
      std::fill(cov.begin(), cov.end(), cplx{});
      for (std::size_t n = 0; n < frames.size(); ++n) {
        hermitian::rank1_update(cov, dim, 1.0, phi[n] / n_frames,
                                frames[n].bin(k));
      }
      solve_row(cov, dim, config.diag_load, rows[k].w_full);
    }
  }
  return rows;
}

}  // namespace naec::auxiva
