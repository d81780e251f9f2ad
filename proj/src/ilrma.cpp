// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/ilrma.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "naec/hermitian.hpp"

namespace naec::ilrma {

void validate(const Config& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw ConfigError("ilrma: alpha must lie in (0, 1]");
  }
  if (config.bases_B < 1) throw ConfigError("ilrma: bases_B must be >= 1");
  if (!(config.diag_load > 0.0) || !(config.nmf_floor > 0.0)) {
    throw ConfigError("ilrma: diag_load and nmf_floor must be positive");
  }
}

NmfSourceModel::NmfSourceModel(std::size_t k, std::size_t b, double nmf_floor)
    : bins(k),
      bases(b),
      floor(nmf_floor),
      t(k * b, 1.0),
      v(b, 1.0 / static_cast<double>(b)),
      r(k, 0.0) {
  recompute_variance(*this);
}

void recompute_variance(NmfSourceModel& model) {
  for (std::size_t k = 0; k < model.bins; ++k) {
    double acc = 0.0;
    for (std::size_t b = 0; b < model.bases; ++b) {
      acc += model.basis(k, b) * model.v[b];
    }
    model.r[k] = std::max(acc, model.floor);
  }
}

void update_bases(NmfSourceModel& model, std::span<const cplx> e1) {
  if (e1.size() != model.bins) throw ShapeError("ilrma: e1 size mismatch");
  for (std::size_t k = 0; k < model.bins; ++k) {
    const double p = std::norm(e1[k]);
    const double r = model.r[k];
    for (std::size_t b = 0; b < model.bases; ++b) {
      const double v = model.v[b];
      const double num = p * v / (r * r);
      const double den = v / r;
      double& t = model.basis(k, b);
      t = std::max(t * std::sqrt(num / den), model.floor);
    }
  }
  recompute_variance(model);
}

void update_activations(NmfSourceModel& model, std::span<const cplx> e1) {
  if (e1.size() != model.bins) throw ShapeError("ilrma: e1 size mismatch");
  std::vector<double> num(model.bases, 0.0), den(model.bases, 0.0);
  for (std::size_t k = 0; k < model.bins; ++k) {
    const double p = std::norm(e1[k]);
    const double r = model.r[k];
    for (std::size_t b = 0; b < model.bases; ++b) {
      const double t = model.basis(k, b);
      num[b] += p * t / (r * r);
      den[b] += t / r;
    }
  }
  for (std::size_t b = 0; b < model.bases; ++b) {
    model.v[b] = std::max(model.v[b] * std::sqrt(num[b] / den[b]), model.floor);
  }
  recompute_variance(model);
}

State::State(std::size_t bins, std::size_t dim, const Config& cfg)
    : config(cfg),
      bank(bins, dim, cfg.init_scale),
      model(bins, static_cast<std::size_t>(cfg.bases_B), cfg.nmf_floor) {}

void update_covariance(State& state, std::size_t k, std::span<const cplx> y) {
  state.bank.update_covariance(k, y, state.config.alpha, 1.0 / state.model.r[k]);
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
  update_bases(state.model, out);
  update_activations(state.model, out);
  std::vector<double> weights(obs.bins);
  for (std::size_t k = 0; k < obs.bins; ++k) weights[k] = 1.0 / state.model.r[k];
  update_bins(state.bank, obs, weights, state.config.alpha,
              state.config.diag_load, exec);
  demix_frame(state.bank, obs, out, exec);
  ++state.frame_count;
}

BatchModel make_batch_model(std::size_t bins, std::size_t bases,
                            std::size_t frames, std::uint64_t seed) {
  BatchModel m;
  m.bins = bins;
  m.bases = bases;
  m.frames = frames;
  m.t.assign(bins * bases, 1.0);
  m.v.assign(bases * frames, 1.0 / static_cast<double>(bases));
  m.r.assign(bins * frames, 0.0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.1);
    for (double& x : m.t) x = u(rng);
    for (double& x : m.v) x = u(rng);
  }
  return m;
}

void recompute_variance(BatchModel& m, double floor) {
  for (std::size_t k = 0; k < m.bins; ++k) {
    for (std::size_t n = 0; n < m.frames; ++n) {
      double acc = 0.0;
      for (std::size_t b = 0; b < m.bases; ++b) {
        acc += m.basis(k, b) * m.activation(b, n);
      }
      m.variance(k, n) = std::max(acc, floor);
    }
  }
}

void nmf_sweep(BatchModel& m, std::span<const double> power, double floor) {
  if (power.size() != m.bins * m.frames) {
    throw ShapeError("ilrma: power matrix shape mismatch");
  }
  recompute_variance(m, floor);
  for (std::size_t k = 0; k < m.bins; ++k) {
    for (std::size_t b = 0; b < m.bases; ++b) {
      double num = 0.0, den = 0.0;
      for (std::size_t n = 0; n < m.frames; ++n) {
        const double r = m.variance(k, n);
        num += power[k * m.frames + n] * m.activation(b, n) / (r * r);
        den += m.activation(b, n) / r;
      }
      m.basis(k, b) = std::max(m.basis(k, b) * std::sqrt(num / den), floor);
    }
  }
  recompute_variance(m, floor);
  for (std::size_t b = 0; b < m.bases; ++b) {
    for (std::size_t n = 0; n < m.frames; ++n) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < m.bins; ++k) {
        const double r = m.variance(k, n);
        num += power[k * m.frames + n] * m.basis(k, b) / (r * r);
        den += m.basis(k, b) / r;
      }
      m.activation(b, n) =
          std::max(m.activation(b, n) * std::sqrt(num / den), floor);
    }
  }
  recompute_variance(m, floor);
}

double is_divergence(const BatchModel& m, std::span<const double> power) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.r.size(); ++i) {
    const double q = power[i] / m.r[i];
    acc += q - std::log(q) - 1.0;
  }
  return acc;
}

OfflineResult offline_batch(std::span<const FrameObservations> frames,
                            int iterations, const Config& config,
                            std::uint64_t seed) {
  validate(config);
  OfflineResult res;
  if (frames.empty()) return res;
  const std::size_t bins = frames[0].bins;
  const std::size_t dim = frames[0].dim;
  const std::size_t n_frames = frames.size();
  for (const auto& f : frames) {
    if (f.bins != bins || f.dim != dim) {
      throw ShapeError("ilrma offline: inconsistent frame shapes");
    }
  }
  res.rows.assign(bins, DemixingRow(dim));
  res.model = make_batch_model(bins, static_cast<std::size_t>(config.bases_B),
                               n_frames, seed);
  recompute_variance(res.model, config.nmf_floor);

  std::vector<double> power(bins * n_frames);
  std::vector<cplx> cov(dim * dim);
  const double inv_n = 1.0 / static_cast<double>(n_frames);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t k = 0; k < bins; ++k) {
      for (std::size_t n = 0; n < n_frames; ++n) {
        power[k * n_frames + n] =
            std::norm(apply_demixing(res.rows[k], frames[n].bin(k)));
      }
    }
    nmf_sweep(res.model, power, config.nmf_floor);
    for (std::size_t k = 0; k < bins; ++k) {
      std::fill(cov.begin(), cov.end(), cplx{});
      for (std::size_t n = 0; n < n_frames; ++n) {
        hermitian::rank1_update(cov, dim, 1.0,
                                inv_n / res.model.variance(k, n),
                                frames[n].bin(k));
      }
      solve_row(cov, dim, config.diag_load, res.rows[k].w_full);
    }
  }
  return res;
}

}  // namespace naec::ilrma
