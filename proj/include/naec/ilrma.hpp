// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "naec/ctf.hpp"
#include "naec/demix.hpp"

// Online ILRMA-style semi-blind separation: an NMF variance model of the
// near-end source drives per-bin covariance weights 1/r₁(k).
namespace naec::ilrma {

struct Config {
  double alpha = 0.99;
  int bases_B = 10;
  double diag_load = 1e-6;  // relative to trace(V)/dim, solve time only
  double nmf_floor = 1e-12;
  double init_scale = 1e-3;
};

void validate(const Config& config);

// Bases t (K×B, row-major by bin), current-frame activations v (B) and the
// variance r = t·v (K).
struct NmfSourceModel {
  std::size_t bins = 0;
  std::size_t bases = 0;
  double floor = 1e-12;
  std::vector<double> t;
  std::vector<double> v;
  std::vector<double> r;

  NmfSourceModel() = default;
  // t = 1, v = 1/B.
  NmfSourceModel(std::size_t k, std::size_t b, double nmf_floor);

  double& basis(std::size_t k, std::size_t b) { return t[k * bases + b]; }
  double basis(std::size_t k, std::size_t b) const { return t[k * bases + b]; }
};

// r(k) = max(Σ_b t(k,b) v(b), floor).
void recompute_variance(NmfSourceModel& model);

// t(k,b) ← t(k,b)·sqrt(|e(k)|² v(b) r⁻²(k) / (v(b) r⁻¹(k))), floored; r
// refreshed afterwards.
void update_bases(NmfSourceModel& model, std::span<const cplx> e1);

// v(b) ← v(b)·sqrt(Σ_k |e|² t r⁻² / Σ_k t r⁻¹), floored; r refreshed.
void update_activations(NmfSourceModel& model, std::span<const cplx> e1);

struct State {
  Config config;
  DemixBank bank;
  NmfSourceModel model;
  std::size_t frame_count = 0;

  State() = default;
  State(std::size_t bins, std::size_t dim, const Config& cfg);
};

void update_covariance(State& state, std::size_t k, std::span<const cplx> y);
bool update_row(State& state, std::size_t k);

// Outputs with previous rows, NMF bases then activations update, per-bin
// covariance and row updates, outputs again with the new rows.
void process_frame(State& state, const FrameObservations& obs,
                   std::span<cplx> out, Exec exec = Exec::kParallel);

// Batch NMF model over N frames: t (K×B), v (B×N, row-major by basis).
struct BatchModel {
  std::size_t bins = 0;
  std::size_t bases = 0;
  std::size_t frames = 0;
  std::vector<double> t;
  std::vector<double> v;
  std::vector<double> r;  // K×N, r(k,n) at k·N + n

  double& basis(std::size_t k, std::size_t b) { return t[k * bases + b]; }
  double& activation(std::size_t b, std::size_t n) { return v[b * frames + n]; }
  double& variance(std::size_t k, std::size_t n) { return r[k * frames + n]; }
};

// Deterministic init (t = 1, v = 1/B) when seed == 0, otherwise uniform
// random entries in [0.1, 1.1) from the seed.
BatchModel make_batch_model(std::size_t bins, std::size_t bases,
                            std::size_t frames, std::uint64_t seed);

void recompute_variance(BatchModel& model, double floor);

// One sweep of the batch bases update followed by the batch activation
// update against a K×N power matrix (|e|², row-major by bin).
void nmf_sweep(BatchModel& model, std::span<const double> power, double floor);

// Σ_{k,n} p/r - log(p/r) - 1.
double is_divergence(const BatchModel& model, std::span<const double> power);

struct OfflineResult {
  std::vector<DemixingRow> rows;
  BatchModel model;
};

// Alternates the batch NMF sweep and the first-row demixing update.
OfflineResult offline_batch(std::span<const FrameObservations> frames,
                            int iterations, const Config& config,
                            std::uint64_t seed = 0);

}  // namespace naec::ilrma
