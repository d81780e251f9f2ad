// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "naec/ctf.hpp"
#include "naec/demix.hpp"

// Online AuxIVA-style semi-blind separation: only the first demixing row
// adapts, weighted by the frame-level contrast Φ(r) = r^(β-2).
namespace naec::auxiva {

struct Config {
  double alpha = 0.99;      // forgetting factor
  double beta = 0.4;        // shape parameter of Φ
  double diag_load = 1e-6;  // relative to trace(V)/dim, solve time only
  double r_floor = 1e-8;
  double init_scale = 1e-3;  // V₁ at frame 0
};

void validate(const Config& config);

struct State {
  Config config;
  DemixBank bank;
  std::size_t frame_count = 0;
  double last_r1 = 0.0;
  double last_phi = 0.0;

  State() = default;
  State(std::size_t bins, std::size_t dim, const Config& cfg);
};

// sqrt(Σ_k |w₁ᴴ y|²) over the current rows, floored at r_floor.
double compute_r1(const State& state, const FrameObservations& obs);
double compute_r1(std::span<const cplx> e, const Config& config);

// Φ(r) = r^(β-2).
double weight(double r1, const Config& config);

void update_covariance(State& state, std::size_t k, std::span<const cplx> y,
                       double phi);
bool update_row(State& state, std::size_t k);

// One online step: outputs with the previous rows, r₁ and Φ, covariance and
// row update for every bin, then the outputs again with the new rows.
void process_frame(State& state, const FrameObservations& obs,
                   std::span<cplx> out, Exec exec = Exec::kParallel);

// Batch iteration over all frames with the first-row constraint; starts from
// passthrough rows. Serves as the fixed-point oracle for the online mode.
std::vector<DemixingRow> offline_batch(
    std::span<const FrameObservations> frames, int iterations,
    const Config& config);

}  // namespace naec::auxiva
