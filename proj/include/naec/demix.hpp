// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "naec/ctf.hpp"
#include "naec/types.hpp"

namespace naec {

// Serial is the reference path; Parallel distributes bins over OpenMP
// threads. Both produce bit-identical results: cross-bin reductions are
// always summed serially in bin order.
enum class Exec { kSerial, kParallel };

// Per-bin weighted covariance V₁(k) and constrained demixing row w₁(k),
// stored contiguously by bin. Shared by the AuxIVA and ILRMA optimizers.
class DemixBank {
 public:
  DemixBank() = default;
  // V₁ starts at init_scale·I, rows start as passthrough (w_tail = 0).
  DemixBank(std::size_t bins, std::size_t dim, double init_scale);

  std::size_t bins() const { return bins_; }
  std::size_t dim() const { return dim_; }

  std::span<cplx> covariance(std::size_t k) {
    return {cov_.data() + k * dim_ * dim_, dim_ * dim_};
  }
  std::span<const cplx> covariance(std::size_t k) const {
    return {cov_.data() + k * dim_ * dim_, dim_ * dim_};
  }
  std::span<cplx> row(std::size_t k) {
    return {rows_.data() + k * dim_, dim_};
  }
  std::span<const cplx> row(std::size_t k) const {
    return {rows_.data() + k * dim_, dim_};
  }
  DemixingRow row_copy(std::size_t k) const;

  // Loading added at solve time: rel_load·trace(V)/dim.
  double loading(std::size_t k, double rel_load) const;

  // V ← alpha·V + (1 - alpha)·weight·y yᴴ.
  void update_covariance(std::size_t k, std::span<const cplx> y, double alpha,
                         double weight);

  // w ← (V + loading·I)⁻¹e₁, then scaled so the first entry is exactly 1.
  // On a failed solve the previous row is kept and false is returned.
  // `scratch` needs dim·(dim + 1) entries.
  bool update_row(std::size_t k, double rel_load, std::span<cplx> scratch);

  std::size_t skipped() const { return skipped_; }
  void add_skipped(std::size_t n) { skipped_ += n; }

 private:
  std::size_t bins_ = 0;
  std::size_t dim_ = 0;
  std::vector<cplx> cov_;
  std::vector<cplx> rows_;
  std::size_t skipped_ = 0;
};

// E(k) = row(k)ᴴ y(k) for every bin.
void demix_frame(const DemixBank& bank, const FrameObservations& obs,
                 std::span<cplx> out, Exec exec);

// For every bin: covariance update with weights[k], then row update. Returns
// the number of bins whose solve failed (also added to bank.skipped()).
std::size_t update_bins(DemixBank& bank, const FrameObservations& obs,
                        std::span<const double> weights, double alpha,
                        double rel_load, Exec exec);

// Σ_k |E(k)|², summed in bin order.
double frame_energy(std::span<const cplx> e);

// Solves the loaded system of an explicit covariance, used by the offline
// batch oracles. Returns false on failure and leaves `row` untouched.
bool solve_row(std::span<const cplx> cov, std::size_t dim, double rel_load,
               std::span<cplx> row);

}  // namespace naec
