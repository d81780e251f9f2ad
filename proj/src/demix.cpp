// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/demix.hpp"

#include "naec/hermitian.hpp"

namespace naec {

DemixBank::DemixBank(std::size_t bins, std::size_t dim, double init_scale)
    : bins_(bins), dim_(dim), cov_(bins * dim * dim), rows_(bins * dim) {
  for (std::size_t k = 0; k < bins; ++k) {
    auto v = covariance(k);
    for (std::size_t i = 0; i < dim; ++i) v[i * dim + i] = init_scale;
    row(k)[0] = 1.0;
  }
}

DemixingRow DemixBank::row_copy(std::size_t k) const {
  DemixingRow r;
  const auto src = row(k);
  r.w_full.assign(src.begin(), src.end());
  return r;
}

double DemixBank::loading(std::size_t k, double rel_load) const {
  return rel_load * hermitian::trace(covariance(k), dim_) /
         static_cast<double>(dim_);
}

void DemixBank::update_covariance(std::size_t k, std::span<const cplx> y,
                                  double alpha, double weight) {
  if (y.size() != dim_) throw ShapeError("covariance update: dim mismatch");
  hermitian::rank1_update(covariance(k), dim_, alpha, (1.0 - alpha) * weight,
                          y);
}

bool solve_row(std::span<const cplx> cov, std::size_t dim, double rel_load,
               std::span<cplx> row) {
  std::vector<cplx> scratch(dim * (dim + 1));
  const double load =
      rel_load * hermitian::trace(cov, dim) / static_cast<double>(dim);
  std::span<cplx> x(scratch.data() + dim * dim, dim);
  if (!hermitian::solve_e1(cov, dim, load, x,
                           std::span(scratch).first(dim * dim))) {
    return false;
  }
  const cplx lead = x[0];
  row[0] = 1.0;
  for (std::size_t i = 1; i < dim; ++i) row[i] = x[i] / lead;
  return true;
}

bool DemixBank::update_row(std::size_t k, double rel_load,
                           std::span<cplx> scratch) {
  std::span<cplx> x = scratch.subspan(dim_ * dim_, dim_);
  if (!hermitian::solve_e1(covariance(k), dim_, loading(k, rel_load), x,
                           scratch.first(dim_ * dim_))) {
    return false;
  }
  const cplx lead = x[0];
  auto w = row(k);
  w[0] = 1.0;
  for (std::size_t i = 1; i < dim_; ++i) w[i] = x[i] / lead;
  return true;
}

void demix_frame(const DemixBank& bank, const FrameObservations& obs,
                 std::span<cplx> out, Exec exec) {
  if (obs.bins != bank.bins() || obs.dim != bank.dim() ||
      out.size() != bank.bins()) {
    throw ShapeError("demix_frame: shape mismatch");
  }
  const auto bins = static_cast<std::ptrdiff_t>(bank.bins());
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < bins; ++k) {
      out[k] = apply_demixing(bank.row(k), obs.bin(k));
    }
  } else {
    for (std::ptrdiff_t k = 0; k < bins; ++k) {
      out[k] = apply_demixing(bank.row(k), obs.bin(k));
    }
  }
}

std::size_t update_bins(DemixBank& bank, const FrameObservations& obs,
                        std::span<const double> weights, double alpha,
                        double rel_load, Exec exec) {
  if (obs.bins != bank.bins() || obs.dim != bank.dim() ||
      weights.size() != bank.bins()) {
    throw ShapeError("update_bins: shape mismatch");
  }
  const std::size_t dim = bank.dim();
  const auto bins = static_cast<std::ptrdiff_t>(bank.bins());
  std::size_t failed = 0;
  if (exec == Exec::kParallel) {
#pragma omp parallel reduction(+ : failed)
    {
      std::vector<cplx> scratch(dim * (dim + 1));
#pragma omp for schedule(static)
      for (std::ptrdiff_t k = 0; k < bins; ++k) {
        bank.update_covariance(k, obs.bin(k), alpha, weights[k]);
        if (!bank.update_row(k, rel_load, scratch)) ++failed;
      }
    }
  } else {
    std::vector<cplx> scratch(dim * (dim + 1));
    for (std::ptrdiff_t k = 0; k < bins; ++k) {
      bank.update_covariance(k, obs.bin(k), alpha, weights[k]);
      if (!bank.update_row(k, rel_load, scratch)) ++failed;
    }
  }
  bank.add_skipped(failed);
  return failed;
}

double frame_energy(std::span<const cplx> e) {
  double acc = 0.0;
  for (const cplx& v : e) acc += std::norm(v);
  return acc;
}

}  // namespace naec
