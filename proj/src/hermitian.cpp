// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/hermitian.hpp"

#include <cmath>

namespace naec::hermitian {

void rank1_update(std::span<cplx> v, std::size_t dim, double alpha,
                  double gain, std::span<const cplx> y) {
  for (std::size_t r = 0; r < dim; ++r) {
    const cplx gy = gain * y[r];
    v[r * dim + r] = alpha * v[r * dim + r].real() + gain * std::norm(y[r]);
    for (std::size_t c = r + 1; c < dim; ++c) {
      const cplx upd = alpha * v[r * dim + c] + gy * std::conj(y[c]);
      v[r * dim + c] = upd;
      v[c * dim + r] = std::conj(upd);
    }
  }
}

double trace(std::span<const cplx> v, std::size_t dim) {
  double t = 0.0;
  for (std::size_t i = 0; i < dim; ++i) t += v[i * dim + i].real();
  return t;
}

bool solve_e1(std::span<const cplx> v, std::size_t dim, double load,
              std::span<cplx> x, std::span<cplx> scratch) {
  // Lower Cholesky factor in scratch: a = L Lᴴ.
  auto l = [&](std::size_t r, std::size_t c) -> cplx& {
    return scratch[r * dim + c];
  };
  for (std::size_t j = 0; j < dim; ++j) {
    double diag = v[j * dim + j].real() + load;
    for (std::size_t p = 0; p < j; ++p) diag -= std::norm(l(j, p));
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    const double inv = 1.0 / ljj;
    for (std::size_t i = j + 1; i < dim; ++i) {
      // Lower triangle of a is the conjugate of the stored upper triangle.
      cplx s = std::conj(v[j * dim + i]);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * std::conj(l(j, p));
      l(i, j) = s * inv;
    }
  }
  // Forward: L z = e₁.
  for (std::size_t i = 0; i < dim; ++i) {
    cplx s = i == 0 ? cplx{1.0} : cplx{};
    for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * x[p];
    x[i] = s / l(i, i).real();
  }
  // Backward: Lᴴ x = z.
  for (std::size_t i = dim; i-- > 0;) {
    cplx s = x[i];
    for (std::size_t p = i + 1; p < dim; ++p) s -= std::conj(l(p, i)) * x[p];
    x[i] = s / l(i, i).real();
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) {
      return false;
    }
  }
  return true;
}

}  // namespace naec::hermitian
