// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>

#include "naec/types.hpp"

// Small dense Hermitian kernels on row-major dim×dim blocks. These run once
// per bin per frame, so they avoid allocation.
namespace naec::hermitian {

// v ← alpha·v + gain·y yᴴ. Only the upper triangle is computed; the lower
// triangle is written as its conjugate mirror and the diagonal is kept real.
void rank1_update(std::span<cplx> v, std::size_t dim, double alpha,
                  double gain, std::span<const cplx> y);

double trace(std::span<const cplx> v, std::size_t dim);

// Solves (v + load·I) x = e₁ by Cholesky factorization. `scratch` needs
// dim·dim entries. Returns false when the loaded matrix is not numerically
// positive definite (non-positive pivot or non-finite value).
bool solve_e1(std::span<const cplx> v, std::size_t dim, double load,
              std::span<cplx> x, std::span<cplx> scratch);

}  // namespace naec::hermitian
