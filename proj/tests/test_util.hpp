// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "naec/types.hpp"

namespace naec::test {

// Scratch directory under the build tree (or the system temp dir).
inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* env = std::getenv("NAEC_TEST_TMP");
  std::filesystem::path base =
      env ? std::filesystem::path(env) : std::filesystem::temp_directory_path() / "naec_tests";
  auto dir = base / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<double> randn(std::size_t n, std::uint64_t seed,
                                 double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> out(n);
  for (auto& v : out) v = g(rng);
  return out;
}

inline std::vector<cplx> crandn(std::size_t n, std::mt19937_64& rng,
                                double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<cplx> out(n);
  for (auto& v : out) v = {g(rng), g(rng)};
  return out;
}

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

// Row-major dim×dim block to an Eigen matrix.
inline MatC to_eigen(const cplx* v, std::size_t dim) {
  MatC m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = v[i * dim + j];
  return m;
}

inline VecC to_eigen_vec(const cplx* v, std::size_t n) {
  VecC out(n);
  for (std::size_t i = 0; i < n; ++i) out(i) = v[i];
  return out;
}

// Random Hermitian positive definite matrix, condition kept moderate.
inline MatC random_hpd(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatC a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = {g(rng), g(rng)};
  return a * a.adjoint() + static_cast<double>(dim) * MatC::Identity(dim, dim);
}

}  // namespace naec::test
