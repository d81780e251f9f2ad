// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "doctest.h"
#include "naec/ctf.hpp"
#include "test_util.hpp"

using namespace naec;
using test::MatC;
using test::VecC;

namespace {

Spectrogram random_spec(std::size_t bins, std::size_t frames, std::mt19937_64& rng) {
  StftConfig cfg{2 * (bins - 1), (bins - 1) / 2};
  Spectrogram s(bins, frames, cfg);
  s.data = test::crandn(bins * frames, rng);
  return s;
}

// Dense W with first row w_fullᴴ and identity below.
MatC dense_w(const DemixingRow& row) {
  const auto d = row.w_full.size();
  MatC w = MatC::Identity(d, d);
  for (std::size_t j = 0; j < d; ++j) w(0, j) = std::conj(row.w_full[j]);
  return w;
}

DemixingRow random_row(std::size_t dim, std::mt19937_64& rng) {
  DemixingRow row(dim);
  auto tail = test::crandn(dim - 1, rng);
  std::copy(tail.begin(), tail.end(), row.w_tail().begin());
  return row;
}

}  // namespace

TEST_CASE("observation layout: basis-major, lag ascending, zero history") {
  std::mt19937_64 rng(1);
  const std::size_t K = 9, N = 6;
  Spectrogram mic = random_spec(K, N, rng);
  std::vector<Spectrogram> refs;
  for (int i = 0; i < 3; ++i) refs.push_back(random_spec(K, N, rng));
  CtfConfig cfg{3, 3};
  CHECK(cfg.dim() == 10);

  const auto y0 = build_observation(mic, refs, 4, 0, cfg);
  REQUIRE(y0.size() == 10);
  CHECK(y0[0] == mic.at(4, 0));
  for (int i = 0; i < 3; ++i) {
    CHECK(y0[1 + 3 * i] == refs[i].at(4, 0));
    CHECK(y0[2 + 3 * i] == cplx{});
    CHECK(y0[3 + 3 * i] == cplx{});
  }
  const auto y = build_observation(mic, refs, 7, 5, cfg);
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) CHECK(y[1 + 3 * i + l] == refs[i].at(7, 5 - l));

  const auto mtf = build_observation(mic, std::span(refs).first(1), 2, 0, CtfConfig{1, 1});
  CHECK(mtf == ObservationVector{mic.at(2, 0), refs[0].at(2, 0)});
}

TEST_CASE("build_frame and the streaming history agree with build_observation") {
  std::mt19937_64 rng(2);
  const std::size_t K = 5, N = 7;
  CtfConfig cfg{3, 2};
  Spectrogram mic = random_spec(K, N, rng);
  std::vector<Spectrogram> refs{random_spec(K, N, rng), random_spec(K, N, rng)};
  ReferenceHistory hist(K, cfg);
  FrameObservations a(K, cfg.dim()), b(K, cfg.dim());
  for (std::size_t n = 0; n < N; ++n) {
    build_frame(mic, refs, n, cfg, a);
    std::vector<std::vector<cplx>> cur;
    for (auto& r : refs) cur.emplace_back(r.frame(n).begin(), r.frame(n).end());
    hist.push(cur);
    hist.assemble(mic.frame(n), b);
    CHECK(a.data == b.data);
    for (std::size_t k = 0; k < K; ++k) {
      const auto y = build_observation(mic, refs, k, n, cfg);
      CHECK(std::equal(y.begin(), y.end(), a.bin(k).begin()));
    }
  }
}

TEST_CASE("shape errors") {
  std::mt19937_64 rng(3);
  Spectrogram mic = random_spec(9, 4, rng);
  std::vector<Spectrogram> refs{random_spec(9, 4, rng), random_spec(5, 4, rng)};
  CHECK_THROWS_AS(build_observation(mic, refs, 0, 0, CtfConfig{2, 2}), ShapeError);
  CHECK_THROWS_AS(build_observation(mic, std::span(refs).first(1), 0, 0, CtfConfig{2, 2}),
                  ShapeError);
  CHECK_THROWS_AS(build_observation(mic, std::span(refs).first(1), 0, 9, CtfConfig{2, 1}),
                  ShapeError);
  CHECK_THROWS_AS(apply_demixing(DemixingRow(3), ObservationVector(4)), ShapeError);
  CHECK_THROWS_AS(validate(CtfConfig{0, 3}), ConfigError);
}

TEST_CASE("demixing: passthrough, exact cancellation, dense oracle") {
  std::mt19937_64 rng(4);
  auto y = test::crandn(10, rng);
  CHECK(apply_demixing(DemixingRow(10), y) == y[0]);

  DemixingRow row(2);
  row.w_tail()[0] = -0.5;
  CHECK(apply_demixing(row, ObservationVector{1.0, 2.0}) == cplx{});

  for (int trial = 0; trial < 20; ++trial) {
    const auto r = random_row(10, rng);
    const auto yy = test::crandn(10, rng);
    const VecC dense = dense_w(r) * test::to_eigen_vec(yy.data(), 10);
    const auto e = demix_full(r, yy);
    CHECK(std::abs(apply_demixing(r, yy) - dense(0)) < 1e-12);
    for (std::size_t d = 1; d < 10; ++d) CHECK(e[d] == yy[d]);
    // Remixing with the negated tail recovers Y.
    DemixingRow inv = r;
    for (auto& w : inv.w_tail()) w = -w;
    std::vector<cplx> ey = yy;
    ey[0] = e[0];
    CHECK(std::abs(apply_demixing(inv, ey) - yy[0]) < 1e-13);
  }
}

TEST_CASE("single-tap canceller equivalence for P = L = 1") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = test::crandn(3, rng);
    DemixingRow row(2);
    row.w_tail()[0] = v[0];
    const cplx Y = v[1], X = v[2];
    const cplx plain = Y - (-std::conj(v[0])) * X;  // estimate H = -conj(w)
    CHECK(std::abs(apply_demixing(row, ObservationVector{Y, X}) - plain) < 1e-14);
  }
}

TEST_CASE("first-column identity (W V)^-1 e1 == V^-1 e1") {
  std::mt19937_64 rng(6);
  for (std::size_t dim : {2u, 4u, 10u}) {
    for (int trial = 0; trial < 30; ++trial) {
      const MatC v = test::random_hpd(dim, rng);
      const MatC w = dense_w(random_row(dim, rng));
      const VecC e1 = VecC::Unit(dim, 0);
      const VecC lhs = (w * v).partialPivLu().solve(e1);
      const VecC rhs = v.partialPivLu().solve(e1);
      CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
    }
  }
}
