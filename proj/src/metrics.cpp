// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace naec::metrics {

namespace {

std::size_t block_samples(double block_len, int rate) {
  const auto n = static_cast<long long>(std::llround(block_len * rate));
  if (n < 1) throw ConfigError("metrics: block length below one sample");
  return static_cast<std::size_t>(n);
}

double ratio_db(double num, double den) {
  if (den < kSilenceFloor) return kCeilingDb;
  // Keeps silent-numerator blocks finite.
  return 10.0 * std::log10(std::max(num, 1e-30) / den);
}

}  // namespace

MetricCurve erle(const AudioSignal& y, const AudioSignal& e, double block_len) {
  if (y.size() != e.size()) throw ShapeError("erle: length mismatch");
  const std::size_t bs = block_samples(block_len, y.sample_rate);
  MetricCurve curve;
  curve.block_len = block_len;
  for (std::size_t b = 0; (b + 1) * bs <= y.size(); ++b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) {
      num += y.samples[i] * y.samples[i];
      den += e.samples[i] * e.samples[i];
    }
    curve.values.push_back(
        {static_cast<double>(b * bs) / y.sample_rate, ratio_db(num, den)});
  }
  return curve;
}

MetricCurve terle(const AudioSignal& d, const AudioSignal& e,
                  const AudioSignal& s, double block_len) {
  if (d.size() != e.size() || d.size() != s.size()) {
    throw ShapeError("terle: length mismatch");
  }
  const std::size_t bs = block_samples(block_len, d.sample_rate);
  MetricCurve curve;
  curve.block_len = block_len;
  for (std::size_t b = 0; (b + 1) * bs <= d.size(); ++b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) {
      const double res = e.samples[i] - s.samples[i];
      num += d.samples[i] * d.samples[i];
      den += res * res;
    }
    curve.values.push_back(
        {static_cast<double>(b * bs) / d.sample_rate, ratio_db(num, den)});
  }
  return curve;
}

double steady_state(const MetricCurve& curve, double tail_fraction) {
  if (curve.values.empty()) throw Error("steady_state: empty curve");
  const auto n = curve.values.size();
  auto tail = static_cast<std::size_t>(
      std::llround(tail_fraction * static_cast<double>(n)));
  tail = std::clamp<std::size_t>(tail, 1, n);
  double acc = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) acc += curve.values[i].db;
  return acc / static_cast<double>(tail);
}

double window_mean(const MetricCurve& curve, double t0, double t1) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& p : curve.values) {
    if (p.time_s >= t0 - 1e-9 && p.time_s < t1 - 1e-9) {
      acc += p.db;
      ++count;
    }
  }
  if (count == 0) throw Error("window_mean: no blocks in window");
  return acc / static_cast<double>(count);
}

void append(ResultTable& table, const MetricCurve& curve,
            const std::string& series) {
  for (const auto& p : curve.values) table.add(p.time_s, p.db, series);
}

}  // namespace naec::metrics
