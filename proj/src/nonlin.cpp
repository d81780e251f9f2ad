// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/nonlin.hpp"

namespace naec {

void validate(const ExpansionConfig& config) {
  if (config.order < 1) throw ConfigError("expansion order P must be >= 1");
}

void require_basis(const std::string& name) {
  if (name != "odd_power") {
    throw ConfigError("unsupported nonlinear basis '" + name +
                      "' (only odd_power)");
  }
}

void expand_into(std::span<const double> x, int order,
                 std::span<std::vector<double>> out) {
  if (out.size() != static_cast<std::size_t>(order)) {
    throw ShapeError("expand: channel count mismatch");
  }
  for (auto& ch : out) {
    if (ch.size() != x.size()) throw ShapeError("expand: length mismatch");
  }
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double sq = x[t] * x[t];
    double p = x[t];
    out[0][t] = p;
    for (int i = 1; i < order; ++i) {
      p *= sq;
      out[i][t] = p;
    }
  }
}

std::vector<AudioSignal> expand(const AudioSignal& x,
                                const ExpansionConfig& config) {
  validate(config);
  std::vector<std::vector<double>> bufs(config.order,
                                        std::vector<double>(x.size()));
  expand_into(x.samples, config.order, bufs);
  std::vector<AudioSignal> out;
  out.reserve(bufs.size());
  for (auto& b : bufs) out.emplace_back(std::move(b), x.sample_rate);
  return out;
}

}  // namespace naec
