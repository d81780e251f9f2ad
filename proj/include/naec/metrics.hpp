// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <string>
#include <vector>

#include "naec/audio_io.hpp"
#include "naec/types.hpp"

namespace naec::metrics {

inline constexpr double kCeilingDb = 80.0;
inline constexpr double kSilenceFloor = 1e-12;

struct Point {
  double time_s;
  double db;
};

// Blockwise curve over non-overlapping blocks; time_s is the block start.
struct MetricCurve {
  double block_len = 0.1;
  std::vector<Point> values;
};

// 10·log10(Σy² / Σe²) per block. Blocks whose Σe² is below kSilenceFloor
// report kCeilingDb. Trailing partial blocks are dropped.
MetricCurve erle(const AudioSignal& y, const AudioSignal& e,
                 double block_len = 0.1);

// 10·log10(Σd² / Σ(e - s)²) per block, same ceiling rule.
MetricCurve terle(const AudioSignal& d, const AudioSignal& e,
                  const AudioSignal& s, double block_len = 0.1);

// Mean of the last round(tail_fraction·n) blocks (at least one).
double steady_state(const MetricCurve& curve, double tail_fraction = 0.3);

// Mean over a time window [t0, t1).
double window_mean(const MetricCurve& curve, double t0, double t1);

void append(ResultTable& table, const MetricCurve& curve,
            const std::string& series);

}  // namespace naec::metrics
