// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <string>
#include <vector>

#include "naec/types.hpp"

namespace naec {

// Odd power series basis φ_i(x) = x^(2i-1), i = 1..order.
struct ExpansionConfig {
  int order = 3;
};

void validate(const ExpansionConfig& config);

// Only "odd_power" is implemented; anything else is a ConfigError.
void require_basis(const std::string& name);

// Writes φ_i(x) for all P channels; out[i] must have x.size() samples.
void expand_into(std::span<const double> x, int order,
                 std::span<std::vector<double>> out);

std::vector<AudioSignal> expand(const AudioSignal& x,
                                const ExpansionConfig& config);

}  // namespace naec
