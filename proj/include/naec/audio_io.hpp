// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "naec/types.hpp"

namespace naec {

enum class WavEncoding { kPcm16, kFloat32 };

// Reads a mono RIFF/WAVE file (PCM 16-bit or IEEE float 32-bit) at 16 kHz.
// Samples are scaled to [-1, 1]. Throws IoError, FormatError or RateError.
AudioSignal read_wav(const std::filesystem::path& path);

// Writes a mono WAV file. Samples outside [-1, 1] are clipped with a warning
// on stderr; returns the number of clipped samples.
std::size_t write_wav(const AudioSignal& signal,
                      const std::filesystem::path& path,
                      WavEncoding encoding = WavEncoding::kFloat32);

struct ResultRow {
  double time_s = 0.0;
  double value_db = 0.0;
  std::string series;
};

// Rows of labelled (time, dB) points, e.g. ERLE curves.
struct ResultTable {
  std::vector<ResultRow> rows;

  void add(double time_s, double value_db, const std::string& series) {
    rows.push_back({time_s, value_db, series});
  }
};

// Shortest round-trip decimal rendering that always carries a decimal point
// ("20.0", "0.5", "1e-05"). Locale independent.
std::string format_decimal(double value);

// Writes `time_s,value_db,series`. Rows are grouped by series in order of the
// first appearance of each label, time ascending within a series.
void write_result_csv(const ResultTable& table,
                      const std::filesystem::path& path);

}  // namespace naec
