// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

namespace naec {

void require_pipeline_signal(const AudioSignal& signal,
                             const std::string& what) {
  if (signal.sample_rate != kSampleRate) {
    throw RateError(what + ": sample rate " +
                    std::to_string(signal.sample_rate) +
                    " Hz, expected 16000 Hz");
  }
  for (double v : signal.samples) {
    if (!std::isfinite(v)) throw FormatError(what + ": non-finite sample");
  }
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T load_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void put_le(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

AudioSignal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(name + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const auto len = load_le<std::uint32_t>(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(len, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw FormatError(name + ": truncated fmt chunk");
      format = load_le<std::uint16_t>(chunk + 8);
      channels = load_le<std::uint16_t>(chunk + 10);
      rate = load_le<std::uint32_t>(chunk + 12);
      bits = load_le<std::uint16_t>(chunk + 22);
      if (format == kFormatExtensible) {
        if (avail < 26) throw FormatError(name + ": truncated fmt chunk");
        format = load_le<std::uint16_t>(chunk + 32);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = avail;
    }
    pos = body + len + (len & 1u);
  }
  if (!have_fmt || data == nullptr) {
    throw FormatError(name + ": missing fmt or data chunk");
  }
  if (channels != 1) {
    throw FormatError(name + ": " + std::to_string(channels) +
                      " channels, only mono is supported");
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw FormatError(name + ": unsupported sample format (need PCM16 or "
                      "float32)");
  }
  if (rate != static_cast<std::uint32_t>(kSampleRate)) {
    throw RateError(name + ": sample rate " + std::to_string(rate) +
                    " Hz, expected 16000 Hz");
  }

  AudioSignal out;
  if (pcm16) {
    out.samples.resize(data_len / 2);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      out.samples[i] = load_le<std::int16_t>(data + 2 * i) / 32768.0;
    }
  } else {
    out.samples.resize(data_len / 4);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      out.samples[i] = load_le<float>(data + 4 * i);
    }
  }
  require_pipeline_signal(out, name);
  return out;
}

std::size_t write_wav(const AudioSignal& signal,
                      const std::filesystem::path& path,
                      WavEncoding encoding) {
  std::size_t clipped = 0;
  std::vector<double> samples = signal.samples;
  for (double& v : samples) {
    if (!std::isfinite(v)) {
      throw FormatError(path.string() + ": refusing to write non-finite sample");
    }
    if (v > 1.0 || v < -1.0) {
      v = std::clamp(v, -1.0, 1.0);
      ++clipped;
    }
  }
  if (clipped > 0) {
    std::cerr << "warning: " << path.string() << ": clipped " << clipped
              << " samples to [-1, 1]\n";
  }

  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint16_t block = bits / 8;
  const auto data_len = static_cast<std::uint32_t>(samples.size() * block);

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os.write("RIFF", 4);
  put_le<std::uint32_t>(os, 36 + data_len);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put_le<std::uint32_t>(os, 16);
  put_le<std::uint16_t>(os, pcm ? kFormatPcm : kFormatFloat);
  put_le<std::uint16_t>(os, 1);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(signal.sample_rate));
  put_le<std::uint32_t>(
      os, static_cast<std::uint32_t>(signal.sample_rate) * block);
  put_le<std::uint16_t>(os, block);
  put_le<std::uint16_t>(os, bits);
  os.write("data", 4);
  put_le<std::uint32_t>(os, data_len);
  for (double v : samples) {
    if (pcm) {
      const double scaled = std::round(v * 32768.0);
      put_le<std::int16_t>(
          os, static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0)));
    } else {
      put_le<float>(os, static_cast<float>(v));
    }
  }
  if (!os) throw IoError("write failed: " + path.string());
  return clipped;
}

std::string format_decimal(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, res.ptr);
  if (std::isfinite(value) &&
      s.find_first_of(".e") == std::string::npos) {
    s += ".0";
  }
  return s;
}

void write_result_csv(const ResultTable& table,
                      const std::filesystem::path& path) {
  std::map<std::string, std::size_t> order;
  for (const auto& row : table.rows) order.emplace(row.series, order.size());
  std::vector<ResultRow> rows = table.rows;
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ResultRow& a, const ResultRow& b) {
                     const auto oa = order.at(a.series);
                     const auto ob = order.at(b.series);
                     if (oa != ob) return oa < ob;
                     return a.time_s < b.time_s;
                   });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].series == rows[i - 1].series &&
        !(rows[i].time_s > rows[i - 1].time_s)) {
      throw Error("result table: time_s not strictly increasing in series '" +
                  rows[i].series + "'");
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << "time_s,value_db,series\n";
  for (const auto& row : rows) {
    os << format_decimal(row.time_s) << ',' << format_decimal(row.value_db)
       << ',' << row.series << '\n';
  }
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace naec
