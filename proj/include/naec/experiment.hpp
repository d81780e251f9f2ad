// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "naec/audio_io.hpp"
#include "naec/config.hpp"
#include "naec/pipeline.hpp"
#include "naec/sim.hpp"

// Config-driven experiments behind the `simulate` and `compare` commands.
namespace naec::experiment {

struct MetricsSpec {
  double block_s = 0.1;
  double tail_fraction = 0.3;
};

struct SweepSpec {
  std::string key;
  std::vector<std::string> values;
};

struct ExperimentSpec {
  KeyValueConfig config;
  std::uint64_t seed = 1;
  // (label, engine); a single unlabelled entry unless [compare] is present.
  std::vector<std::pair<std::string, EngineConfig>> engines;
  MetricsSpec metrics;
  std::optional<SweepSpec> sweep;
  bool write_wav = true;
};

// Every key the experiment schema understands (sweep axes must be one).
const std::vector<std::string>& known_keys();

sim::SceneSpec scene_from_config(const KeyValueConfig& cfg, std::uint64_t seed);

// Reads "engine.<key>", overridden by "engine.<label>.<key>" when a label is
// given.
EngineConfig engine_from_config(const KeyValueConfig& cfg,
                                const std::string& label = "");

// Validates the whole file (unknown keys are errors). The seed override wins
// over the file's `seed`.
ExperimentSpec load(const KeyValueConfig& cfg,
                    std::optional<std::uint64_t> seed_override,
                    bool compare_mode);

struct SteadyStateRow {
  std::string engine;
  std::string metric;
  std::string sweep_value;  // empty without a sweep
  double steady_db = 0.0;
};

struct RunOutput {
  std::string name;  // file stem for this grid point / engine
  AudioSignal enhanced;
};

struct ExperimentResult {
  ResultTable table;
  std::vector<SteadyStateRow> steady;
  std::vector<RunOutput> outputs;
  AudioSignal microphone;  // first grid point
  std::size_t frames = 0;
  std::size_t skipped_bins = 0;
  double audio_seconds = 0.0;
  double wall_seconds = 0.0;
};

ExperimentResult run(const ExperimentSpec& spec);

// Writes metrics.csv, summary.json and (optionally) WAVs into out_dir.
void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                   const std::filesystem::path& out_dir, bool compare_mode);

}  // namespace naec::experiment

namespace naec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

int cmd_process(const std::filesystem::path& far,
                const std::filesystem::path& mic,
                const std::filesystem::path& out,
                const std::optional<std::filesystem::path>& config,
                std::ostream& log, std::ostream& err);

int cmd_simulate(const std::filesystem::path& config,
                 const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed, std::ostream& log,
                 std::ostream& err);

int cmd_compare(const std::filesystem::path& config,
                const std::filesystem::path& out_dir,
                std::optional<std::uint64_t> seed, std::ostream& log,
                std::ostream& err);

}  // namespace naec::cli
