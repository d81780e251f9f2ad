// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "naec/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "json.hpp"
#include "naec/metrics.hpp"
#include "naec/nonlin.hpp"
#include "naec/signals.hpp"

namespace naec::experiment {

namespace {

constexpr const char* kEngineKeys[] = {
    "algorithm", "order_P",   "frames_L",  "basis",   "alpha",
    "beta",      "bases_B",   "diag_load", "r_floor", "nmf_floor",
    "window_len", "hop",      "parallel",
};

sim::Vec3 vec3(const KeyValueConfig& cfg, const std::string& key,
               const sim::Vec3& fallback) {
  const auto v = cfg.get_doubles(key, {fallback.begin(), fallback.end()});
  if (v.size() != 3) throw ConfigError(key + ": expected three values");
  return {v[0], v[1], v[2]};
}

AudioSignal load_source(const std::string& spec, double seconds,
                        std::uint64_t seed) {
  const std::string prefix = "synth:";
  if (spec.rfind(prefix, 0) == 0) {
    return signals::by_name(spec.substr(prefix.size()), seconds, seed);
  }
  return read_wav(spec);
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = {
        "seed",
        "scene.duration_s",
        "scene.far_end",
        "scene.near_end",
        "scene.ser_db",
        "scene.snr_db",
        "scene.snr_reference",
        "scene.room.dimensions",
        "scene.room.source",
        "scene.room.mic",
        "scene.room.t60",
        "scene.room.rir_length",
        "scene.room.reflection",
        "scene.room.reflection_model",
        "scene.room.highpass",
        "scene.nonlinearity.kind",
        "scene.nonlinearity.clip_ratio",
        "scene.nonlinearity.coeffs",
        "metrics.block_s",
        "metrics.tail_fraction",
        "sweep.key",
        "sweep.values",
        "compare.configs",
        "output.write_wav",
    };
    for (const char* e : kEngineKeys) k.push_back(std::string("engine.") + e);
    return k;
  }();
  return keys;
}

sim::SceneSpec scene_from_config(const KeyValueConfig& cfg,
                                 std::uint64_t seed) {
  sim::SceneSpec spec;
  spec.seed = seed;
  const double seconds = cfg.get_double("scene.duration_s", 10.0);
  spec.far_end = load_source(
      cfg.get_string("scene.far_end", "synth:speech_male"), seconds, seed);
  const std::string near = cfg.get_string("scene.near_end", "none");
  if (near != "none") spec.near_end = load_source(near, seconds, seed + 101);
  spec.ser_db = cfg.get_double("scene.ser_db", 0.0);
  spec.snr_db = cfg.get_double("scene.snr_db", 60.0);
  const std::string ref = cfg.get_string("scene.snr_reference", "mixture");
  if (ref == "mixture") {
    spec.snr_reference = sim::SnrReference::kMixture;
  } else if (ref == "echo") {
    spec.snr_reference = sim::SnrReference::kEcho;
  } else {
    throw ConfigError("scene.snr_reference: expected mixture or echo");
  }

  auto& room = spec.room;
  room.dimensions = vec3(cfg, "scene.room.dimensions", room.dimensions);
  room.source = vec3(cfg, "scene.room.source", room.source);
  room.mic = vec3(cfg, "scene.room.mic", room.mic);
  room.t60 = cfg.get_double("scene.room.t60", room.t60);
  const std::string len = cfg.get_string("scene.room.rir_length", "auto");
  if (len != "auto") {
    const long long n = cfg.get_int("scene.room.rir_length", 0);
    if (n < 1) throw ConfigError("scene.room.rir_length must be positive");
    room.rir_length = static_cast<std::size_t>(n);
  }
  const std::string model = cfg.get_string("scene.room.reflection_model", "calibrated");
  if (model == "calibrated") {
    room.model = sim::ReflectionModel::kCalibrated;
  } else if (model == "sabine") {
    room.model = sim::ReflectionModel::kSabine;
  } else {
    throw ConfigError("scene.room.reflection_model: expected calibrated or sabine");
  }
  room.highpass = cfg.get_bool("scene.room.highpass", true);
  if (cfg.has("scene.room.reflection")) {
    room.reflection = cfg.get_double("scene.room.reflection", 0.0);
  }
  sim::validate(room);

  auto& nl = spec.nonlinearity;
  const std::string kind = cfg.get_string("scene.nonlinearity.kind", "hard_clip");
  if (kind == "hard_clip") {
    nl.kind = sim::NonlinearityKind::kHardClip;
  } else if (kind == "power_series") {
    nl.kind = sim::NonlinearityKind::kPowerSeries;
  } else if (kind == "none") {
    nl.kind = sim::NonlinearityKind::kNone;
  } else {
    throw ConfigError("scene.nonlinearity.kind: unknown '" + kind + "'");
  }
  nl.clip_ratio = cfg.get_double("scene.nonlinearity.clip_ratio", 0.2);
  nl.coeffs = cfg.get_doubles("scene.nonlinearity.coeffs", {});
  sim::validate(nl);
  return spec;
}

EngineConfig engine_from_config(const KeyValueConfig& cfg,
                                const std::string& label) {
  auto key = [&](const std::string& name) {
    const std::string base = "engine." + name;
    cfg.find(base);  // mark as read even when overridden
    if (!label.empty()) {
      const std::string over = "engine." + label + "." + name;
      if (cfg.has(over)) return over;
    }
    return base;
  };
  EngineConfig e;
  e.algorithm = parse_algorithm(cfg.get_string(key("algorithm"), "auxiva"));
  require_basis(cfg.get_string(key("basis"), "odd_power"));
  e.with_order(static_cast<int>(cfg.get_int(key("order_P"), 3)));
  e.with_frames(static_cast<int>(cfg.get_int(key("frames_L"), 3)));
  e.auxiva.alpha = cfg.get_double(key("alpha"), 0.99);
  e.ilrma.alpha = e.auxiva.alpha;
  e.auxiva.beta = cfg.get_double(key("beta"), 0.4);
  e.ilrma.bases_B = static_cast<int>(cfg.get_int(key("bases_B"), 10));
  e.auxiva.diag_load = cfg.get_double(key("diag_load"), 1e-6);
  e.ilrma.diag_load = e.auxiva.diag_load;
  e.auxiva.r_floor = cfg.get_double(key("r_floor"), 1e-8);
  e.ilrma.nmf_floor = cfg.get_double(key("nmf_floor"), 1e-12);
  e.stft.window_len = static_cast<std::size_t>(cfg.get_int(key("window_len"), 1024));
  e.stft.hop = static_cast<std::size_t>(cfg.get_int(key("hop"), 256));
  e.exec = cfg.get_bool(key("parallel"), true) ? Exec::kParallel : Exec::kSerial;
  validate(e);
  return e;
}

namespace {

// Scene preconditions are part of the config contract: report them as such.
void check_scene(const KeyValueConfig& cfg, std::uint64_t seed,
                 const std::string& where) {
  try {
    scene_from_config(cfg, seed);
  } catch (const GeometryError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

ExperimentSpec load(const KeyValueConfig& cfg,
                    std::optional<std::uint64_t> seed_override,
                    bool compare_mode) {
  ExperimentSpec spec;
  spec.config = cfg;
  const long long file_seed = cfg.get_int("seed", 1);
  spec.seed = seed_override ? *seed_override : static_cast<std::uint64_t>(file_seed);
  // Validate the scene up front; grid points rebuild it.
  check_scene(cfg, spec.seed, "scene");

  if (compare_mode) {
    const auto labels = cfg.get_strings("compare.configs");
    if (labels.size() < 2) {
      throw ConfigError("compare.configs must list at least two engine labels");
    }
    for (const auto& label : labels) {
      if (std::count(labels.begin(), labels.end(), label) > 1) {
        throw ConfigError("compare.configs: duplicate label " + label);
      }
      spec.engines.emplace_back(label, engine_from_config(cfg, label));
    }
  } else {
    if (cfg.has("compare.configs")) {
      throw ConfigError("compare.configs is only valid for the compare command");
    }
    spec.engines.emplace_back("", engine_from_config(cfg));
  }

  spec.metrics.block_s = cfg.get_double("metrics.block_s", 0.1);
  spec.metrics.tail_fraction = cfg.get_double("metrics.tail_fraction", 0.3);
  if (!(spec.metrics.tail_fraction > 0.0 && spec.metrics.tail_fraction <= 1.0)) {
    throw ConfigError("metrics.tail_fraction must lie in (0, 1]");
  }
  if (cfg.has("sweep.key")) {
    SweepSpec sweep;
    sweep.key = cfg.get_string("sweep.key", "");
    sweep.values = cfg.get_strings("sweep.values");
    const auto& known = known_keys();
    const bool engine_override =
        sweep.key.rfind("engine.", 0) == 0 &&
        std::any_of(std::begin(kEngineKeys), std::end(kEngineKeys),
                    [&](const char* k) {
                      const std::string s = k;
                      return sweep.key.size() > s.size() &&
                             sweep.key.compare(sweep.key.size() - s.size(),
                                               s.size(), s) == 0;
                    });
    if ((std::find(known.begin(), known.end(), sweep.key) == known.end() &&
         !engine_override) ||
        sweep.key.rfind("sweep.", 0) == 0 || sweep.key == "seed") {
      throw ConfigError("sweep.key: '" + sweep.key + "' is not a sweepable key");
    }
    if (sweep.values.empty()) throw ConfigError("sweep.values is empty");
    // Check every grid point builds.
    for (const auto& v : sweep.values) {
      KeyValueConfig point = cfg;
      point.set(sweep.key, v);
      check_scene(point, spec.seed, sweep.key + "=" + v);
      for (const auto& [label, _] : spec.engines) engine_from_config(point, label);
    }
    spec.sweep = sweep;
  } else if (cfg.has("sweep.values")) {
    throw ConfigError("sweep.values given without sweep.key");
  }
  spec.write_wav = cfg.get_bool("output.write_wav", true);
  cfg.require_all_used();
  return spec;
}

ExperimentResult run(const ExperimentSpec& spec) {
  ExperimentResult result;
  std::vector<std::string> points{""};
  if (spec.sweep) points = spec.sweep->values;

  for (std::size_t g = 0; g < points.size(); ++g) {
    KeyValueConfig cfg = spec.config;
    if (spec.sweep) cfg.set(spec.sweep->key, points[g]);
    const sim::SceneSpec scene_spec = scene_from_config(cfg, spec.seed);
    const sim::Scene scene = sim::synthesize_scene(scene_spec);
    if (g == 0) result.microphone = scene.microphone;
    const bool double_talk = scene_spec.near_end.has_value();

    for (const auto& [label, _] : spec.engines) {
      const EngineConfig engine = engine_from_config(cfg, label);
      RunStats stats;
      AudioSignal e = naec::run(scene_spec.far_end, scene.microphone, engine, &stats);
      result.frames += stats.frames;
      result.skipped_bins += stats.skipped_bins;
      result.audio_seconds += stats.audio_seconds;
      result.wall_seconds += stats.wall_seconds;

      std::string suffix = label.empty() ? "" : ":" + label;
      if (spec.sweep) suffix += "@" + spec.sweep->key + "=" + points[g];
      const auto erle = metrics::erle(scene.microphone, e, spec.metrics.block_s);
      metrics::append(result.table, erle, "erle" + suffix);
      result.steady.push_back({label, "erle", points[g],
                               metrics::steady_state(erle, spec.metrics.tail_fraction)});
      if (double_talk) {
        const auto terle = metrics::terle(scene.echo, e, scene.near_end,
                                          spec.metrics.block_s);
        metrics::append(result.table, terle, "terle" + suffix);
        result.steady.push_back(
            {label, "terle", points[g],
             metrics::steady_state(terle, spec.metrics.tail_fraction)});
      }
      std::string name = "enhanced";
      if (!label.empty()) name += "_" + label;
      if (spec.sweep) name += "_" + std::to_string(g);
      result.outputs.push_back({name, std::move(e)});
    }
  }
  return result;
}

void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                   const std::filesystem::path& out_dir, bool compare_mode) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_result_csv(result.table, out_dir / "metrics.csv");

  nlohmann::ordered_json summary;
  summary["command"] = compare_mode ? "compare" : "simulate";
  summary["seed"] = spec.seed;
  summary["block_s"] = spec.metrics.block_s;
  summary["tail_fraction"] = spec.metrics.tail_fraction;
  if (spec.sweep) summary["sweep_key"] = spec.sweep->key;
  summary["frames"] = result.frames;
  summary["skipped_bins"] = result.skipped_bins;
  auto& rows = summary["steady_state"] = nlohmann::ordered_json::array();
  for (const auto& r : result.steady) {
    nlohmann::ordered_json row;
    if (!r.engine.empty()) row["engine"] = r.engine;
    row["metric"] = r.metric;
    if (spec.sweep) row["sweep_value"] = r.sweep_value;
    row["steady_state_db"] = r.steady_db;
    rows.push_back(std::move(row));
  }
  std::ofstream js(out_dir / "summary.json", std::ios::trunc);
  if (!js) throw IoError("cannot write " + (out_dir / "summary.json").string());
  js << summary.dump(2) << '\n';

  if (spec.write_wav) {
    write_wav(result.microphone, out_dir / "mic.wav");
    for (const auto& o : result.outputs) {
      write_wav(o.enhanced, out_dir / (o.name + ".wav"));
    }
  }
}

}  // namespace naec::experiment

namespace naec::cli {

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

void print_summary(std::ostream& log, std::size_t frames, std::size_t skipped,
                   double audio_s, double wall_s) {
  log << "frames processed: " << frames << '\n'
      << "skipped bin updates: " << skipped << '\n'
      << "real-time factor: " << std::fixed << std::setprecision(2)
      << (wall_s > 0.0 ? audio_s / wall_s : 0.0)
      << "x (audio seconds per wall second)\n";
  log.unsetf(std::ios::floatfield);
}

}  // namespace

int cmd_process(const std::filesystem::path& far,
                const std::filesystem::path& mic,
                const std::filesystem::path& out,
                const std::optional<std::filesystem::path>& config,
                std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    EngineConfig engine;
    if (config) {
      const auto cfg = KeyValueConfig::load(*config);
      engine = experiment::engine_from_config(cfg);
      cfg.require_all_used();
    }
    const AudioSignal x = read_wav(far);
    const AudioSignal y = read_wav(mic);
    if (x.size() != y.size()) {
      throw ShapeError("far-end (" + std::to_string(x.size()) +
                       " samples) and microphone (" + std::to_string(y.size()) +
                       " samples) lengths differ");
    }
    RunStats stats;
    const AudioSignal e = run(x, y, engine, &stats);
    write_wav(e, out);
    log << "wrote " << out.string() << '\n';
    print_summary(log, stats.frames, stats.skipped_bins, stats.audio_seconds,
                  stats.wall_seconds);
    return kExitOk;
  });
}

namespace {

int simulate_or_compare(const std::filesystem::path& config,
                        const std::filesystem::path& out_dir,
                        std::optional<std::uint64_t> seed, std::ostream& log,
                        std::ostream& err, bool compare_mode) {
  return guarded(err, [&] {
    const auto spec =
        experiment::load(KeyValueConfig::load(config), seed, compare_mode);
    const auto result = experiment::run(spec);
    experiment::write_outputs(spec, result, out_dir, compare_mode);
    for (const auto& r : result.steady) {
      log << r.metric;
      if (!r.engine.empty()) log << " [" << r.engine << "]";
      if (!r.sweep_value.empty()) {
        log << " " << spec.sweep->key << "=" << r.sweep_value;
      }
      log << ": steady state " << std::fixed << std::setprecision(2)
          << r.steady_db << " dB\n";
      log.unsetf(std::ios::floatfield);
    }
    print_summary(log, result.frames, result.skipped_bins, result.audio_seconds,
                  result.wall_seconds);
    log << "outputs in " << out_dir.string() << '\n';
    return kExitOk;
  });
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config,
                 const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed, std::ostream& log,
                 std::ostream& err) {
  return simulate_or_compare(config, out_dir, seed, log, err, false);
}

int cmd_compare(const std::filesystem::path& config,
                const std::filesystem::path& out_dir,
                std::optional<std::uint64_t> seed, std::ostream& log,
                std::ostream& err) {
  return simulate_or_compare(config, out_dir, seed, log, err, true);
}

}  // namespace naec::cli
