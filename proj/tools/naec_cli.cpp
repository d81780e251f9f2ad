// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// naec process FAR MIC OUT [--config FILE]
// naec simulate --config FILE --out-dir DIR [--seed N]
// naec compare  --config FILE --out-dir DIR [--seed N]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "naec/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear acoustic echo cancellation"};
  app.require_subcommand(1);

  std::string far, mic, out, process_config;
  auto* process = app.add_subcommand("process", "Cancel echo in a recorded pair");
  process->add_option("far", far, "far-end reference WAV")->required();
  process->add_option("mic", mic, "microphone WAV")->required();
  process->add_option("out", out, "enhanced output WAV")->required();
  process->add_option("--config", process_config, "engine configuration");

  struct ExperimentArgs {
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
  };
  ExperimentArgs sim_args, cmp_args;
  auto add_experiment = [&](const char* name, const char* help,
                            ExperimentArgs& a) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", a.config, "experiment configuration")->required();
    sub->add_option("--out-dir", a.out_dir, "output directory")->required();
    sub->add_option("--seed", a.seed, "override the configured seed");
    return sub;
  };
  auto* simulate = add_experiment("simulate", "Run a simulated experiment", sim_args);
  auto* compare = add_experiment("compare", "Compare engine configurations", cmp_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return naec::cli::kExitUsage;
  }

  if (*process) {
    std::optional<std::filesystem::path> cfg;
    if (!process_config.empty()) cfg = process_config;
    return naec::cli::cmd_process(far, mic, out, cfg, std::cout, std::cerr);
  }
  if (*simulate) {
    return naec::cli::cmd_simulate(sim_args.config, sim_args.out_dir,
                                   sim_args.seed, std::cout, std::cerr);
  }
  if (*compare) {
    return naec::cli::cmd_compare(cmp_args.config, cmp_args.out_dir,
                                  cmp_args.seed, std::cout, std::cerr);
  }
  return naec::cli::kExitUsage;
}
