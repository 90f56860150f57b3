#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "d3sr/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::vector<std::string> methods;
  std::uint64_t seed = 0;
  int trials = 0;
  int threads = 1;
  std::string cube;
};

void add_common(CLI::App* sub, Flags& flags, bool config_required) {
  auto* config =
      sub->add_option("--config", flags.config, "experiment config file");
  if (config_required) config->required();
  sub->add_option("--seed", flags.seed,
                  "master seed override (reseeds the whole experiment)");
  sub->add_option("--out", flags.out, "output directory override");
  sub->add_option("--method", flags.methods,
                  "methods to run, comma separated")
      ->delimiter(',')
      ->check(CLI::IsMember(
          {"d3sr-focuss", "d3sr-l1", "d3ls", "lsmi", "none"}));
  sub->add_option("--trials", flags.trials, "Monte Carlo trials per sweep point")
      ->check(CLI::PositiveNumber);
  sub->add_option("--threads", flags.threads,
                  "worker threads (results do not depend on this)")
      ->envname("D3SR_THREADS")
      ->check(CLI::PositiveNumber);
}

// Folds the command line into the parsed (or default) config.
d3sr::ExperimentConfig configure(const CLI::App* sub, const Flags& flags,
                                 std::string& config_hash) {
  d3sr::ExperimentConfig cfg;
  config_hash = std::string(16, '0');
  if (sub->count("--config") > 0) {
    cfg = d3sr::load_config(flags.config);
    config_hash = d3sr::io::file_hash(flags.config);
  }
  if (sub->count("--seed") > 0) d3sr::override_seed(cfg, flags.seed);
  if (sub->count("--out") > 0) cfg.output_dir = flags.out;
  if (!flags.methods.empty()) {
    cfg.methods.clear();
    for (const auto& label : flags.methods)
      cfg.methods.push_back(d3sr::parse_method(label));
  }
  if (sub->count("--trials") > 0) cfg.mdv_trials = flags.trials;
  return cfg;
}

void announce(const std::vector<std::filesystem::path>& files) {
  for (const auto& path : files) std::cout << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time adaptive processing on sparse angle-Doppler "
               "spectra: scene simulation, spectrum estimation, filter "
               "construction, and Doppler sweeps."};
  app.set_version_flag("--version", d3sr::kToolVersion);
  app.require_subcommand(1);
  Flags flags;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "synthesize the scene cube and write it out");
  add_common(simulate, flags, true);

  CLI::App* estimate = app.add_subcommand(
      "estimate", "sparse spectrum of the test cell of a stored cube");
  estimate->add_option("cube", flags.cube, "cube file from `simulate`")
      ->required();
  add_common(estimate, flags, false);

  CLI::App* filter = app.add_subcommand(
      "filter", "build each method's filter and apply it across the cube");
  add_common(filter, flags, true);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Monte Carlo output-SCR curve over the configured Dopplers");
  add_common(sweep, flags, true);

  CLI::App* run = app.add_subcommand(
      "run", "full experiment: spectra, filters, profiles, sweeps, manifests");
  add_common(run, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    std::string config_hash;
    d3sr::ExperimentConfig cfg = configure(sub, flags, config_hash);
    if (sub == simulate) {
      announce({d3sr::write_scene_cube(cfg)});
    } else if (sub == estimate) {
      announce(d3sr::estimate_from_cube(flags.cube, cfg));
    } else if (sub == filter) {
      announce(d3sr::build_and_apply_filters(cfg));
    } else if (sub == sweep) {
      announce({d3sr::sweep_to_file(cfg)});
    } else if (sub == run) {
      announce(d3sr::run_experiment(cfg, config_hash).files);
    }
  } catch (const d3sr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const d3sr::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const d3sr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
