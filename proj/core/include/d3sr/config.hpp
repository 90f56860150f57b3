#ifndef D3SR_CONFIG_HPP
#define D3SR_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "d3sr/io.hpp"
#include "d3sr/metrics.hpp"

namespace d3sr {

// A full experiment: the scenario, the processing options, the methods to
// run, and where the results go.  Angles in the file are degrees; here the
// target and interferers are already resolved to normalized frequencies.
struct ExperimentConfig {
  RadarConfig radar;
  ClutterScene scene;
  int num_range_cells = 1;
  PipelineOptions options;  // `method` is set per run, not here
  std::vector<Method> methods;
  std::vector<double> mdv_dopplers;  // empty: no Doppler sweep configured
  int mdv_trials = 20;
  std::string output_dir = "out";
  std::uint64_t master_seed = 1;
};

// Strict extraction: unknown sections or keys, repeated one-shot entries,
// and out-of-range values throw ConfigError naming the file and line.
ExperimentConfig parse_config(const io::TextDocument& doc,
                              const std::string& origin);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace d3sr

#endif  // D3SR_CONFIG_HPP
