#ifndef D3SR_EXPERIMENT_HPP
#define D3SR_EXPERIMENT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "d3sr/config.hpp"

namespace d3sr {

inline constexpr const char* kToolVersion = "0.1.0";

// Reseed a parsed experiment (the --seed flag): the master seed and the
// scene's generator move together.
void override_seed(ExperimentConfig& cfg, std::uint64_t seed);

struct RunReport {
  std::filesystem::path output_dir;
  std::string config_hash;
  std::vector<std::filesystem::path> files;  // everything written, in order
};

// Full artifact set under <output_dir>/<method>/: the conventional input
// spectrum, the method's model artifact (sparse estimate, or the built
// filter for the non-sparse methods), the adapted output spectrum over
// the grid, the range profile, the Doppler sweep (when one is
// configured), and a manifest hashing the rest.  Re-running with the same
// config and seed reproduces every byte.
RunReport run_experiment(const ExperimentConfig& cfg,
                         const std::string& config_hash);

// Scene cube alone -> <output_dir>/cube.txt.
std::filesystem::path write_scene_cube(const ExperimentConfig& cfg);

// Sparse spectra of one snapshot taken from a stored cube, written the
// way run_experiment lays them out.  The cube file's radar block, not
// cfg.radar, defines the data; cfg supplies grid and solver settings.
// Also writes the conventional spectrum at <output_dir>/input_spectrum.txt.
std::vector<std::filesystem::path> estimate_from_cube(
    const std::filesystem::path& cube_path, const ExperimentConfig& cfg);

// Build each configured method's test-cell filter and apply it across the
// cube: filter.txt and range_profile.txt per method.
std::vector<std::filesystem::path> build_and_apply_filters(
    const ExperimentConfig& cfg);

// Doppler sweep only: every configured method's curve in one file,
// <output_dir>/mdv_curves.txt.
std::filesystem::path sweep_to_file(const ExperimentConfig& cfg);

}  // namespace d3sr

#endif  // D3SR_EXPERIMENT_HPP
