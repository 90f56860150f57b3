#include "d3sr/experiment.hpp"

#include <optional>
#include <utility>

#include "d3sr/errors.hpp"
#include "d3sr/io.hpp"

namespace d3sr {

namespace fs = std::filesystem;

namespace {

bool is_sparse(Method m) {
  return m == Method::kD3srFocuss || m == Method::kD3srL1;
}

void require_runnable(const ExperimentConfig& cfg) {
  if (cfg.methods.empty())
    throw InvalidConfig("configure at least one method ([run] methods or --method)");
  if (!cfg.scene.target.has_value())
    throw InvalidConfig("this operation needs a [target] in the scene");
}

SoiSpec soi_of(const ExperimentConfig& cfg) {
  SoiSpec soi;
  soi.spatial_freq = cfg.scene.target->spatial_freq;
  soi.doppler_freq = cfg.scene.target->doppler_freq;
  soi.spatial_extent = cfg.options.soi_spatial_extent;
  soi.doppler_extent = cfg.options.soi_doppler_extent;
  return soi;
}

io::SpectrumFile fourier_file(const Dictionary& dict, const CVector& x) {
  io::SpectrumFile f;
  f.kind = "fourier";
  f.num_spatial = dict.grid.num_spatial();
  f.num_doppler = dict.grid.num_doppler();
  f.rho_s = dict.grid.rho_s();
  f.rho_t = dict.grid.rho_t();
  f.amplitudes = fourier_spectrum(dict, x);
  return f;
}

io::SpectrumFile sparse_file(const SparseSpectrum& solution,
                             const DictionaryGrid& grid) {
  io::SpectrumFile f;
  f.kind = "sparse";
  f.num_spatial = grid.num_spatial();
  f.num_doppler = grid.num_doppler();
  f.rho_s = grid.rho_s();
  f.rho_t = grid.rho_t();
  f.amplitudes = solution.amplitudes;
  f.support = solution.support;
  f.residual_norm = solution.residual_norm;
  f.iterations = solution.iteration_count;
  f.attempts = solution.attempts;
  return f;
}

int lsmi_training_count(const ExperimentConfig& cfg) {
  return cfg.options.lsmi_training > 0
             ? cfg.options.lsmi_training
             : 2 * cfg.radar.num_channels * cfg.radar.num_pulses;
}

struct MethodComputation {
  StapFilter filter;
  std::optional<SparseSpectrum> solution;  // sparse methods only
};

MethodComputation compute_method(const ExperimentConfig& cfg, Method m,
                                 const std::vector<Snapshot>& cube,
                                 const Dictionary* dict, const SoiSpec& soi) {
  PipelineOptions opts = cfg.options;
  opts.method = m;
  const int test = cfg.scene.target->range_cell;
  const Snapshot& snap = cube[test];

  MethodComputation out;
  if (is_sparse(m)) {
    if (dict == nullptr)
      throw InvalidConfig("sparse methods need the dictionary");
    SparseSpectrum solution =
        m == Method::kD3srFocuss ? focuss_solve(*dict, snap.data, opts.focuss)
                                 : l1_solve(*dict, snap.data, opts.l1);
    const std::vector<int> guard = soi_area(dict->grid, soi);
    out.filter = d3sr_filter(
        build_ccm(*dict, solution, guard, opts.ccm_loading),
        space_time_steering(cfg.radar, soi.spatial_freq, soi.doppler_freq));
    out.solution = std::move(solution);
  } else {
    std::vector<Snapshot> training;
    if (m == Method::kLsmi)
      training = lsmi_training_set(cube, test, cfg.scene.interference_cells,
                                   lsmi_training_count(cfg));
    out.filter =
        method_filter(cfg.radar, opts, snap, training, nullptr, soi);
  }
  return out;
}

// Filter factory behind the adapted-spectrum map.  Every grid cell plays
// the SOI in turn, so the sparse factory rebuilds the covariance with the
// guard moved while reusing the one solved spectrum; the sample-covariance
// factory reuses one factored matrix; the others solve per cell directly.
std::function<StapFilter(const SoiSpec&)> adapted_factory(
    const ExperimentConfig& cfg, Method m, const std::vector<Snapshot>& cube,
    const Dictionary* dict, const std::optional<SparseSpectrum>& solution) {
  const RadarConfig radar = cfg.radar;
  PipelineOptions opts = cfg.options;
  opts.method = m;
  const int test = cfg.scene.target->range_cell;

  switch (m) {
    case Method::kD3srFocuss:
    case Method::kD3srL1: {
      const Dictionary* d = dict;
      const SparseSpectrum sol = *solution;
      const double loading = opts.ccm_loading;
      return [radar, d, sol, loading](const SoiSpec& spec) {
        const std::vector<int> guard = soi_area(d->grid, spec);
        return d3sr_filter(
            build_ccm(*d, sol, guard, loading),
            space_time_steering(radar, spec.spatial_freq, spec.doppler_freq));
      };
    }
    case Method::kD3ls: {
      const CVector snap = cube[test].data;
      const int na = opts.subaperture_channels;
      const int np = opts.subaperture_pulses;
      return [radar, snap, na, np](const SoiSpec& spec) {
        return d3ls_filter(snap, radar, spec, na, np);
      };
    }
    case Method::kLsmi: {
      const CovarianceMatrix r = sample_covariance(
          lsmi_training_set(cube, test, cfg.scene.interference_cells,
                            lsmi_training_count(cfg)),
          opts.lsmi_loading);
      return [radar, r](const SoiSpec& spec) {
        return d3sr_filter(r, space_time_steering(radar, spec.spatial_freq,
                                                  spec.doppler_freq));
      };
    }
    case Method::kNone:
    default:
      return [radar](const SoiSpec& spec) {
        return matched_filter(space_time_steering(radar, spec.spatial_freq,
                                                  spec.doppler_freq));
      };
  }
}

}  // namespace

void override_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.master_seed = seed;
  cfg.scene.rng_seed = seed;
}

RunReport run_experiment(const ExperimentConfig& cfg,
                         const std::string& config_hash) {
  require_runnable(cfg);
  RunReport report;
  report.output_dir = cfg.output_dir;
  report.config_hash = config_hash;
  fs::create_directories(report.output_dir);

  const std::vector<Snapshot> cube =
      synthesize_cube(cfg.radar, cfg.scene, cfg.num_range_cells);
  const int test = cfg.scene.target->range_cell;
  const SoiSpec soi = soi_of(cfg);
  const DictionaryGrid grid(cfg.radar, cfg.options.grid_rho_s,
                            cfg.options.grid_rho_t);
  const Dictionary dict = build_dictionary(cfg.radar, grid);
  const io::SpectrumFile input = fourier_file(dict, cube[test].data);

  for (const Method m : cfg.methods) {
    const std::string label = method_label(m);
    const fs::path dir = report.output_dir / label;
    fs::create_directories(dir);
    std::vector<io::ManifestEntry> manifest;
    auto emit = [&](const std::string& name, const auto& writer) {
      const fs::path path = dir / name;
      writer(path);
      manifest.push_back({name, io::file_hash(path)});
      report.files.push_back(path);
    };

    try {
      emit("input_spectrum.txt",
           [&](const fs::path& p) { io::write_spectrum(p, input); });

      const MethodComputation computed =
          compute_method(cfg, m, cube, &dict, soi);
      if (computed.solution.has_value())
        emit("estimated_spectrum.txt", [&](const fs::path& p) {
          io::write_spectrum(p, sparse_file(*computed.solution, grid));
        });
      else
        emit("filter.txt", [&](const fs::path& p) {
          io::write_filter(p, computed.filter);
        });

      const Eigen::MatrixXd adapted = adapted_spectrum(
          cube[test].data, grid,
          adapted_factory(cfg, m, cube, &dict, computed.solution));
      emit("adapted_spectrum.txt", [&](const fs::path& p) {
        io::write_power_map(p, adapted, label);
      });

      emit("range_profile.txt", [&](const fs::path& p) {
        io::write_profile(p, range_profile(computed.filter, cube), label);
      });

      if (!cfg.mdv_dopplers.empty()) {
        PipelineOptions opts = cfg.options;
        opts.method = m;
        const Scenario scenario{cfg.radar, cfg.scene, cfg.num_range_cells};
        const MdvCurve curve =
            mdv_sweep(scenario, opts, cfg.mdv_dopplers, cfg.mdv_trials,
                      cfg.master_seed);
        emit("mdv_curve.txt", [&](const fs::path& p) {
          io::write_curves(p, {curve}, cfg.master_seed);
        });
      }
    } catch (const Error& e) {
      throw Error("method " + label + ": " + e.what());
    }

    io::write_manifest(dir / "manifest.txt", kToolVersion, config_hash,
                       cfg.master_seed, label, manifest);
    report.files.push_back(dir / "manifest.txt");
  }
  return report;
}

std::filesystem::path write_scene_cube(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  io::CubeFile cube;
  cube.radar = cfg.radar;
  cube.cells = synthesize_cube(cfg.radar, cfg.scene, cfg.num_range_cells);
  cube.target_cell =
      cfg.scene.target.has_value() ? cfg.scene.target->range_cell : -1;
  cube.interference_cells = cfg.scene.interference_cells;
  cube.noise_power = cfg.scene.noise_power;
  cube.seed = cfg.scene.rng_seed;
  const fs::path path = fs::path(cfg.output_dir) / "cube.txt";
  io::write_cube(path, cube);
  return path;
}

std::vector<std::filesystem::path> estimate_from_cube(
    const std::filesystem::path& cube_path, const ExperimentConfig& cfg) {
  const io::CubeFile cube = io::read_cube(cube_path);
  if (cube.cells.empty()) throw InvalidConfig("cube holds no range cells");
  const int cell = cube.target_cell;
  const Snapshot* snap = nullptr;
  for (const auto& candidate : cube.cells)
    if (candidate.range_cell == (cell >= 0 ? cell : 0)) snap = &candidate;
  if (snap == nullptr)
    throw InvalidConfig("cube does not hold the requested cell");

  std::vector<Method> methods;
  for (const Method m : cfg.methods)
    if (is_sparse(m)) methods.push_back(m);
  if (methods.empty()) methods.push_back(Method::kD3srFocuss);

  const DictionaryGrid grid(cube.radar, cfg.options.grid_rho_s,
                            cfg.options.grid_rho_t);
  const Dictionary dict = build_dictionary(cube.radar, grid);

  fs::create_directories(cfg.output_dir);
  std::vector<fs::path> files;
  const fs::path input_path = fs::path(cfg.output_dir) / "input_spectrum.txt";
  io::write_spectrum(input_path, fourier_file(dict, snap->data));
  files.push_back(input_path);

  for (const Method m : methods) {
    const std::string label = method_label(m);
    try {
      const SparseSpectrum solution =
          m == Method::kD3srFocuss
              ? focuss_solve(dict, snap->data, cfg.options.focuss)
              : l1_solve(dict, snap->data, cfg.options.l1);
      const fs::path dir = fs::path(cfg.output_dir) / label;
      fs::create_directories(dir);
      const fs::path path = dir / "estimated_spectrum.txt";
      io::write_spectrum(path, sparse_file(solution, grid));
      files.push_back(path);
    } catch (const Error& e) {
      throw Error("method " + label + ": " + e.what());
    }
  }
  return files;
}

std::vector<std::filesystem::path> build_and_apply_filters(
    const ExperimentConfig& cfg) {
  require_runnable(cfg);
  const std::vector<Snapshot> cube =
      synthesize_cube(cfg.radar, cfg.scene, cfg.num_range_cells);
  const SoiSpec soi = soi_of(cfg);

  std::optional<Dictionary> dict;
  for (const Method m : cfg.methods)
    if (is_sparse(m) && !dict.has_value())
      dict = build_dictionary(
          cfg.radar, DictionaryGrid(cfg.radar, cfg.options.grid_rho_s,
                                    cfg.options.grid_rho_t));

  std::vector<fs::path> files;
  for (const Method m : cfg.methods) {
    const std::string label = method_label(m);
    try {
      const MethodComputation computed = compute_method(
          cfg, m, cube, dict.has_value() ? &*dict : nullptr, soi);
      const fs::path dir = fs::path(cfg.output_dir) / label;
      fs::create_directories(dir);
      io::write_filter(dir / "filter.txt", computed.filter);
      files.push_back(dir / "filter.txt");
      io::write_profile(dir / "range_profile.txt",
                        range_profile(computed.filter, cube), label);
      files.push_back(dir / "range_profile.txt");
    } catch (const Error& e) {
      throw Error("method " + label + ": " + e.what());
    }
  }
  return files;
}

std::filesystem::path sweep_to_file(const ExperimentConfig& cfg) {
  require_runnable(cfg);
  if (cfg.mdv_dopplers.empty())
    throw InvalidConfig("the sweep needs [mdv] dopplers");

  const Scenario scenario{cfg.radar, cfg.scene, cfg.num_range_cells};
  std::vector<MdvCurve> curves;
  for (const Method m : cfg.methods) {
    PipelineOptions opts = cfg.options;
    opts.method = m;
    try {
      curves.push_back(mdv_sweep(scenario, opts, cfg.mdv_dopplers,
                                 cfg.mdv_trials, cfg.master_seed));
    } catch (const Error& e) {
      throw Error("method " + std::string(method_label(m)) + ": " + e.what());
    }
  }
  fs::create_directories(cfg.output_dir);
  const fs::path path = fs::path(cfg.output_dir) / "mdv_curves.txt";
  io::write_curves(path, curves, cfg.master_seed);
  return path;
}

}  // namespace d3sr
