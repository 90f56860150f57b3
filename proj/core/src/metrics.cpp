#include "d3sr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "d3sr/errors.hpp"

namespace d3sr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_db(double power) {
  return power > 0.0 ? 10.0 * std::log10(power) : -kInf;
}

}  // namespace

const char* method_label(Method method) {
  switch (method) {
    case Method::kD3srFocuss: return "d3sr-focuss";
    case Method::kD3srL1: return "d3sr-l1";
    case Method::kD3ls: return "d3ls";
    case Method::kLsmi: return "lsmi";
    case Method::kNone: return "none";
  }
  return "unknown";
}

Method parse_method(const std::string& label) {
  if (label == "d3sr-focuss") return Method::kD3srFocuss;
  if (label == "d3sr-l1") return Method::kD3srL1;
  if (label == "d3ls") return Method::kD3ls;
  if (label == "lsmi") return Method::kLsmi;
  if (label == "none") return Method::kNone;
  throw InvalidConfig("unknown method '" + label + "'");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                          std::uint64_t trial) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (point + 1) +
                    0xbf58476d1ce4e5b9ull * (trial + 1);
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

ScrReport output_scr(const StapFilter& filter, const Snapshot& snapshot) {
  const Eigen::Index n = snapshot.data.size();
  CVector background = CVector::Zero(n);
  if (snapshot.clutter.size() == n) background += snapshot.clutter;
  if (snapshot.interference.size() == n) background += snapshot.interference;
  if (snapshot.noise.size() == n) background += snapshot.noise;

  ScrReport report;
  report.filter = filter.method;
  report.seed = snapshot.seed;
  report.target_power =
      snapshot.target.size() == n
          ? std::norm(apply_filter(filter, snapshot.target))
          : 0.0;
  report.background_power = std::norm(apply_filter(filter, background));
  if (report.target_power == 0.0)
    report.scr_db = -kInf;
  else if (report.background_power == 0.0)
    report.scr_db = kInf;
  else
    report.scr_db =
        10.0 * std::log10(report.target_power / report.background_power);
  return report;
}

std::vector<double> range_profile(const StapFilter& filter,
                                  const std::vector<Snapshot>& cube) {
  std::vector<double> profile;
  profile.reserve(cube.size());
  for (const auto& snap : cube)
    profile.push_back(power_db(std::norm(apply_filter(filter, snap.data))));
  return profile;
}

Eigen::MatrixXd adapted_spectrum(
    const CVector& snapshot, const DictionaryGrid& grid,
    const std::function<StapFilter(const SoiSpec&)>& filter_factory) {
  Eigen::MatrixXd map(grid.num_doppler(), grid.num_spatial());
  for (int d = 0; d < grid.num_doppler(); ++d) {
    for (int s = 0; s < grid.num_spatial(); ++s) {
      const auto [fsp, fd] = grid.cell_center(grid.flat(s, d));
      const auto filter = filter_factory(SoiSpec{fsp, fd, 3, 3});
      map(d, s) = power_db(std::norm(apply_filter(filter, snapshot)));
    }
  }
  return map;
}

CovarianceMatrix truth_covariance(const RadarConfig& cfg,
                                  const SceneRealization& realization,
                                  double noise_power, bool ensemble) {
  if (!(noise_power > 0.0))
    throw InvalidConfig("noise power must be positive");
  const Eigen::Index nm =
      static_cast<Eigen::Index>(cfg.num_channels) * cfg.num_pulses;
  CMatrix acc = CMatrix::Zero(nm, nm);
  const auto add = [&](const SceneComponent& comp) {
    const double power =
        ensemble ? comp.mean_power : std::norm(comp.amplitude);
    if (power == 0.0) return;
    const auto phi =
        space_time_steering(cfg, comp.spatial_freq, comp.doppler_freq);
    acc.selfadjointView<Eigen::Lower>().rankUpdate(phi.values, power);
  };
  for (const auto& comp : realization.clutter) add(comp);
  for (const auto& comp : realization.interference) add(comp);

  CovarianceMatrix ccm;
  ccm.r = acc.selfadjointView<Eigen::Lower>();
  ccm.r.diagonal().array() += std::complex<double>(noise_power, 0.0);
  ccm.loading = noise_power;
  return ccm;
}

std::vector<Snapshot> lsmi_training_set(const std::vector<Snapshot>& cube,
                                        int test_cell,
                                        const std::vector<int>& excluded,
                                        int count) {
  if (count < 1) throw InvalidConfig("training count must be positive");
  if (test_cell < 0 || test_cell >= static_cast<int>(cube.size()))
    throw OutOfRange("test cell outside the cube");
  std::unordered_set<int> skip(excluded.begin(), excluded.end());
  skip.insert(test_cell);

  std::vector<int> order(cube.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int da = std::abs(a - test_cell);
    const int db = std::abs(b - test_cell);
    return da != db ? da < db : a < b;
  });

  std::vector<Snapshot> training;
  training.reserve(std::min<size_t>(count, cube.size()));
  for (const int idx : order) {
    if (static_cast<int>(training.size()) == count) break;
    if (skip.count(idx) != 0) continue;
    training.push_back(cube[idx]);
  }
  if (training.empty())
    throw InvalidConfig("no training cells left after exclusions");
  return training;
}

StapFilter method_filter(const RadarConfig& radar,
                         const PipelineOptions& options,
                         const Snapshot& test_cell,
                         const std::vector<Snapshot>& training,
                         const Dictionary* dict, const SoiSpec& soi) {
  const auto steering =
      space_time_steering(radar, soi.spatial_freq, soi.doppler_freq);
  switch (options.method) {
    case Method::kD3srFocuss:
    case Method::kD3srL1: {
      if (dict == nullptr)
        throw InvalidConfig("sparse methods need a dictionary");
      const SparseSpectrum spectrum =
          options.method == Method::kD3srFocuss
              ? focuss_solve(*dict, test_cell.data, options.focuss)
              : l1_solve(*dict, test_cell.data, options.l1);
      SoiSpec guard_spec = soi;
      guard_spec.spatial_extent = options.soi_spatial_extent;
      guard_spec.doppler_extent = options.soi_doppler_extent;
      const auto guard = soi_area(dict->grid, guard_spec);
      const auto ccm = build_ccm(*dict, spectrum, guard, options.ccm_loading);
      return d3sr_filter(ccm, steering);
    }
    case Method::kD3ls:
      return d3ls_filter(test_cell.data, radar, soi,
                         options.subaperture_channels,
                         options.subaperture_pulses);
    case Method::kLsmi:
      return lsmi_filter(training, steering, options.lsmi_loading);
    case Method::kNone:
      return matched_filter(steering);
  }
  throw InvalidConfig("unknown method");
}

MdvCurve mdv_sweep(const Scenario& scenario, const PipelineOptions& options,
                   const std::vector<double>& doppler_axis, int num_trials,
                   std::uint64_t master_seed) {
  if (num_trials < 1) throw InvalidConfig("sweep needs at least one trial");
  if (doppler_axis.empty()) throw InvalidConfig("sweep axis is empty");
  for (size_t i = 1; i < doppler_axis.size(); ++i)
    if (!(doppler_axis[i] > doppler_axis[i - 1]))
      throw InvalidConfig("sweep axis must be strictly increasing");
  if (!scenario.scene.target.has_value())
    throw InvalidConfig("sweep scenario carries no target");
  const int test = scenario.scene.target->range_cell;
  if (test < 0 || test >= scenario.num_range_cells)
    throw OutOfRange("target range cell outside the cube");

  const RadarConfig& radar = scenario.radar;
  const int nm = radar.num_channels * radar.num_pulses;
  const bool sparse = options.method == Method::kD3srFocuss ||
                      options.method == Method::kD3srL1;
  std::optional<Dictionary> dict;
  if (sparse) {
    const DictionaryGrid grid(radar, options.grid_rho_s, options.grid_rho_t);
    dict = build_dictionary(radar, grid);
  }

  MdvCurve curve;
  curve.doppler_axis = doppler_axis;
  curve.trials = num_trials;
  curve.method = options.method;
  for (size_t point = 0; point < doppler_axis.size(); ++point) {
    double ratio_sum = 0.0;
    int successes = 0;
    int failures = 0;
    for (int trial = 0; trial < num_trials; ++trial) {
      ClutterScene scene = scenario.scene;
      scene.rng_seed = derive_seed(master_seed, point, trial);
      scene.target->doppler_freq = doppler_axis[point];

      Snapshot snap;
      std::vector<Snapshot> training;
      if (options.method == Method::kLsmi) {
        const auto cube =
            synthesize_cube(radar, scene, scenario.num_range_cells);
        snap = cube[test];
        const int want =
            options.lsmi_training > 0 ? options.lsmi_training : 2 * nm;
        training =
            lsmi_training_set(cube, test, scene.interference_cells, want);
      } else {
        snap = synthesize_snapshot(radar, scene, test, true);
      }

      const SoiSpec soi{scene.target->spatial_freq, doppler_axis[point],
                        options.soi_spatial_extent,
                        options.soi_doppler_extent};
      try {
        const auto filter =
            method_filter(radar, options, snap, training,
                          dict.has_value() ? &*dict : nullptr, soi);
        const auto report = output_scr(filter, snap);
        if (report.target_power > 0.0)
          ratio_sum += report.background_power > 0.0
                           ? report.target_power / report.background_power
                           : kInf;
        ++successes;
      } catch (const Error&) {
        ++failures;
      }
    }
    curve.failures.push_back(failures);
    curve.mean_scr_db.push_back(
        successes > 0 ? power_db(ratio_sum / successes)
                      : std::numeric_limits<double>::quiet_NaN());
  }
  return curve;
}

}  // namespace d3sr
