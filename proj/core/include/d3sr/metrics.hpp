#ifndef D3SR_METRICS_HPP
#define D3SR_METRICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "d3sr/dictionary.hpp"
#include "d3sr/focuss.hpp"
#include "d3sr/l1.hpp"
#include "d3sr/scene.hpp"
#include "d3sr/stap.hpp"

namespace d3sr {

// Full processing chains selectable at the experiment level.
enum class Method { kD3srFocuss, kD3srL1, kD3ls, kLsmi, kNone };

const char* method_label(Method method);
Method parse_method(const std::string& label);  // throws InvalidConfig

// Everything a method needs beyond the scenario itself.
struct PipelineOptions {
  Method method = Method::kD3srFocuss;
  FocussOptions focuss;
  L1Options l1;
  int grid_rho_s = 6;  // dictionary oversampling along angle
  int grid_rho_t = 6;  // and Doppler
  double ccm_loading = 1.0;   // diagonal load on the sparse covariance
  double lsmi_loading = 1.0;  // diagonal load on the sample covariance
  int lsmi_training = 0;      // training snapshot count; 0 means 2*N*M
  int subaperture_channels = 8;
  int subaperture_pulses = 8;
  int soi_spatial_extent = 3;
  int soi_doppler_extent = 3;
};

// A radar setup plus the scene it observes.  The scene must carry the
// target spec; its range cell is the test cell.
struct Scenario {
  RadarConfig radar;
  ClutterScene scene;
  int num_range_cells = 1;
};

struct ScrReport {
  double scr_db = 0.0;  // +-inf sentinels when one side is silent
  double target_power = 0.0;
  double background_power = 0.0;
  FilterMethod filter = FilterMethod::kD3sr;
  std::uint64_t seed = 0;
};

struct MdvCurve {
  std::vector<double> doppler_axis;
  std::vector<double> mean_scr_db;  // NaN where every trial failed
  std::vector<int> failures;
  int trials = 0;
  Method method = Method::kD3srFocuss;
};

// Stable per-trial seed from a master seed and the (point, trial) index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                          std::uint64_t trial);

// Ratio of filtered target power to filtered clutter+interference+noise
// power, evaluated from the snapshot's stored truth components.
ScrReport output_scr(const StapFilter& filter, const Snapshot& snapshot);

// Filtered output power per range cell, in dB against the unit noise floor.
std::vector<double> range_profile(const StapFilter& filter,
                                  const std::vector<Snapshot>& cube);

// Output power map over the grid: each cell becomes the assumed SOI, the
// factory builds that cell's filter, and the filtered power lands in
// (doppler row, spatial column), dB against the unit noise floor.
Eigen::MatrixXd adapted_spectrum(
    const CVector& snapshot, const DictionaryGrid& grid,
    const std::function<StapFilter(const SoiSpec&)>& filter_factory);

// Covariance assembled from the realized scene content behind a snapshot
// (target excluded).  ensemble=false squares the realized draws; true uses
// the ensemble mean powers, which is the clairvoyant optimum.
CovarianceMatrix truth_covariance(const RadarConfig& cfg,
                                  const SceneRealization& realization,
                                  double noise_power, bool ensemble);

// Up to `count` training snapshots nearest to the test cell, excluding the
// test cell itself and the listed cells; ties resolve to the lower index.
std::vector<Snapshot> lsmi_training_set(const std::vector<Snapshot>& cube,
                                        int test_cell,
                                        const std::vector<int>& excluded,
                                        int count);

// One filter for the test snapshot by the configured method.  `training`
// feeds the sample-covariance method; `dict` is required by the sparse
// methods and ignored elsewhere.
StapFilter method_filter(const RadarConfig& radar,
                         const PipelineOptions& options,
                         const Snapshot& test_cell,
                         const std::vector<Snapshot>& training,
                         const Dictionary* dict, const SoiSpec& soi);

// Monte Carlo output-SCR sweep along the Doppler axis: fresh scene draws
// per trial via derived seeds, the full method pipeline per draw, linear
// ratios averaged over the successful trials, then dB.  Solver failures
// are counted and excluded.
MdvCurve mdv_sweep(const Scenario& scenario, const PipelineOptions& options,
                   const std::vector<double>& doppler_axis, int num_trials,
                   std::uint64_t master_seed);

}  // namespace d3sr

#endif  // D3SR_METRICS_HPP
