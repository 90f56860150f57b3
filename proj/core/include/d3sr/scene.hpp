#ifndef D3SR_SCENE_HPP
#define D3SR_SCENE_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "d3sr/geometry.hpp"
#include "d3sr/radar_config.hpp"

namespace d3sr {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// ========================== steering vectors ==========================

struct SteeringVector {
  CVector values;            // length N*M
  double spatial_freq = 0.0; // cycles per element
  double doppler_freq = 0.0; // cycles per pulse
};

// Per-element spatial phase ramp exp(j 2 pi k f_sp), k = 0..N-1.
CVector spatial_steering(const RadarConfig& cfg, double spatial_freq);

// Per-pulse temporal phase ramp exp(j 2 pi m f_d), m = 0..M-1.
CVector temporal_steering(const RadarConfig& cfg, double doppler_freq);

// Kronecker product with the spatial index varying slowest:
// element (n*M + m) = spatial[n] * temporal[m].
SteeringVector space_time_steering(const RadarConfig& cfg, double spatial_freq,
                                   double doppler_freq);

// ============================ scene model =============================

// One ground scatter, placed by azimuth.  With `random` set the complex
// amplitude is redrawn per range cell as amplitude * CN(0,1); otherwise it
// enters the sum exactly as given.
struct ClutterScatter {
  double azimuth = 0.0;
  std::complex<double> amplitude = 1.0;
  bool random = true;
};

// A discrete point source pinned directly in normalized frequency, free of
// the ground geometry (external emitters, injected targets).
struct PointSource {
  double spatial_freq = 0.0;
  double doppler_freq = 0.0;
  std::complex<double> amplitude = 1.0;
  bool random_phase = false;  // draw a fresh phase per snapshot
};

struct TargetSpec {
  double spatial_freq = 0.0;
  double doppler_freq = 0.0;
  std::complex<double> amplitude = 1.0;
  int range_cell = 0;
};

struct ClutterScene {
  AngularSector sector;
  std::vector<ClutterScatter> scatters;
  std::vector<PointSource> interferers;
  std::vector<int> interference_cells;  // range cells carrying interference
  std::optional<TargetSpec> target;
  double noise_power = 1.0;  // per-sample variance, the 0 dB reference
  std::uint64_t rng_seed = 0;
  // When set, every range cell reuses this cell's elevation for the
  // scatter frequencies, making the clutter support range independent
  // (the stationary side-looking regime).  Unset: per-cell elevation.
  std::optional<int> ridge_reference_cell;
};

// Uniformly spaced scatters spanning the sector (endpoints included) with a
// raised-cosine transmit taper over the sector and a floor for the scatters
// outside the mainlobe; |amplitude|^2 sums to total_power.
std::vector<ClutterScatter> uniform_clutter(const AngularSector& sector,
                                            int count, double total_power,
                                            double edge_floor_db = -25.0);

// Per-sample clutter power that realizes the configured input SCR against a
// target of the given amplitude.
double clutter_power_for_scr(const RadarConfig& cfg,
                             std::complex<double> target_amplitude);

// Normalized frequencies of one scatter as seen from a range cell,
// honoring the scene's ridge reference override.
std::pair<double, double> scatter_frequencies(const RadarConfig& cfg,
                                              const ClutterScene& scene,
                                              const ClutterScatter& scatter,
                                              int range_cell);

// Steering matrix of all scene scatters for one range cell (N*M x count).
CMatrix clutter_steering_matrix(const RadarConfig& cfg,
                                const ClutterScene& scene, int range_cell);

// ============================ synthesis ===============================

struct Snapshot {
  CVector data;          // clutter + interference + target + noise
  CVector clutter;
  CVector interference;
  CVector target;
  CVector noise;
  int range_cell = 0;
  std::uint64_t seed = 0;  // the engine seed used for this cell's draws
};

// Realized scene content behind one snapshot, for clairvoyant references.
struct SceneComponent {
  double spatial_freq = 0.0;
  double doppler_freq = 0.0;
  std::complex<double> amplitude;  // realized draw
  double mean_power = 0.0;         // ensemble E|amplitude|^2
};

struct SceneRealization {
  std::vector<SceneComponent> clutter;
  std::vector<SceneComponent> interference;
  std::optional<SceneComponent> target;
};

// Synthesizes one range cell.  Draws come from an engine seeded with
// scene.rng_seed + range_cell, in a fixed order (clutter, interference,
// noise), so cells are independent and cube synthesis can run cell-parallel
// while staying bit-identical to the serial path.  Interference enters only
// when range_cell is listed in scene.interference_cells; the target only
// when include_target is set and the cell matches the target's range cell.
Snapshot synthesize_snapshot(const RadarConfig& cfg, const ClutterScene& scene,
                             int range_cell, bool include_target,
                             SceneRealization* realization = nullptr);

// All range cells [0, num_cells); the target is injected at its own cell.
std::vector<Snapshot> synthesize_cube(const RadarConfig& cfg,
                                      const ClutterScene& scene,
                                      int num_cells);

}  // namespace d3sr

#endif  // D3SR_SCENE_HPP
