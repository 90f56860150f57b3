#include "d3sr/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "d3sr/errors.hpp"

namespace d3sr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> complex_gaussian(std::mt19937_64& rng, double power) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * power));
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {re, im};
}

double uniform_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  return unif(rng);
}

}  // namespace

CVector spatial_steering(const RadarConfig& cfg, double spatial_freq) {
  CVector v(cfg.num_channels);
  for (int k = 0; k < cfg.num_channels; ++k)
    v[k] = std::polar(1.0, kTwoPi * k * spatial_freq);
  return v;
}

CVector temporal_steering(const RadarConfig& cfg, double doppler_freq) {
  CVector v(cfg.num_pulses);
  for (int m = 0; m < cfg.num_pulses; ++m)
    v[m] = std::polar(1.0, kTwoPi * m * doppler_freq);
  return v;
}

SteeringVector space_time_steering(const RadarConfig& cfg, double spatial_freq,
                                   double doppler_freq) {
  const CVector a = spatial_steering(cfg, spatial_freq);
  const CVector b = temporal_steering(cfg, doppler_freq);
  SteeringVector s;
  s.spatial_freq = spatial_freq;
  s.doppler_freq = doppler_freq;
  s.values.resize(cfg.num_channels * cfg.num_pulses);
  for (int n = 0; n < cfg.num_channels; ++n)
    for (int m = 0; m < cfg.num_pulses; ++m)
      s.values[n * cfg.num_pulses + m] = a[n] * b[m];
  return s;
}

std::vector<ClutterScatter> uniform_clutter(const AngularSector& sector,
                                            int count, double total_power,
                                            double edge_floor_db) {
  if (count < 1) throw InvalidConfig("clutter scatter count must be >= 1");
  if (!(sector.hi > sector.lo))
    throw InvalidConfig("angular sector must have positive width");
  if (!(total_power > 0.0))
    throw InvalidConfig("clutter power must be positive");

  const double floor = std::pow(10.0, edge_floor_db / 20.0);
  std::vector<ClutterScatter> scatters(count);
  double power_sum = 0.0;
  for (int i = 0; i < count; ++i) {
    const double az =
        count == 1 ? sector.center()
                   : sector.lo + i * sector.width() / (count - 1);
    // Raised-cosine illumination peaking at the sector center, held at the
    // sidelobe floor toward the edges.
    const double hann =
        0.5 * (1.0 + std::cos(kTwoPi * (az - sector.center()) / sector.width()));
    const double amp = floor + (1.0 - floor) * hann;
    scatters[i].azimuth = az;
    scatters[i].amplitude = amp;
    scatters[i].random = true;
    power_sum += amp * amp;
  }
  const double scale = std::sqrt(total_power / power_sum);
  for (auto& s : scatters) s.amplitude *= scale;
  return scatters;
}

double clutter_power_for_scr(const RadarConfig& cfg,
                             std::complex<double> target_amplitude) {
  return std::norm(target_amplitude) *
         std::pow(10.0, -cfg.input_scr_db / 10.0);
}

std::pair<double, double> scatter_frequencies(const RadarConfig& cfg,
                                              const ClutterScene& scene,
                                              const ClutterScatter& scatter,
                                              int range_cell) {
  const int cell = scene.ridge_reference_cell.value_or(range_cell);
  const double ecos = elevation_cos_from_range(cfg, cell);
  const double look = look_angle_cos(cfg, scatter.azimuth, ecos);
  const double fd = doppler_from_angles(cfg, scatter.azimuth, ecos);
  return {spatial_frequency(cfg, look), normalized_doppler(cfg, fd)};
}

CMatrix clutter_steering_matrix(const RadarConfig& cfg,
                                const ClutterScene& scene, int range_cell) {
  const int nm = cfg.num_channels * cfg.num_pulses;
  CMatrix v(nm, static_cast<Eigen::Index>(scene.scatters.size()));
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    const auto [fs, fd] =
        scatter_frequencies(cfg, scene, scene.scatters[i], range_cell);
    v.col(i) = space_time_steering(cfg, fs, fd).values;
  }
  return v;
}

Snapshot synthesize_snapshot(const RadarConfig& cfg, const ClutterScene& scene,
                             int range_cell, bool include_target,
                             SceneRealization* realization) {
  const int nm = cfg.num_channels * cfg.num_pulses;
  std::mt19937_64 rng(scene.rng_seed + static_cast<std::uint64_t>(range_cell));

  Snapshot snap;
  snap.range_cell = range_cell;
  snap.seed = scene.rng_seed + static_cast<std::uint64_t>(range_cell);
  snap.clutter = CVector::Zero(nm);
  snap.interference = CVector::Zero(nm);
  snap.target = CVector::Zero(nm);
  snap.noise = CVector::Zero(nm);

  // Clutter: gamma_i * v_i summed through one matrix-vector product so the
  // accumulation order never depends on the caller.
  if (!scene.scatters.empty()) {
    const CMatrix v = clutter_steering_matrix(cfg, scene, range_cell);
    CVector gamma(v.cols());
    for (Eigen::Index i = 0; i < gamma.size(); ++i) {
      const ClutterScatter& sc = scene.scatters[i];
      gamma[i] = sc.random ? sc.amplitude * complex_gaussian(rng, 1.0)
                           : sc.amplitude;
      if (realization) {
        const auto [fs, fd] = scatter_frequencies(cfg, scene, sc, range_cell);
        realization->clutter.push_back(
            {fs, fd, gamma[i], std::norm(sc.amplitude)});
      }
    }
    snap.clutter = v * gamma;
  }

  const bool with_interference =
      std::find(scene.interference_cells.begin(),
                scene.interference_cells.end(),
                range_cell) != scene.interference_cells.end();
  if (with_interference) {
    for (const PointSource& src : scene.interferers) {
      std::complex<double> kappa = src.amplitude;
      if (src.random_phase)
        kappa = std::abs(src.amplitude) * std::polar(1.0, uniform_phase(rng));
      snap.interference +=
          kappa *
          space_time_steering(cfg, src.spatial_freq, src.doppler_freq).values;
      if (realization)
        realization->interference.push_back({src.spatial_freq,
                                             src.doppler_freq, kappa,
                                             std::norm(src.amplitude)});
    }
  }

  if (include_target && scene.target &&
      scene.target->range_cell == range_cell) {
    const TargetSpec& t = *scene.target;
    snap.target =
        t.amplitude *
        space_time_steering(cfg, t.spatial_freq, t.doppler_freq).values;
    if (realization)
      realization->target = SceneComponent{t.spatial_freq, t.doppler_freq,
                                           t.amplitude,
                                           std::norm(t.amplitude)};
  }

  for (int i = 0; i < nm; ++i)
    snap.noise[i] = complex_gaussian(rng, scene.noise_power);

  snap.data = snap.clutter + snap.interference + snap.target + snap.noise;
  return snap;
}

std::vector<Snapshot> synthesize_cube(const RadarConfig& cfg,
                                      const ClutterScene& scene,
                                      int num_cells) {
  if (num_cells < 1) throw InvalidConfig("cube needs at least one range cell");
  std::vector<Snapshot> cube;
  cube.reserve(num_cells);
  for (int r = 0; r < num_cells; ++r)
    cube.push_back(synthesize_snapshot(cfg, scene, r, true));
  return cube;
}

}  // namespace d3sr
