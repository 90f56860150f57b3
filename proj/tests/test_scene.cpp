#include "d3sr/scene.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "d3sr/errors.hpp"
#include "doctest.h"

using namespace d3sr;
using std::complex;

namespace {
constexpr double kPi = std::numbers::pi;

AngularSector side_sector() {
  return {20.0 * kPi / 180.0, 60.0 * kPi / 180.0};
}

ClutterScene basic_scene(const RadarConfig& cfg, int num_scatters = 45) {
  ClutterScene scene;
  scene.sector = side_sector();
  scene.scatters = uniform_clutter(scene.sector, num_scatters,
                                   clutter_power_for_scr(cfg, 1.0));
  scene.target = TargetSpec{0.2, 0.3, 1.0, 14};
  scene.ridge_reference_cell = 14;
  scene.rng_seed = 20240815;
  return scene;
}
}  // namespace

TEST_CASE("space-time steering structure") {
  RadarConfig cfg;
  cfg.num_channels = 2;
  cfg.num_pulses = 2;

  const auto s = space_time_steering(cfg, 0.5, 0.25);
  REQUIRE(s.values.size() == 4);
  CHECK(std::abs(s.values[0] - complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(s.values[1] - complex<double>(0, 1)) < 1e-12);
  CHECK(std::abs(s.values[2] - complex<double>(-1, 0)) < 1e-12);
  CHECK(std::abs(s.values[3] - complex<double>(0, -1)) < 1e-12);
}

TEST_CASE("steering vectors are unit modulus with norm NM") {
  RadarConfig cfg;
  for (double fs : {-0.41, -0.2, 0.0, 0.13, 0.49}) {
    for (double fd : {-0.5, -0.27, 0.08, 0.3}) {
      const auto s = space_time_steering(cfg, fs, fd);
      for (int i = 0; i < s.values.size(); ++i)
        CHECK(std::abs(std::abs(s.values[i]) - 1.0) < 1e-14);
      CHECK(std::abs(s.values.squaredNorm() -
                     cfg.num_channels * cfg.num_pulses) < 1e-12);
    }
  }
}

TEST_CASE("uniform clutter taper") {
  const auto sector = side_sector();
  const double total = 1000.0;
  const auto scatters = uniform_clutter(sector, 181, total);
  REQUIRE(scatters.size() == 181);

  double power = 0.0;
  double peak = 0.0;
  for (const auto& s : scatters) {
    power += std::norm(s.amplitude);
    peak = std::max(peak, std::abs(s.amplitude));
  }
  CHECK(power == doctest::Approx(total).epsilon(1e-12));

  // Endpoints included, center illuminated strongest, edges >= 20 dB down.
  CHECK(scatters.front().azimuth == doctest::Approx(sector.lo));
  CHECK(scatters.back().azimuth == doctest::Approx(sector.hi));
  const double edge_ratio = std::abs(scatters.front().amplitude) / peak;
  CHECK(edge_ratio < std::pow(10.0, -20.0 / 20.0));
  CHECK(edge_ratio == doctest::Approx(std::pow(10.0, -25.0 / 20.0)).epsilon(1e-6));
  CHECK(std::abs(scatters[90].amplitude) == doctest::Approx(peak));
}

TEST_CASE("single deterministic scatter reproduces its steering vector") {
  RadarConfig cfg;
  ClutterScene scene;
  scene.sector = {kPi / 2.0 - 0.1, kPi / 2.0 + 0.1};
  scene.scatters = {{kPi / 2.0, 1.0, false}};
  scene.ridge_reference_cell = 0;  // nadir: zero elevation cosine

  const Snapshot snap = synthesize_snapshot(cfg, scene, 5, false);
  // Broadside azimuth at the nadir reference: both frequencies vanish and
  // the scatter contributes an (almost exactly) all-ones vector.
  for (int i = 0; i < snap.clutter.size(); ++i)
    CHECK(std::abs(snap.clutter[i] - complex<double>(1, 0)) < 1e-9);
}

TEST_CASE("side-looking support is range independent under a ridge reference") {
  RadarConfig cfg;
  ClutterScene scene = basic_scene(cfg);
  for (const auto& sc : scene.scatters) {
    const auto [fs10, fd10] = scatter_frequencies(cfg, scene, sc, 10);
    const auto [fs90, fd90] = scatter_frequencies(cfg, scene, sc, 90);
    CHECK(fs10 == fs90);
    CHECK(fd10 == fd90);
  }
  // Without the reference the support drifts with range.
  scene.ridge_reference_cell.reset();
  bool drifted = false;
  for (const auto& sc : scene.scatters) {
    const auto [fs10, fd10] = scatter_frequencies(cfg, scene, sc, 10);
    const auto [fs90, fd90] = scatter_frequencies(cfg, scene, sc, 90);
    if (fs10 != fs90 || fd10 != fd90) drifted = true;
  }
  CHECK(drifted);
}

TEST_CASE("side-looking scatters stay on the cone-angle Doppler line") {
  RadarConfig cfg;
  cfg.crab = 0.0;
  const ClutterScene scene = basic_scene(cfg);
  const double scale = 2.0 * cfg.velocity * cfg.pri / cfg.wavelength;
  const int ref = *scene.ridge_reference_cell;
  const double ecos = elevation_cos_from_range(cfg, ref);
  for (const auto& sc : scene.scatters) {
    const auto [fs, fd] = scatter_frequencies(cfg, scene, sc, 14);
    const double look = look_angle_cos(cfg, sc.azimuth, ecos);
    CHECK(std::abs(fd - scale * look) < 1e-9);
  }
}

TEST_CASE("snapshot component bookkeeping") {
  RadarConfig cfg;
  ClutterScene scene = basic_scene(cfg);
  scene.interferers = {{-0.3, 0.1, 10.0, false}};
  scene.interference_cells = {14, 30};

  const Snapshot snap = synthesize_snapshot(cfg, scene, 14, true);

  SUBCASE("data is the exact sum of its components") {
    const CVector sum =
        snap.clutter + snap.interference + snap.target + snap.noise;
    for (int i = 0; i < sum.size(); ++i) {
      CHECK(snap.data[i].real() == sum[i].real());
      CHECK(snap.data[i].imag() == sum[i].imag());
    }
  }

  SUBCASE("seeded synthesis is bit-reproducible") {
    const Snapshot again = synthesize_snapshot(cfg, scene, 14, true);
    for (int i = 0; i < snap.data.size(); ++i) {
      CHECK(snap.data[i] == again.data[i]);
    }
    const Snapshot other = synthesize_snapshot(cfg, scene, 15, true);
    CHECK(snap.noise != other.noise);
  }

  SUBCASE("dropping the target changes nothing else") {
    const Snapshot without = synthesize_snapshot(cfg, scene, 14, false);
    CHECK(without.target.isZero(0.0));
    CHECK(snap.target.squaredNorm() > 0.0);
    for (int i = 0; i < snap.clutter.size(); ++i) {
      CHECK(without.clutter[i] == snap.clutter[i]);
      CHECK(without.noise[i] == snap.noise[i]);
      CHECK(without.interference[i] == snap.interference[i]);
    }
  }

  SUBCASE("interference appears only at its configured cells") {
    CHECK(snap.interference.squaredNorm() > 0.0);
    const Snapshot quiet = synthesize_snapshot(cfg, scene, 20, true);
    CHECK(quiet.interference.isZero(0.0));
  }
}

TEST_CASE("fixed-phase interferer equals its steering vector") {
  RadarConfig cfg;
  ClutterScene scene;
  scene.interferers = {{-0.171, 0.2, 1.0, false}};
  scene.interference_cells = {3};
  const Snapshot snap = synthesize_snapshot(cfg, scene, 3, false);
  const auto d = space_time_steering(cfg, -0.171, 0.2);
  for (int i = 0; i < snap.interference.size(); ++i)
    CHECK(snap.interference[i] == d.values[i]);
}

TEST_CASE("synthesis realizes the configured power budget") {
  RadarConfig cfg;  // input SCR -30 dB
  ClutterScene scene = basic_scene(cfg, 181);

  const int seeds = 100;
  const int nm = cfg.num_channels * cfg.num_pulses;
  double clutter_power = 0.0;
  double noise_power = 0.0;
  double target_power = 0.0;
  for (int s = 0; s < seeds; ++s) {
    scene.rng_seed = 5000 + 977 * s;
    const Snapshot snap = synthesize_snapshot(cfg, scene, 14, true);
    clutter_power += snap.clutter.squaredNorm();
    noise_power += snap.noise.squaredNorm();
    target_power = snap.target.squaredNorm();
  }
  clutter_power /= seeds;
  noise_power /= seeds;

  const double scr_db = 10.0 * std::log10(target_power / clutter_power);
  CHECK(scr_db == doctest::Approx(cfg.input_scr_db).epsilon(0.04));
  CHECK(std::abs(scr_db - cfg.input_scr_db) < 1.0);
  CHECK(noise_power / nm == doctest::Approx(scene.noise_power).epsilon(0.1));
  CHECK(target_power == doctest::Approx(nm).epsilon(1e-12));
}

TEST_CASE("cube synthesis matches per-cell synthesis") {
  RadarConfig cfg;
  ClutterScene scene = basic_scene(cfg, 21);
  scene.interferers = {{-0.3, 0.1, 5.0, true}};
  scene.interference_cells = {2};

  const auto cube = synthesize_cube(cfg, scene, 6);
  REQUIRE(cube.size() == 6);
  for (int r = 0; r < 6; ++r) {
    const Snapshot single = synthesize_snapshot(cfg, scene, r, true);
    for (int i = 0; i < single.data.size(); ++i)
      CHECK(cube[r].data[i] == single.data[i]);
  }
  // Target lives only in its own cell.
  for (int r = 0; r < 6; ++r) CHECK(cube[r].target.isZero(0.0));
}

TEST_CASE("stationary cube covariance is range stable") {
  RadarConfig cfg;
  ClutterScene scene = basic_scene(cfg, 61);
  scene.target.reset();

  const int half = 150;
  const auto cube = synthesize_cube(cfg, scene, 2 * half);
  const int nm = cfg.num_channels * cfg.num_pulses;
  CMatrix first = CMatrix::Zero(nm, nm);
  CMatrix second = CMatrix::Zero(nm, nm);
  for (int r = 0; r < half; ++r)
    first += cube[r].data * cube[r].data.adjoint();
  for (int r = half; r < 2 * half; ++r)
    second += cube[r].data * cube[r].data.adjoint();
  first /= half;
  second /= half;
  const double rel = (first - second).norm() / first.norm();
  CHECK(rel < 0.3);
}
