#include "d3sr/metrics.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include "d3sr/errors.hpp"
#include "doctest.h"

using namespace d3sr;
using std::complex;

namespace {

RadarConfig small_config() {
  RadarConfig cfg;
  cfg.num_channels = 4;
  cfg.num_pulses = 4;
  return cfg;
}

CVector random_cvector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector x(n);
  for (int i = 0; i < n; ++i) x[i] = complex<double>(g(rng), g(rng));
  return x;
}

StapFilter pick_first_sample() {
  StapFilter f;
  f.weights = CVector::Zero(9);
  f.weights[0] = 1.0;
  f.method = FilterMethod::kNone;
  return f;
}

// Target and a co-located strong interferer in the test cell of a three-cell
// cube, no ground clutter: the output ratio collapses when the assumed
// Doppler rides on the interferer and recovers away from it.
Scenario interferer_scenario() {
  Scenario sc;
  sc.radar = small_config();
  sc.num_range_cells = 3;
  sc.scene.sector = {0.2, 0.6};
  sc.scene.noise_power = 1.0;
  PointSource jam;
  jam.spatial_freq = 0.1;
  jam.doppler_freq = 0.125;
  jam.amplitude = 30.0;
  jam.random_phase = true;
  sc.scene.interferers.push_back(jam);
  sc.scene.interference_cells = {1};
  TargetSpec tgt;
  tgt.spatial_freq = 0.1;
  tgt.doppler_freq = 0.125;  // overwritten per sweep point
  tgt.amplitude = 1.0;
  tgt.range_cell = 1;
  sc.scene.target = tgt;
  return sc;
}

}  // namespace

TEST_CASE("method labels round-trip and reject junk") {
  const Method all[] = {Method::kD3srFocuss, Method::kD3srL1, Method::kD3ls,
                        Method::kLsmi, Method::kNone};
  for (const Method m : all) CHECK(parse_method(method_label(m)) == m);
  CHECK(std::string(method_label(Method::kD3srFocuss)) == "d3sr-focuss");
  CHECK(std::string(method_label(Method::kNone)) == "none");
  CHECK_THROWS_AS(parse_method("fourier"), InvalidConfig);
  CHECK_THROWS_AS(parse_method(""), InvalidConfig);
}

TEST_CASE("seed derivation separates points and trials") {
  CHECK(derive_seed(42, 3, 7) == derive_seed(42, 3, 7));
  std::set<std::uint64_t> seen;
  for (std::uint64_t p = 0; p < 4; ++p)
    for (std::uint64_t t = 0; t < 8; ++t) seen.insert(derive_seed(42, p, t));
  CHECK(seen.size() == 32);
  CHECK(derive_seed(42, 0, 0) != derive_seed(43, 0, 0));
}

TEST_CASE("output ratio matches a hand-built snapshot") {
  const auto filter = pick_first_sample();
  Snapshot snap;
  snap.data = CVector::Zero(9);
  snap.target = CVector::Zero(9);
  snap.target[0] = 2.0;
  snap.noise = CVector::Zero(9);
  snap.noise[0] = 1.0;
  snap.seed = 77;

  const auto report = output_scr(filter, snap);
  CHECK(report.target_power == 4.0);
  CHECK(report.background_power == 1.0);
  CHECK(report.scr_db == 10.0 * std::log10(4.0));
  CHECK(report.filter == FilterMethod::kNone);
  CHECK(report.seed == 77);
}

TEST_CASE("silent sides produce infinite sentinels") {
  const auto filter = pick_first_sample();
  Snapshot snap;
  snap.data = CVector::Zero(9);
  snap.noise = CVector::Zero(9);
  snap.noise[0] = 1.0;

  SUBCASE("no target means minus infinity") {
    const auto report = output_scr(filter, snap);
    CHECK(std::isinf(report.scr_db));
    CHECK(report.scr_db < 0.0);
  }
  SUBCASE("no background means plus infinity") {
    snap.noise = CVector();
    snap.target = CVector::Zero(9);
    snap.target[3] = 1.0;  // orthogonal to the filter
    const auto blocked = output_scr(filter, snap);
    CHECK(std::isinf(blocked.scr_db));
    CHECK(blocked.scr_db < 0.0);  // filter sees no target either

    snap.target = CVector::Zero(9);
    snap.target[0] = 1.0;
    const auto open = output_scr(filter, snap);
    CHECK(std::isinf(open.scr_db));
    CHECK(open.scr_db > 0.0);
  }
}

TEST_CASE("output ratio ignores filter scaling") {
  std::mt19937_64 rng(11);
  StapFilter f;
  f.weights = random_cvector(rng, 9);
  f.method = FilterMethod::kD3sr;
  Snapshot snap;
  snap.target = random_cvector(rng, 9);
  snap.clutter = random_cvector(rng, 9);
  snap.interference = random_cvector(rng, 9);
  snap.noise = random_cvector(rng, 9);
  snap.data = snap.target + snap.clutter + snap.interference + snap.noise;

  const auto base = output_scr(f, snap);
  f.weights *= complex<double>(1.7, -0.4);
  const auto scaled = output_scr(f, snap);
  CHECK(scaled.scr_db == doctest::Approx(base.scr_db).epsilon(1e-12));
}

TEST_CASE("range profile maps output powers per cell") {
  const auto filter = pick_first_sample();
  std::vector<Snapshot> cube(3);
  for (auto& s : cube) s.data = CVector::Zero(9);
  cube[1].data[0] = 3.0;
  cube[2].data[0] = complex<double>(0.0, -2.0);

  const auto profile = range_profile(filter, cube);
  REQUIRE(profile.size() == 3);
  CHECK(std::isinf(profile[0]));
  CHECK(profile[0] < 0.0);
  CHECK(profile[1] == doctest::Approx(10.0 * std::log10(9.0)).epsilon(1e-12));
  CHECK(profile[2] == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
}

TEST_CASE("adapted spectrum with the matched factory is the beam pattern") {
  RadarConfig cfg;
  cfg.num_channels = 3;
  cfg.num_pulses = 3;
  const DictionaryGrid grid(cfg, 2, 2);
  const auto dict = build_dictionary(cfg, grid);
  std::mt19937_64 rng(23);
  const CVector x = random_cvector(rng, 9);

  const auto factory = [&](const SoiSpec& soi) {
    return matched_filter(
        space_time_steering(cfg, soi.spatial_freq, soi.doppler_freq));
  };
  const Eigen::MatrixXd map = adapted_spectrum(x, grid, factory);
  REQUIRE(map.rows() == grid.num_doppler());
  REQUIRE(map.cols() == grid.num_spatial());

  const CVector fourier = fourier_spectrum(dict, x);
  for (int d = 0; d < grid.num_doppler(); ++d) {
    for (int s = 0; s < grid.num_spatial(); ++s) {
      const double expected =
          10.0 * std::log10(std::norm(fourier[grid.flat(s, d)]) / 81.0);
      CHECK(map(d, s) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("truth covariance assembles steering outer products") {
  RadarConfig cfg;
  cfg.num_channels = 3;
  cfg.num_pulses = 3;
  SceneRealization real;
  real.clutter.push_back({0.1, -0.2, complex<double>(2.0, 1.0), 3.0});
  real.interference.push_back({-0.3, 0.25, complex<double>(0.0, 0.0), 4.0});
  real.target = SceneComponent{0.0, 0.3, complex<double>(5.0, 0.0), 25.0};

  const auto phi1 = space_time_steering(cfg, 0.1, -0.2).values;
  const auto phi2 = space_time_steering(cfg, -0.3, 0.25).values;

  SUBCASE("realized draws, zero-amplitude sources drop out") {
    const auto ccm = truth_covariance(cfg, real, 0.5, false);
    CMatrix expected = 5.0 * (phi1 * phi1.adjoint());
    expected.diagonal().array() += complex<double>(0.5, 0.0);
    CHECK((ccm.r - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ccm.loading == 0.5);
    CHECK((ccm.r - ccm.r.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("ensemble powers replace the draws") {
    const auto ccm = truth_covariance(cfg, real, 0.5, true);
    CMatrix expected =
        3.0 * (phi1 * phi1.adjoint()) + 4.0 * (phi2 * phi2.adjoint());
    expected.diagonal().array() += complex<double>(0.5, 0.0);
    CHECK((ccm.r - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("the target never enters") {
    const auto ccm = truth_covariance(cfg, real, 0.5, false);
    CHECK(std::abs(ccm.r.trace()) < 5.0 * 9.0 + 0.5 * 9.0 + 1e-9);
  }
  CHECK_THROWS_AS(truth_covariance(cfg, real, 0.0, false), InvalidConfig);
}

TEST_CASE("training cells come nearest-first with ties toward lower index") {
  std::vector<Snapshot> cube(10);
  for (int i = 0; i < 10; ++i) cube[i].range_cell = i;

  const auto five = lsmi_training_set(cube, 4, {6}, 5);
  REQUIRE(five.size() == 5);
  const int expected[] = {3, 5, 2, 1, 7};
  for (int i = 0; i < 5; ++i) CHECK(five[i].range_cell == expected[i]);

  const auto all = lsmi_training_set(cube, 4, {6}, 100);
  CHECK(all.size() == 8);  // everything but the test cell and the exclusion
  CHECK(all[0].range_cell == 3);
  CHECK(all[7].range_cell == 9);

  CHECK_THROWS_AS(lsmi_training_set(cube, 4, {}, 0), InvalidConfig);
  CHECK_THROWS_AS(lsmi_training_set(cube, 12, {}, 2), OutOfRange);
  std::vector<Snapshot> pair(2);
  CHECK_THROWS_AS(lsmi_training_set(pair, 0, {1}, 1), InvalidConfig);
}

TEST_CASE("pipeline dispatch reaches every filter family") {
  const auto cfg = small_config();
  ClutterScene scene;
  scene.sector = {0.2, 0.6};
  TargetSpec tgt;
  tgt.spatial_freq = 0.1;
  tgt.doppler_freq = 0.3;
  tgt.amplitude = 10.0;
  tgt.range_cell = 0;
  scene.target = tgt;
  scene.rng_seed = 5;
  const auto snap = synthesize_snapshot(cfg, scene, 0, true);
  const SoiSpec soi{0.1, 0.3, 3, 3};

  PipelineOptions opts;
  opts.grid_rho_s = 2;
  opts.grid_rho_t = 2;
  opts.subaperture_channels = 3;
  opts.subaperture_pulses = 3;

  const DictionaryGrid grid(cfg, 2, 2);
  const auto dict = build_dictionary(cfg, grid);

  SUBCASE("matched") {
    opts.method = Method::kNone;
    const auto f = method_filter(cfg, opts, snap, {}, nullptr, soi);
    CHECK(f.method == FilterMethod::kNone);
    CHECK(f.soi.spatial_freq == 0.1);
    CHECK(f.soi.doppler_freq == 0.3);
  }
  SUBCASE("subaperture least squares") {
    opts.method = Method::kD3ls;
    const auto f = method_filter(cfg, opts, snap, {}, nullptr, soi);
    CHECK(f.method == FilterMethod::kD3ls);
    CHECK(f.weights.size() == 9);
    CHECK(f.subaperture_channels == 3);
  }
  SUBCASE("sample covariance") {
    opts.method = Method::kLsmi;
    std::mt19937_64 rng(31);
    std::vector<Snapshot> training(3);
    for (auto& t : training) t.data = random_cvector(rng, 16);
    const auto f = method_filter(cfg, opts, snap, training, nullptr, soi);
    CHECK(f.method == FilterMethod::kLsmi);
    CHECK(std::abs(f.weights.dot(space_time_steering(cfg, 0.1, 0.3).values) -
                   complex<double>(1.0, 0.0)) < 1e-10);
  }
  SUBCASE("sparse spectrum estimate") {
    opts.method = Method::kD3srFocuss;
    const auto f = method_filter(cfg, opts, snap, {}, &dict, soi);
    CHECK(f.method == FilterMethod::kD3sr);
    CHECK(f.weights.size() == 16);
    CHECK(f.weights.allFinite());
  }
  SUBCASE("sparse methods demand a dictionary") {
    opts.method = Method::kD3srFocuss;
    CHECK_THROWS_AS(method_filter(cfg, opts, snap, {}, nullptr, soi),
                    InvalidConfig);
    opts.method = Method::kD3srL1;
    CHECK_THROWS_AS(method_filter(cfg, opts, snap, {}, nullptr, soi),
                    InvalidConfig);
  }
}

TEST_CASE("matched sweep repeats bit-identically and shows the notch") {
  const auto sc = interferer_scenario();
  PipelineOptions opts;
  opts.method = Method::kNone;
  const std::vector<double> axis = {0.125, 0.4};

  const auto a = mdv_sweep(sc, opts, axis, 3, 99);
  const auto b = mdv_sweep(sc, opts, axis, 3, 99);
  REQUIRE(a.mean_scr_db.size() == 2);
  CHECK(a.trials == 3);
  CHECK(a.method == Method::kNone);
  CHECK(a.doppler_axis == axis);
  for (int i = 0; i < 2; ++i) {
    CHECK(a.mean_scr_db[i] == b.mean_scr_db[i]);
    CHECK(a.failures[i] == 0);
  }
  // Riding on the interferer costs tens of dB against the clear point.
  CHECK(a.mean_scr_db[0] < a.mean_scr_db[1] - 10.0);
}

TEST_CASE("sample covariance sweep trains on the neighbor cells") {
  const auto sc = interferer_scenario();
  PipelineOptions opts;
  opts.method = Method::kLsmi;
  opts.lsmi_training = 2;  // all the cube offers outside the test cell

  const auto curve = mdv_sweep(sc, opts, {0.4}, 2, 7);
  REQUIRE(curve.mean_scr_db.size() == 1);
  CHECK(curve.failures[0] == 0);
  CHECK(std::isfinite(curve.mean_scr_db[0]));
}

TEST_CASE("failed solves are counted and excluded") {
  const auto sc = interferer_scenario();
  PipelineOptions opts;
  opts.method = Method::kD3srFocuss;
  opts.grid_rho_s = 2;
  opts.grid_rho_t = 2;
  opts.focuss.max_iterations = 1;
  opts.focuss.convergence_tol = 1e-12;

  const auto curve = mdv_sweep(sc, opts, {0.2}, 2, 3);
  CHECK(curve.failures[0] == 2);
  CHECK(curve.trials == 2);
  CHECK(std::isnan(curve.mean_scr_db[0]));
}

TEST_CASE("sweep validates its inputs") {
  auto sc = interferer_scenario();
  PipelineOptions opts;
  opts.method = Method::kNone;

  CHECK_THROWS_AS(mdv_sweep(sc, opts, {0.1}, 0, 1), InvalidConfig);
  CHECK_THROWS_AS(mdv_sweep(sc, opts, {}, 1, 1), InvalidConfig);
  CHECK_THROWS_AS(mdv_sweep(sc, opts, {0.2, 0.2}, 1, 1), InvalidConfig);

  auto no_target = sc;
  no_target.scene.target.reset();
  CHECK_THROWS_AS(mdv_sweep(no_target, opts, {0.1}, 1, 1), InvalidConfig);

  auto outside = sc;
  outside.scene.target->range_cell = 5;
  CHECK_THROWS_AS(mdv_sweep(outside, opts, {0.1}, 1, 1), OutOfRange);
}
