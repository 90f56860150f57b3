#include "d3sr/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "d3sr/errors.hpp"
#include "doctest.h"

using namespace d3sr;

namespace {
constexpr double kPi = std::numbers::pi;

RadarConfig table_config() { return RadarConfig{}; }
}  // namespace

TEST_CASE("radar config validation") {
  RadarConfig cfg = table_config();
  CHECK(validate(cfg).empty());

  SUBCASE("bad channel count") {
    cfg.num_channels = 1;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
  }
  SUBCASE("bad pri") {
    cfg.pri = 0.0;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
  }
  SUBCASE("wide spacing warns but passes") {
    cfg.spacing = 0.2;
    const auto warnings = validate(cfg);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("alias") != std::string::npos);
  }
}

TEST_CASE("elevation cosine from slant range") {
  CHECK(elevation_cos(3000.0, 5000.0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(elevation_cos(3000.0, 3000.0) == 0.0);
  CHECK(elevation_cos(3000.0, 1e12) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(elevation_cos(3000.0, 2999.0), RangeBelowHeight);

  // Strictly increasing in range beyond the nadir cell.
  const RadarConfig cfg = table_config();
  double prev = elevation_cos_from_range(cfg, 0);
  for (int r = 1; r < 200; ++r) {
    const double cur = elevation_cos_from_range(cfg, r);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("doppler from azimuth and elevation") {
  const RadarConfig cfg = table_config();
  CHECK(doppler_from_angles(cfg, 0.0, 1.0) == doctest::Approx(2000.0));
  CHECK(doppler_from_angles(cfg, kPi / 3.0, 0.8) ==
        doctest::Approx(800.0).epsilon(1e-12));
}

TEST_CASE("look angle cosine") {
  RadarConfig cfg = table_config();
  cfg.crab = 0.0;
  CHECK(look_angle_cos(cfg, 0.4, 0.9) ==
        doctest::Approx(std::cos(0.4) * 0.9).epsilon(1e-15));
  cfg.crab = kPi / 2.0;
  CHECK(look_angle_cos(cfg, 0.4, 0.9) ==
        doctest::Approx(std::sin(0.4) * 0.9).epsilon(1e-12));
}

TEST_CASE("doppler recovered from the look direction") {
  RadarConfig cfg = table_config();

  SUBCASE("crabbed, boresight, zero discriminant") {
    cfg.crab = kPi / 4.0;
    const double plus =
        doppler_from_look(cfg, 1.0, 1.0, DopplerBranch::Plus);
    const double minus =
        doppler_from_look(cfg, 1.0, 1.0, DopplerBranch::Minus);
    CHECK(plus == doctest::Approx(1414.21).epsilon(1e-5));
    CHECK(minus == doctest::Approx(plus).epsilon(1e-12));
  }

  SUBCASE("inconsistent cone/elevation pair throws") {
    cfg.crab = kPi / 4.0;
    CHECK_THROWS_AS(
        doppler_from_look(cfg, 0.9, 0.5, DopplerBranch::Plus),
        InconsistentGeometry);
  }

  SUBCASE("small negative discriminant is clamped") {
    cfg.crab = kPi / 4.0;
    // look_cos barely above elevation_cos: disc ~ -1e-12, inside tolerance.
    const double e = 0.6;
    const double c = std::sqrt(e * e + 1e-12);
    CHECK_NOTHROW(doppler_from_look(cfg, c, e, DopplerBranch::Plus, 1e-9));
  }

  SUBCASE("zero crab collapses both branches to the cone-angle line") {
    cfg.crab = 0.0;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double e = 0.05 + 0.95 * unit(rng);
      const double c = (2.0 * unit(rng) - 1.0) * e;
      const double expected = 2.0 * cfg.velocity / cfg.wavelength * c;
      const double got_p = doppler_from_look(cfg, c, e, DopplerBranch::Plus);
      const double got_m = doppler_from_look(cfg, c, e, DopplerBranch::Minus);
      CHECK(std::abs(got_p - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
      CHECK(std::abs(got_m - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }

  SUBCASE("quarter-turn crab recovers the azimuth-chain Doppler magnitude") {
    cfg.crab = kPi / 2.0;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double e = 0.05 + 0.95 * unit(rng);
      const double az = kPi * unit(rng);
      const double c = look_angle_cos(cfg, az, e);
      const double expected = std::abs(doppler_from_angles(cfg, az, e));
      const double got =
          std::abs(doppler_from_look(cfg, c, e, DopplerBranch::Plus));
      CHECK(std::abs(got - expected) <= 1e-9 * std::max(1.0, expected));
    }
  }

  SUBCASE("azimuth chain matches the branch-resolved inversion") {
    cfg.crab = kPi / 4.0;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double e = 0.05 + 0.95 * unit(rng);
      const double az = cfg.crab + kPi * unit(rng);  // ahead of the array axis
      const double c = look_angle_cos(cfg, az, e);
      const auto branch = std::sin(az - cfg.crab) > 0.0 ? DopplerBranch::Minus
                                                        : DopplerBranch::Plus;
      const double expected = doppler_from_angles(cfg, az, e);
      const double got = doppler_from_look(cfg, c, e, branch);
      CHECK(std::abs(got - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("clutter ridge sampling") {
  RadarConfig cfg = table_config();
  const AngularSector sector{20.0 * kPi / 180.0, 60.0 * kPi / 180.0};

  SUBCASE("side-looking ridge follows the cone-angle line") {
    cfg.crab = 0.0;
    const auto ridge = clutter_ridge(cfg, 14, sector, 256);
    REQUIRE(ridge.size() == 256);
    for (const auto& p : ridge) {
      const double expected = 2.0 * cfg.velocity / cfg.wavelength * p.look_cos;
      CHECK(std::abs(p.doppler_hz - expected) <=
            1e-12 * std::max(1.0, std::abs(expected)));
    }
  }

  SUBCASE("nadir cell has zero Doppler everywhere") {
    cfg.crab = kPi / 4.0;
    for (const auto& p : clutter_ridge(cfg, 0, sector, 64)) {
      CHECK(p.doppler_hz == 0.0);
    }
  }

  SUBCASE("crabbed ridges are range dependent") {
    cfg.crab = kPi / 4.0;
    const auto a = clutter_ridge(cfg, 10, sector, 64);
    const auto b = clutter_ridge(cfg, 90, sector, 64);
    bool differs = false;
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i].doppler_freq != b[i].doppler_freq ||
          a[i].spatial_freq != b[i].spatial_freq) {
        differs = true;
        break;
      }
    }
    CHECK(differs);
  }

  SUBCASE("ridge Doppler never exceeds the platform line rate") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      RadarConfig c = table_config();
      c.crab = unit(rng) * kPi / 2.0;
      const double lo = unit(rng) * kPi;
      const AngularSector s{lo, lo + 0.1 + unit(rng) * (kPi - lo - 0.1)};
      const int cell = static_cast<int>(unit(rng) * 100);
      for (const auto& p : clutter_ridge(c, cell, s, 97)) {
        CHECK(std::abs(p.doppler_hz) <=
              2.0 * c.velocity / c.wavelength * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("ridge cell masks") {
  RadarConfig cfg = table_config();
  cfg.crab = 0.0;
  const DictionaryGrid grid(cfg, 6, 6);
  const AngularSector sector{20.0 * kPi / 180.0, 60.0 * kPi / 180.0};

  const auto base = ridge_cells(cfg, grid, 14, sector, 0);
  const auto fat = ridge_cells(cfg, grid, 14, sector, 1);
  REQUIRE(!base.empty());
  CHECK(fat.size() > base.size());
  for (int cell : base) {
    CHECK(cell >= 0);
    CHECK(cell < grid.size());
    // With half-wavelength spacing and this waveform, the side-looking ridge
    // sits on the grid diagonal: spatial and Doppler fractions coincide.
    const auto [si, di] = grid.coords(cell);
    CHECK(si == di);
  }
}
