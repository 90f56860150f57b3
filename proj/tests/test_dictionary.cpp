#include "d3sr/dictionary.hpp"

#include <cmath>
#include <complex>

#include "d3sr/errors.hpp"
#include "doctest.h"

using namespace d3sr;
using std::complex;

TEST_CASE("dictionary enumerates the grid in flat order") {
  RadarConfig cfg;
  cfg.num_channels = 2;
  cfg.num_pulses = 2;
  const DictionaryGrid grid(cfg, 1, 1);  // 2x2 grid at {-0.5, 0.0}
  const auto dict = build_dictionary(cfg, grid);

  REQUIRE(dict.num_atoms() == 4);
  REQUIRE(dict.snapshot_size() == 4);
  const auto shape = grid.shape();
  for (int d = 0; d < 2; ++d) {
    for (int s = 0; s < 2; ++s) {
      const auto sv = space_time_steering(cfg, grid.spatial_axis()[s],
                                          grid.doppler_axis()[d]);
      const CVector col = dict.atom(shape.flat(s, d));
      for (int i = 0; i < 4; ++i) CHECK(col[i] == sv.values[i]);
    }
  }
  // Atom at (f_sp, f_d) = (-0.5, 0.0): spatial phase alternates, no Doppler.
  const CVector a = dict.atom(shape.flat(0, 1));
  CHECK(std::abs(a[0] - complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(a[1] - complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(a[2] - complex<double>(-1, 0)) < 1e-12);
  CHECK(std::abs(a[3] - complex<double>(-1, 0)) < 1e-12);
}

TEST_CASE("atoms are unit modulus and on-grid correlation peaks at NM") {
  RadarConfig cfg;
  const DictionaryGrid grid(cfg, 6, 6);
  const auto dict = build_dictionary(cfg, grid);
  const int nm = cfg.num_channels * cfg.num_pulses;
  REQUIRE(dict.num_atoms() == grid.shape().size());

  for (int j : {0, 17, 591, 2000, dict.num_atoms() - 1}) {
    const CVector col = dict.atom(j);
    for (int i = 0; i < col.size(); ++i)
      CHECK(std::abs(std::abs(col[i]) - 1.0) < 1e-14);
    const CVector corr = fourier_spectrum(dict, col);
    CHECK(std::abs(corr[j] - complex<double>(nm, 0)) < 1e-9);
    // Self-correlation dominates every other cell.
    for (int k = 0; k < corr.size(); ++k)
      if (k != j) CHECK(std::abs(corr[k]) < nm - 1e-6);
  }
}

TEST_CASE("matched-filter spectrum of a two-atom mixture") {
  RadarConfig cfg;
  const DictionaryGrid grid(cfg, 6, 6);
  const auto dict = build_dictionary(cfg, grid);
  const auto shape = grid.shape();
  const int nm = cfg.num_channels * cfg.num_pulses;

  const int ja = shape.flat(10, 20);
  const int jb = shape.flat(50, 60);
  const complex<double> ca(2.0, 1.0);
  const complex<double> cb(0.0, -3.0);
  const CVector x = ca * dict.atom(ja) + cb * dict.atom(jb);

  const CVector spec = fourier_spectrum(dict, x);
  // Independent oracle: direct correlation sums.
  for (int j : {ja, jb, shape.flat(0, 0), shape.flat(33, 44)}) {
    complex<double> acc(0, 0);
    for (int i = 0; i < nm; ++i)
      acc += std::conj(dict.atoms(i, j)) * x[i];
    CHECK(std::abs(spec[j] - acc) < 1e-9);
  }
  CHECK(std::abs(spec[ja] - ca * static_cast<double>(nm)) <
        std::abs(cb) * nm * 0.2);
}

TEST_CASE("spectrum rejects mismatched snapshot length") {
  RadarConfig cfg;
  const DictionaryGrid grid(cfg, 2, 2);
  const auto dict = build_dictionary(cfg, grid);
  CHECK_THROWS_AS(fourier_spectrum(dict, CVector::Zero(10)),
                  DimensionMismatch);
}

TEST_CASE("grid cell lookup rounds to the nearest center") {
  RadarConfig cfg;
  const DictionaryGrid grid(cfg, 6, 6);
  // Axis step is 1/72; the cell center nearest to an off-grid frequency.
  const int flat = grid.cell_index(0.2001, 0.2999);
  const auto [si, di] = grid.shape().coords(flat);
  CHECK(std::abs(grid.spatial_axis()[si] - 0.2001) <= 0.5 / 72 + 1e-12);
  CHECK(std::abs(grid.doppler_axis()[di] - 0.2999) <= 0.5 / 72 + 1e-12);
  CHECK_THROWS_AS(grid.cell_index(0.7, 0.0), OutOfRange);
}
