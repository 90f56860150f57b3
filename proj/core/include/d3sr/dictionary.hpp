#pragma once

#include "d3sr/grid.hpp"
#include "d3sr/radar_config.hpp"
#include "d3sr/scene.hpp"

namespace d3sr {

// Overcomplete angle-Doppler basis: one space-time steering vector per grid
// cell, columns in grid-flat order (Doppler-major).
struct Dictionary {
  CMatrix atoms;  // (N*M) x grid.size()
  DictionaryGrid grid;

  int num_atoms() const { return static_cast<int>(atoms.cols()); }
  int snapshot_size() const { return static_cast<int>(atoms.rows()); }
  CVector atom(int flat) const { return atoms.col(flat); }
};

Dictionary build_dictionary(const RadarConfig& cfg, const DictionaryGrid& grid);

// Conventional (matched-filter) spectrum: correlate every atom with x.
CVector fourier_spectrum(const Dictionary& dict, const CVector& x);

}  // namespace d3sr
