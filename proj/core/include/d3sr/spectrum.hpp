#pragma once

#include <string>
#include <utility>
#include <vector>

#include "d3sr/errors.hpp"
#include "d3sr/scene.hpp"

namespace d3sr {

// Sparse angle-Doppler estimate over a full grid.  amplitudes has one entry
// per grid cell and is zero off support; support holds the sorted flat
// indices of the nonzero cells.
struct SparseSpectrum {
  CVector amplitudes;
  std::vector<int> support;
  int iteration_count = 0;
  int attempts = 1;
  double residual_norm = 0.0;
};

// Raised when an iterative solver runs out of iterations; `best` carries the
// last usable iterate so callers can log or salvage it.
struct DidNotConverge : Error {
  SparseSpectrum best;
  DidNotConverge(const std::string& what, SparseSpectrum state)
      : Error(what), best(std::move(state)) {}
};

}  // namespace d3sr
