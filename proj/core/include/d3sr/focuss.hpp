#pragma once

#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

#include "d3sr/dictionary.hpp"
#include "d3sr/grid.hpp"
#include "d3sr/spectrum.hpp"

namespace d3sr {

struct FocussOptions {
  // Cells whose smoothed envelope falls below this fraction of the peak
  // amplitude are dropped each iteration; the same fraction selects the
  // final support before the least-squares refit.
  double prune_threshold = 0.01;
  // Relative iterate change that counts as converged.
  double convergence_tol = 1e-3;
  int max_iterations = 50;
  // Singular values below tsvd_level * sigma_max are discarded in the
  // weighted pseudoinverse and in the refit.
  double tsvd_level = 1e-3;
  // Neighborhood radius (in cells) for envelope smoothing; sqrt(2) takes
  // the eight surrounding cells.
  double neighborhood_radius = std::numbers::sqrt2;
  // A solution whose envelope correlates worse than this with the
  // matched-filter envelope is treated as collapsed and restarted.
  double overfocal_correlation_min = 0.5;
  int max_restarts = 3;
  // Restarts perturb the initial weights by +/-10% using this seed.
  std::uint64_t restart_seed = 0x9e3779b97f4a7c15ull;
};

// Truncated-SVD pseudoinverse solve: minimum-norm least squares with
// singular values below level * sigma_max discarded.  Throws
// NumericalBreakdown when nothing is left to invert.
CVector tsvd_solve(const CMatrix& a, const CVector& b, double level);

// Magnitude envelope averaged over each cell's grid neighborhood within the
// given radius:  |a_i + sum of neighbors| / (count + 1).
Eigen::VectorXd smoothed_envelope(const CVector& a, const GridShape& shape,
                                  double radius);

// Pearson correlation between two envelopes, restricted to the cells holding
// the largest reference entries (top `top_fraction` by count).  Returns 0
// when the candidate is flat over those cells and 1 when the reference is.
double envelope_correlation(const Eigen::VectorXd& candidate,
                            const Eigen::VectorXd& reference,
                            double top_fraction = 0.1);

// Reweighted minimum-norm sparse recovery with envelope-guided pruning and
// a final least-squares refit on the surviving support.
SparseSpectrum focuss_solve(const CMatrix& atoms, const GridShape& shape,
                            const CVector& x, const FocussOptions& opts = {});
SparseSpectrum focuss_solve(const Dictionary& dict, const CVector& x,
                            const FocussOptions& opts = {});

}  // namespace d3sr
