#pragma once

#include "d3sr/dictionary.hpp"
#include "d3sr/grid.hpp"
#include "d3sr/spectrum.hpp"

namespace d3sr {

struct L1Options {
  // Residual budget: minimize ||a||_1 subject to ||x - Psi a|| <= epsilon.
  // Non-positive means "fit essentially exactly" (budget 1e-10 * ||x||).
  double epsilon = 0.0;
  int max_fista_iterations = 3000;
  // Continuation: the shrinkage weight starts at its shut-off value and is
  // multiplied by this factor until the residual budget is met.
  double lambda_shrink = 0.5;
  int max_continuation_steps = 60;
  // Relative first-order stationarity target per continuation step.  Support
  // identification saturates well before machine-tight KKT residuals, and
  // the closing refit recomputes amplitudes anyway.
  double kkt_tol = 1e-4;
  // Cells below this fraction of the peak are dropped before the refit.
  double support_threshold = 1e-6;
  double tsvd_level = 1e-3;
  bool refit = true;
};

// Convex sparse recovery: FISTA with a complex soft-threshold, warm-started
// over a decreasing shrinkage weight, then bisected so the residual lands
// just inside the budget.  The reported amplitudes are least-squares refit
// on the recovered support unless refit is disabled.
SparseSpectrum l1_solve(const CMatrix& atoms, const GridShape& shape,
                        const CVector& x, const L1Options& opts = {});
SparseSpectrum l1_solve(const Dictionary& dict, const CVector& x,
                        const L1Options& opts = {});

}  // namespace d3sr
