#pragma once

// Exhaustive minimum-cardinality reference solver for small systems: every
// support of size 1..kmax is least-squares fitted; the smallest support
// size with a residual inside tol wins, best residual first.

#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "d3sr/scene.hpp"

namespace testsupport {

struct OracleSolution {
  std::vector<int> support;   // sorted
  d3sr::CVector amplitudes;   // one per support entry
  double residual = 0.0;
  double l1_norm = 0.0;
};

inline std::optional<OracleSolution> exhaustive_l0(const d3sr::CMatrix& atoms,
                                                   const d3sr::CVector& x,
                                                   int kmax, double tol) {
  const int n = static_cast<int>(atoms.cols());
  for (int k = 1; k <= std::min(kmax, n); ++k) {
    std::optional<OracleSolution> best;
    std::vector<int> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      d3sr::CMatrix sub(atoms.rows(), k);
      for (int i = 0; i < k; ++i) sub.col(i) = atoms.col(comb[i]);
      Eigen::CompleteOrthogonalDecomposition<d3sr::CMatrix> cod(sub);
      const d3sr::CVector amp = cod.solve(x);
      const double res = (x - sub * amp).norm();
      if (res <= tol && (!best || res < best->residual)) {
        best = OracleSolution{comb, amp, res, amp.cwiseAbs().sum()};
      }
      int i = k - 1;
      while (i >= 0 && comb[i] == n - k + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace testsupport
