#include "d3sr/l1.hpp"

#include <cmath>

#include "d3sr/focuss.hpp"  // tsvd_solve

namespace d3sr {

namespace {

void check_options(const L1Options& o) {
  if (o.max_fista_iterations < 1)
    throw InvalidConfig("max_fista_iterations must be >= 1");
  if (!(o.lambda_shrink > 0.0 && o.lambda_shrink < 1.0))
    throw InvalidConfig("lambda_shrink must lie in (0, 1)");
  if (o.max_continuation_steps < 1)
    throw InvalidConfig("max_continuation_steps must be >= 1");
  if (!(o.kkt_tol > 0.0)) throw InvalidConfig("kkt_tol must be positive");
  if (!(o.support_threshold > 0.0 && o.support_threshold < 1.0))
    throw InvalidConfig("support_threshold must lie in (0, 1)");
}

// Largest squared singular value via power iteration on A^H A.
double squared_operator_norm(const CMatrix& a) {
  CVector v = CVector::Ones(a.cols());
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    CVector w = a.adjoint() * (a * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    if (std::abs(n - lambda) <= 1e-12 * n) return n;
    lambda = n;
  }
  return lambda;
}

CVector soft_threshold(const CVector& z, double level) {
  CVector out(z.size());
  for (int i = 0; i < z.size(); ++i) {
    const double m = std::abs(z[i]);
    out[i] = m > level ? z[i] * ((m - level) / m) : std::complex<double>(0, 0);
  }
  return out;
}

double kkt_violation(const CMatrix& a, const CVector& x, const CVector& sol,
                     double lam) {
  const CVector g = a.adjoint() * (x - a * sol);
  double viol = 0.0;
  for (int i = 0; i < sol.size(); ++i) {
    const double m = std::abs(sol[i]);
    if (m > 0.0)
      viol = std::max(viol, std::abs(g[i] - lam * sol[i] / m));
    else
      viol = std::max(viol, std::max(std::abs(g[i]) - lam, 0.0));
  }
  return viol;
}

int fista(const CMatrix& A, const CVector& x, double lam, double lipschitz,
          CVector& a, const L1Options& opts) {
  CVector prev = a;
  CVector y = a;
  double t = 1.0;
  int it = 1;
  for (; it <= opts.max_fista_iterations; ++it) {
    const CVector grad = A.adjoint() * (A * y - x);
    const CVector next = soft_threshold(y - grad / lipschitz, lam / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - prev);
    prev = next;
    a = next;
    t = t_next;
    if (it % 10 == 0 && kkt_violation(A, x, a, lam) <= opts.kkt_tol * lam)
      break;
  }
  return std::min(it, opts.max_fista_iterations);
}

}  // namespace

SparseSpectrum l1_solve(const CMatrix& atoms, const GridShape& shape,
                        const CVector& x, const L1Options& opts) {
  check_options(opts);
  if (atoms.cols() != shape.size())
    throw DimensionMismatch("dictionary width does not match grid size");
  if (x.size() != atoms.rows())
    throw DimensionMismatch("snapshot length does not match dictionary rows");

  SparseSpectrum spec;
  spec.amplitudes = CVector::Zero(shape.size());

  const double xn = x.norm();
  const double eps = opts.epsilon > 0.0 ? opts.epsilon : 1e-10 * xn;
  if (xn <= eps) {
    // The zero spectrum already fits within the budget.
    spec.residual_norm = xn;
    return spec;
  }

  const double lipschitz = 1.01 * squared_operator_norm(atoms);
  if (lipschitz == 0.0) throw NumericalBreakdown("dictionary is zero");
  const double lam0 = (atoms.adjoint() * x).cwiseAbs().maxCoeff();

  CVector a = CVector::Zero(shape.size());
  int total_iters = 0;
  double lam_hi = lam0;  // residual above budget here (solution is zero)
  double lam = lam0 * opts.lambda_shrink;
  double residual = xn;
  bool feasible = false;
  double lam_lo = 0.0;
  CVector a_feasible;

  for (int step = 0; step < opts.max_continuation_steps; ++step) {
    total_iters += fista(atoms, x, lam, lipschitz, a, opts);
    residual = (x - atoms * a).norm();
    if (residual <= eps) {
      feasible = true;
      lam_lo = lam;
      a_feasible = a;
      break;
    }
    lam_hi = lam;
    lam *= opts.lambda_shrink;
  }
  if (!feasible)
    throw Infeasible("residual budget unreachable with this dictionary");

  // Walk back up so the solution sits just inside the budget instead of
  // overfitting far below it (only meaningful for a real budget).
  if (opts.epsilon > 0.0 && residual < 0.99 * eps) {
    for (int b = 0; b < 40 && (residual < 0.99 * eps || residual > eps); ++b) {
      // A resolved bracket cannot move the solution any further; the band
      // may be unreachable outright when the support changes discontinuously.
      if (lam_hi <= 1.01 * lam_lo) break;
      const double mid = std::sqrt(lam_lo * lam_hi);
      total_iters += fista(atoms, x, mid, lipschitz, a, opts);
      residual = (x - atoms * a).norm();
      if (residual > eps) {
        lam_hi = mid;
      } else {
        lam_lo = mid;
        a_feasible = a;
      }
    }
    if (residual > eps) {
      a = a_feasible;
      residual = (x - atoms * a).norm();
    }
  }

  const double peak = a.cwiseAbs().maxCoeff();
  if (peak == 0.0) {
    spec.residual_norm = xn;
    return spec;
  }
  const double th = opts.support_threshold * peak;
  for (int i = 0; i < a.size(); ++i)
    if (std::abs(a[i]) > th) spec.support.push_back(i);

  CMatrix sub(atoms.rows(), spec.support.size());
  for (std::size_t k = 0; k < spec.support.size(); ++k)
    sub.col(static_cast<int>(k)) = atoms.col(spec.support[k]);

  if (opts.refit) {
    const CVector amp = tsvd_solve(sub, x, opts.tsvd_level);
    for (std::size_t k = 0; k < spec.support.size(); ++k)
      spec.amplitudes[spec.support[k]] = amp[static_cast<int>(k)];
    spec.residual_norm = (x - sub * amp).norm();
  } else {
    for (int i : spec.support) spec.amplitudes[i] = a[i];
    spec.residual_norm = (x - atoms * spec.amplitudes).norm();
  }
  spec.iteration_count = total_iters;
  return spec;
}

SparseSpectrum l1_solve(const Dictionary& dict, const CVector& x,
                        const L1Options& opts) {
  return l1_solve(dict.atoms, dict.grid.shape(), x, opts);
}

}  // namespace d3sr
