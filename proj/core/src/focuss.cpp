#include "d3sr/focuss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace d3sr {

namespace {

void check_options(const FocussOptions& o) {
  if (!(o.prune_threshold > 0.0 && o.prune_threshold < 1.0))
    throw InvalidConfig("prune_threshold must lie in (0, 1)");
  if (!(o.convergence_tol > 0.0))
    throw InvalidConfig("convergence_tol must be positive");
  if (o.max_iterations < 1) throw InvalidConfig("max_iterations must be >= 1");
  if (!(o.tsvd_level > 0.0 && o.tsvd_level < 1.0))
    throw InvalidConfig("tsvd_level must lie in (0, 1)");
  if (!(o.neighborhood_radius >= 0.0))
    throw InvalidConfig("neighborhood_radius must be non-negative");
  if (o.max_restarts < 0) throw InvalidConfig("max_restarts must be >= 0");
}

std::vector<int> support_of(const CVector& a) {
  std::vector<int> idx;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != std::complex<double>(0.0, 0.0)) idx.push_back(i);
  return idx;
}

// Cells the reweighting can no longer move (the active subsystem turns
// overdetermined and the weights cancel out of the unique least-squares
// solution) sit at the per-dimension noise level; amplitudes below this
// many residual standard deviations are treated as noise fit.
constexpr double kNoiseSignificance = 5.0;

// Least-squares refit on the cells of the final iterate that carry at least
// prune_threshold of the peak amplitude; cells whose refit amplitude stays
// indistinguishable from the residual noise level are dropped and the fit
// repeated until the support is stable.
SparseSpectrum debiased_refit(const CMatrix& atoms, const CVector& x,
                              const CVector& a, const FocussOptions& opts) {
  SparseSpectrum spec;
  spec.amplitudes = CVector::Zero(a.size());

  const double peak = a.cwiseAbs().maxCoeff();
  if (peak == 0.0) {
    spec.residual_norm = x.norm();
    return spec;
  }
  const double th = opts.prune_threshold * peak;
  std::vector<int> support;
  for (int i = 0; i < a.size(); ++i)
    if (std::abs(a[i]) >= th) support.push_back(i);

  const int m = static_cast<int>(atoms.rows());
  CVector amp;
  double residual = 0.0;
  for (int pass = 0; pass < 8; ++pass) {
    CMatrix sub(m, support.size());
    for (std::size_t k = 0; k < support.size(); ++k)
      sub.col(static_cast<int>(k)) = atoms.col(support[k]);
    amp = tsvd_solve(sub, x, opts.tsvd_level);
    residual = (x - sub * amp).norm();

    const double level = kNoiseSignificance * residual / std::sqrt(m);
    const double refit_th = opts.prune_threshold * amp.cwiseAbs().maxCoeff();
    std::vector<int> keep;
    for (std::size_t k = 0; k < support.size(); ++k) {
      const double mag = std::abs(amp[static_cast<int>(k)]);
      if (mag >= refit_th && mag * sub.col(static_cast<int>(k)).norm() >= level)
        keep.push_back(support[k]);
    }
    if (keep.empty()) {
      int arg = 0;
      amp.cwiseAbs().maxCoeff(&arg);
      keep.push_back(support[arg]);
    }
    if (keep.size() == support.size()) break;
    support.swap(keep);
  }
  if (static_cast<std::size_t>(amp.size()) != support.size()) {
    CMatrix sub(m, support.size());
    for (std::size_t k = 0; k < support.size(); ++k)
      sub.col(static_cast<int>(k)) = atoms.col(support[k]);
    amp = tsvd_solve(sub, x, opts.tsvd_level);
    residual = (x - sub * amp).norm();
  }

  spec.support = support;
  for (std::size_t k = 0; k < support.size(); ++k)
    spec.amplitudes[support[k]] = amp[static_cast<int>(k)];
  spec.residual_norm = residual;
  return spec;
}

}  // namespace

CVector tsvd_solve(const CMatrix& a, const CVector& b, double level) {
  const auto m = a.rows();
  const auto n = a.cols();
  if (b.size() != m) throw DimensionMismatch("rhs length does not match rows");
  if (n == 0) return CVector::Zero(0);

  // Work in the smaller Gram space; eigenvalues of A^H A (or A A^H) are the
  // squared singular values.
  const bool tall = n <= m;
  const CMatrix gram = tall ? CMatrix(a.adjoint() * a) : CMatrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  if (eig.info() != Eigen::Success)
    throw NumericalBreakdown("eigendecomposition failed");

  const auto& vals = eig.eigenvalues();
  const double lmax = vals.maxCoeff();
  if (!(lmax > 0.0))
    throw NumericalBreakdown("matrix has no nonzero singular values");
  const double cut = level * level * lmax;

  int kept = 0;
  if (tall) {
    const CVector rhs = a.adjoint() * b;
    CVector sol = CVector::Zero(n);
    for (int i = 0; i < vals.size(); ++i) {
      if (vals[i] < cut) continue;
      const auto v = eig.eigenvectors().col(i);
      sol += v * (v.dot(rhs) / vals[i]);
      ++kept;
    }
    if (kept == 0) throw NumericalBreakdown("all singular values truncated");
    return sol;
  }
  CVector y = CVector::Zero(m);
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < cut) continue;
    const auto u = eig.eigenvectors().col(i);
    y += u * (u.dot(b) / vals[i]);
    ++kept;
  }
  if (kept == 0) throw NumericalBreakdown("all singular values truncated");
  return a.adjoint() * y;
}

Eigen::VectorXd smoothed_envelope(const CVector& a, const GridShape& shape,
                                  double radius) {
  if (a.size() != shape.size())
    throw DimensionMismatch("vector length does not match grid size");
  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius + 1e-9;

  Eigen::VectorXd env(a.size());
  for (int d = 0; d < shape.num_doppler; ++d) {
    for (int s = 0; s < shape.num_spatial; ++s) {
      std::complex<double> acc = a[shape.flat(s, d)];
      int count = 0;
      for (int dd = -reach; dd <= reach; ++dd) {
        for (int ds = -reach; ds <= reach; ++ds) {
          if (dd == 0 && ds == 0) continue;
          if (dd * dd + ds * ds > r2) continue;
          const int ns = s + ds;
          const int nd = d + dd;
          if (ns < 0 || ns >= shape.num_spatial) continue;
          if (nd < 0 || nd >= shape.num_doppler) continue;
          acc += a[shape.flat(ns, nd)];
          ++count;
        }
      }
      env[shape.flat(s, d)] = std::abs(acc) / (count + 1);
    }
  }
  return env;
}

double envelope_correlation(const Eigen::VectorXd& candidate,
                            const Eigen::VectorXd& reference,
                            double top_fraction) {
  if (candidate.size() != reference.size())
    throw DimensionMismatch("envelope lengths differ");
  const int g = static_cast<int>(reference.size());
  if (g == 0) return 1.0;
  const int keep = std::clamp(
      static_cast<int>(std::ceil(top_fraction * g)), std::min(2, g), g);

  std::vector<int> order(g);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](int l, int r) { return reference[l] > reference[r]; });

  double mc = 0.0, mr = 0.0;
  for (int k = 0; k < keep; ++k) {
    mc += candidate[order[k]];
    mr += reference[order[k]];
  }
  mc /= keep;
  mr /= keep;

  double num = 0.0, vc = 0.0, vr = 0.0;
  for (int k = 0; k < keep; ++k) {
    const double dc = candidate[order[k]] - mc;
    const double dr = reference[order[k]] - mr;
    num += dc * dr;
    vc += dc * dc;
    vr += dr * dr;
  }
  if (vr == 0.0) return 1.0;  // featureless reference carries no evidence
  if (vc == 0.0) return 0.0;  // collapsed candidate
  return num / std::sqrt(vc * vr);
}

SparseSpectrum focuss_solve(const CMatrix& atoms, const GridShape& shape,
                            const CVector& x, const FocussOptions& opts) {
  check_options(opts);
  if (atoms.cols() != shape.size())
    throw DimensionMismatch("dictionary width does not match grid size");
  if (x.size() != atoms.rows())
    throw DimensionMismatch("snapshot length does not match dictionary rows");

  SparseSpectrum zero;
  zero.amplitudes = CVector::Zero(shape.size());
  if (x.norm() == 0.0) return zero;

  const CVector fourier = atoms.adjoint() * x;
  const Eigen::VectorXd ref_env =
      smoothed_envelope(fourier, shape, opts.neighborhood_radius);

  std::mt19937_64 rng(opts.restart_seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);

  std::optional<SparseSpectrum> fallback;  // best converged-but-collapsed
  double fallback_res = std::numeric_limits<double>::infinity();
  std::optional<SparseSpectrum> dense_fallback;
  double dense_res = std::numeric_limits<double>::infinity();
  int empty_attempts = 0;

  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    CVector a = fourier;
    if (attempt > 0) {
      // Perturb the starting weights by up to 10% of their own size plus
      // 10% of the peak, so low-ranked cells can change order and pull the
      // iteration out of the basin that just failed.
      const double peak = fourier.cwiseAbs().maxCoeff();
      for (int i = 0; i < a.size(); ++i) {
        const double u = jitter(rng);
        const double v = jitter(rng);
        const double mag =
            std::max(0.0, std::abs(fourier[i]) * (1.0 + u) + v * peak);
        a[i] = std::polar(mag, std::arg(fourier[i]));
      }
    }

    bool converged = false;
    bool collapsed = false;
    int iters = 0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
      const std::vector<int> active = support_of(a);
      CMatrix weighted(atoms.rows(), active.size());
      for (std::size_t k = 0; k < active.size(); ++k)
        weighted.col(static_cast<int>(k)) =
            atoms.col(active[k]) * std::abs(a[active[k]]);

      CVector next = CVector::Zero(shape.size());
      try {
        const CVector q = tsvd_solve(weighted, x, opts.tsvd_level);
        for (std::size_t k = 0; k < active.size(); ++k)
          next[active[k]] = std::abs(a[active[k]]) * q[static_cast<int>(k)];
      } catch (const NumericalBreakdown&) {
        collapsed = true;
        break;
      }

      // Drop cells below the threshold unless their neighborhood envelope
      // still carries weight (energy split across adjacent cells).
      const Eigen::VectorXd env =
          smoothed_envelope(next, shape, opts.neighborhood_radius);
      const double th = opts.prune_threshold * next.cwiseAbs().maxCoeff();
      for (int i = 0; i < next.size(); ++i)
        if (std::abs(next[i]) < th && env[i] < th)
          next[i] = std::complex<double>(0.0, 0.0);
      if (next.isZero(0.0)) {
        collapsed = true;
        break;
      }

      const double delta = (next - a).norm() / a.norm();
      a = next;
      iters = it;
      if (delta <= opts.convergence_tol) {
        converged = true;
        break;
      }
    }

    if (collapsed) {
      ++empty_attempts;
      continue;
    }

    SparseSpectrum spec = debiased_refit(atoms, x, a, opts);
    spec.iteration_count = iters;
    spec.attempts = attempt + 1;

    if (!converged)
      throw DidNotConverge("iteration limit reached before the iterate settled",
                           std::move(spec));

    // A support as wide as the data dimension interpolates the snapshot
    // exactly; that is a degenerate fixed point, not a sparse estimate.
    // Retry, but remember it in case every restart ends the same way.
    if (spec.support.size() >= static_cast<std::size_t>(atoms.rows()) &&
        spec.residual_norm < 1e-6 * x.norm()) {
      if (spec.residual_norm < dense_res) {
        dense_res = spec.residual_norm;
        dense_fallback = std::move(spec);
      }
      continue;
    }

    const Eigen::VectorXd env =
        smoothed_envelope(spec.amplitudes, shape, opts.neighborhood_radius);
    if (envelope_correlation(env, ref_env) >= opts.overfocal_correlation_min)
      return spec;

    if (spec.residual_norm < fallback_res) {
      fallback_res = spec.residual_norm;
      fallback = std::move(spec);
    }
  }

  // Every attempt either emptied out or collapsed away from the beam
  // pattern; hand back the least-bad converged solution if one exists.
  if (fallback) return *fallback;
  if (dense_fallback) return *dense_fallback;
  throw EmptySupport("all restarts pruned the spectrum to nothing");
}

SparseSpectrum focuss_solve(const Dictionary& dict, const CVector& x,
                            const FocussOptions& opts) {
  return focuss_solve(dict.atoms, dict.grid.shape(), x, opts);
}

}  // namespace d3sr
