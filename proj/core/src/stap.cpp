#include "d3sr/stap.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <unordered_set>
#include <utility>
#include <vector>

#include "d3sr/errors.hpp"

namespace d3sr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phasor(double cycles) {
  return std::polar(1.0, kTwoPi * cycles);
}

// Steering over an Na x Np window, flattened channel-major like the
// full-aperture snapshot.
CVector subaperture_steering(double fsp, double fd, int na, int np) {
  CVector s(na * np);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < np; ++j) s[i * np + j] = unit_phasor(fsp * i + fd * j);
  return s;
}

StapFilter unit_gain_solve(const CMatrix& r, const SteeringVector& steering,
                           FilterMethod method) {
  const Eigen::Index nm = r.rows();
  if (r.cols() != nm || steering.values.size() != nm)
    throw DimensionMismatch("covariance and steering dimensions disagree");
  Eigen::LLT<CMatrix> llt(r);
  if (llt.info() != Eigen::Success)
    throw SingularCovariance("covariance factorization failed");
  const CVector u = llt.solve(steering.values);
  const std::complex<double> denom = steering.values.dot(u);
  if (!std::isfinite(std::abs(denom)) || !(std::abs(denom) > 0.0))
    throw SingularCovariance("steering has no response through the covariance");
  const std::complex<double> mu = 1.0 / denom;

  StapFilter filter;
  filter.weights = u * mu;
  filter.method = method;
  filter.soi = SoiSpec{steering.spatial_freq, steering.doppler_freq, 3, 3};
  filter.normalization = mu;
  return filter;
}

}  // namespace

const char* method_name(FilterMethod method) {
  switch (method) {
    case FilterMethod::kD3sr: return "d3sr";
    case FilterMethod::kD3ls: return "d3ls";
    case FilterMethod::kLsmi: return "lsmi";
    case FilterMethod::kNone: return "none";
  }
  return "unknown";
}

StapFilter matched_filter(const SteeringVector& soi_steering) {
  const double energy = soi_steering.values.squaredNorm();
  if (!(energy > 0.0))
    throw DimensionMismatch("steering vector is empty or zero");
  StapFilter filter;
  filter.weights = soi_steering.values / energy;
  filter.method = FilterMethod::kNone;
  filter.soi =
      SoiSpec{soi_steering.spatial_freq, soi_steering.doppler_freq, 3, 3};
  filter.normalization = std::complex<double>(1.0 / energy, 0.0);
  return filter;
}

std::vector<int> soi_area(const DictionaryGrid& grid, const SoiSpec& soi) {
  if (soi.spatial_extent < 1 || soi.spatial_extent % 2 == 0 ||
      soi.doppler_extent < 1 || soi.doppler_extent % 2 == 0)
    throw InvalidConfig("soi guard extents must be odd and positive");
  const auto [si, di] =
      grid.coords(grid.cell_index(soi.spatial_freq, soi.doppler_freq));
  const int hs = soi.spatial_extent / 2;
  const int hd = soi.doppler_extent / 2;
  std::vector<int> cells;
  const int d_lo = std::max(0, di - hd);
  const int d_hi = std::min(grid.num_doppler() - 1, di + hd);
  const int s_lo = std::max(0, si - hs);
  const int s_hi = std::min(grid.num_spatial() - 1, si + hs);
  cells.reserve(static_cast<size_t>(d_hi - d_lo + 1) * (s_hi - s_lo + 1));
  for (int d = d_lo; d <= d_hi; ++d)
    for (int s = s_lo; s <= s_hi; ++s) cells.push_back(grid.flat(s, d));
  return cells;
}

CovarianceMatrix build_ccm(const Dictionary& dict,
                           const SparseSpectrum& spectrum,
                           const std::vector<int>& soi_cells, double beta) {
  if (!(beta > 0.0)) throw InvalidConfig("covariance loading must be positive");
  if (spectrum.amplitudes.size() != dict.num_atoms())
    throw DimensionMismatch("spectrum length does not match the dictionary");
  const int nm = dict.snapshot_size();
  const std::unordered_set<int> guard(soi_cells.begin(), soi_cells.end());

  CMatrix acc = CMatrix::Zero(nm, nm);
  for (const int idx : spectrum.support) {
    if (idx < 0 || idx >= dict.num_atoms())
      throw DimensionMismatch("spectrum support cell outside the dictionary");
    if (guard.count(idx) != 0) continue;
    const double power = std::norm(spectrum.amplitudes[idx]);
    if (power == 0.0) continue;
    acc.selfadjointView<Eigen::Lower>().rankUpdate(dict.atoms.col(idx), power);
  }

  CovarianceMatrix ccm;
  ccm.r = acc.selfadjointView<Eigen::Lower>();
  ccm.r.diagonal().array() += std::complex<double>(beta, 0.0);
  ccm.loading = beta;
  return ccm;
}

StapFilter d3sr_filter(const CovarianceMatrix& ccm,
                       const SteeringVector& soi_steering) {
  return unit_gain_solve(ccm.r, soi_steering, FilterMethod::kD3sr);
}

CovarianceMatrix sample_covariance(const std::vector<Snapshot>& training,
                                   double delta_load) {
  if (training.empty())
    throw InvalidConfig("sample covariance needs at least one training snapshot");
  if (delta_load < 0.0) throw InvalidConfig("diagonal load must be nonnegative");
  const Eigen::Index nm = training.front().data.size();
  CMatrix acc = CMatrix::Zero(nm, nm);
  const double scale = 1.0 / static_cast<double>(training.size());
  for (const auto& snap : training) {
    if (snap.data.size() != nm)
      throw DimensionMismatch("training snapshots differ in length");
    acc.selfadjointView<Eigen::Lower>().rankUpdate(snap.data, scale);
  }
  CovarianceMatrix ccm;
  ccm.r = acc.selfadjointView<Eigen::Lower>();
  ccm.r.diagonal().array() += std::complex<double>(delta_load, 0.0);
  ccm.loading = delta_load;
  return ccm;
}

StapFilter lsmi_filter(const std::vector<Snapshot>& training,
                       const SteeringVector& soi_steering, double delta_load) {
  const auto ccm = sample_covariance(training, delta_load);
  return unit_gain_solve(ccm.r, soi_steering, FilterMethod::kLsmi);
}

StapFilter d3ls_filter(const CVector& snapshot, const RadarConfig& cfg,
                       const SoiSpec& soi, int subaperture_channels,
                       int subaperture_pulses) {
  const int n = cfg.num_channels;
  const int m = cfg.num_pulses;
  const int na = subaperture_channels;
  const int np = subaperture_pulses;
  if (snapshot.size() != static_cast<Eigen::Index>(n) * m)
    throw DimensionMismatch("snapshot length does not match the aperture");
  if (na < 2 || na > n || np < 2 || np > m)
    throw DimensionError("subaperture must span 2..N channels and 2..M pulses");
  const int dim = na * np;
  const int needed = dim - 1;

  const auto at = [&](int c, int p) { return snapshot[c * m + p]; };

  // SOI-annihilating first differences of the windowed data: spatial, then
  // temporal, then space-time shifts, window placements in lexicographic
  // order, capped at Na*Np - 1 rows.
  std::vector<CVector> rows;
  rows.reserve(static_cast<size_t>(needed));
  constexpr int kKinds[3][2] = {{1, 0}, {0, 1}, {1, 1}};
  for (const auto& kind : kKinds) {
    const int ds = kind[0];
    const int dt = kind[1];
    const std::complex<double> shift =
        unit_phasor(-(soi.spatial_freq * ds + soi.doppler_freq * dt));
    for (int p = 0; p + na + ds <= n && static_cast<int>(rows.size()) < needed;
         ++p) {
      for (int q = 0; q + np + dt <= m && static_cast<int>(rows.size()) < needed;
           ++q) {
        CVector r(dim);
        for (int i = 0; i < na; ++i)
          for (int j = 0; j < np; ++j)
            r[i * np + j] =
                at(p + i, q + j) - shift * at(p + ds + i, q + dt + j);
        rows.push_back(std::move(r));
      }
    }
  }
  if (rows.empty())
    throw DimensionError("subaperture geometry leaves no cancellation rows");

  // Stack the unit-gain row over the conjugated cancellation rows so that
  // each row k enforces w^H r_k = 0 in least squares.
  const CVector ssub =
      subaperture_steering(soi.spatial_freq, soi.doppler_freq, na, np);
  CMatrix a(static_cast<Eigen::Index>(rows.size()) + 1, dim);
  a.row(0) = ssub.conjugate();
  for (size_t k = 0; k < rows.size(); ++k) a.row(k + 1) = rows[k].conjugate();
  CVector b = CVector::Zero(a.rows());
  b[0] = 1.0;

  const auto cod = a.completeOrthogonalDecomposition();
  CVector w = cod.solve(b);
  const std::complex<double> gain = w.dot(ssub);
  if (!(std::abs(gain) > 1e-12 * w.norm() * ssub.norm()))
    throw NumericalBreakdown("cancellation system suppressed the look direction");
  const std::complex<double> scale = 1.0 / std::conj(gain);
  w *= scale;

  StapFilter filter;
  filter.weights = std::move(w);
  filter.method = FilterMethod::kD3ls;
  filter.soi = soi;
  filter.normalization = scale;
  filter.num_channels = n;
  filter.num_pulses = m;
  filter.subaperture_channels = na;
  filter.subaperture_pulses = np;
  filter.rank_deficient = cod.rank() < dim;
  return filter;
}

std::complex<double> apply_filter(const StapFilter& filter, const CVector& x) {
  if (filter.weights.size() == 0)
    throw DimensionMismatch("filter carries no weights");
  if (filter.method != FilterMethod::kD3ls) {
    if (x.size() != filter.weights.size())
      throw DimensionMismatch("snapshot length does not match the filter");
    return filter.weights.dot(x);
  }

  const int n = filter.num_channels;
  const int m = filter.num_pulses;
  const int na = filter.subaperture_channels;
  const int np = filter.subaperture_pulses;
  if (x.size() != static_cast<Eigen::Index>(n) * m)
    throw DimensionMismatch("snapshot length does not match the aperture");

  // Slide the window over every placement; de-rotate each output by the
  // SOI phase advance of the placement so the look-direction gain stays 1.
  std::complex<double> sum = 0.0;
  int count = 0;
  CVector window(na * np);
  for (int p = 0; p + na <= n; ++p) {
    for (int q = 0; q + np <= m; ++q) {
      for (int i = 0; i < na; ++i)
        for (int j = 0; j < np; ++j)
          window[i * np + j] = x[(p + i) * m + (q + j)];
      sum += filter.weights.dot(window) *
             unit_phasor(-(filter.soi.spatial_freq * p +
                           filter.soi.doppler_freq * q));
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace d3sr
