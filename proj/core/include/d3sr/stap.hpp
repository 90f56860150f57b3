#ifndef D3SR_STAP_HPP
#define D3SR_STAP_HPP

#include <complex>
#include <vector>

#include "d3sr/dictionary.hpp"
#include "d3sr/scene.hpp"
#include "d3sr/spectrum.hpp"

namespace d3sr {

// Assumed signal of interest: the steered frequency pair plus a guard
// window (in grid cells) covering the straddle uncertainty around it.
struct SoiSpec {
  double spatial_freq = 0.0;
  double doppler_freq = 0.0;
  int spatial_extent = 3;  // guard cells along the spatial axis, odd
  int doppler_extent = 3;  // guard cells along the Doppler axis, odd
};

// Flat indices of the guard window centered on the SOI's nearest grid
// cell, truncated at the grid edges.  Ascending order.
std::vector<int> soi_area(const DictionaryGrid& grid, const SoiSpec& soi);

struct CovarianceMatrix {
  CMatrix r;             // NM x NM, Hermitian
  double loading = 0.0;  // diagonal load (linear power)
};

// Accumulates |amplitude|^2 * atom * atom^H over the spectrum's support,
// skipping cells inside the SOI guard, and loads the diagonal with beta.
CovarianceMatrix build_ccm(const Dictionary& dict,
                           const SparseSpectrum& spectrum,
                           const std::vector<int>& soi_cells, double beta);

enum class FilterMethod { kD3sr, kD3ls, kLsmi, kNone };

const char* method_name(FilterMethod method);

struct StapFilter {
  CVector weights;  // N*M, or Na*Np for the subaperture method
  FilterMethod method = FilterMethod::kD3sr;
  SoiSpec soi;
  // Scalar applied to the raw solve so the filter meets w^H s = 1.
  std::complex<double> normalization{1.0, 0.0};
  // Window bookkeeping, filled by the subaperture method only.
  int num_channels = 0;          // full aperture N
  int num_pulses = 0;            // full aperture M
  int subaperture_channels = 0;  // Na
  int subaperture_pulses = 0;    // Np
  bool rank_deficient = false;
};

// w = mu R^-1 s with mu = 1/(s^H R^-1 s), so the response toward the SOI
// steering vector is exactly one.
StapFilter d3sr_filter(const CovarianceMatrix& ccm,
                       const SteeringVector& soi_steering);

// Non-adaptive reference: w = s / (s^H s), unit gain, no nulling.
StapFilter matched_filter(const SteeringVector& soi_steering);

// R = (1/L) sum x_l x_l^H + delta * I over the training snapshots.
CovarianceMatrix sample_covariance(const std::vector<Snapshot>& training,
                                   double delta_load);

// Sample-covariance filter: the unit-gain solve against sample_covariance.
StapFilter lsmi_filter(const std::vector<Snapshot>& training,
                       const SteeringVector& soi_steering, double delta_load);

// Least-squares filter on the test cell alone.  Builds SOI-annihilating
// first-difference rows over Na x Np windows of the snapshot (spatial,
// then temporal, then space-time differences, windows in lexicographic
// order, capped at Na*Np - 1 rows), stacks them under the unit-gain row,
// and solves in least squares; when the stack cannot pin every weight the
// least-norm solution is returned and the filter is flagged.
StapFilter d3ls_filter(const CVector& snapshot, const RadarConfig& cfg,
                       const SoiSpec& soi, int subaperture_channels,
                       int subaperture_pulses);

// Scalar filter output for one snapshot.  Full-aperture filters return
// w^H x; the subaperture filter averages w^H over every window placement,
// each one de-rotated by the assumed SOI phase so the SOI gain stays one.
std::complex<double> apply_filter(const StapFilter& filter, const CVector& x);

}  // namespace d3sr

#endif  // D3SR_STAP_HPP
