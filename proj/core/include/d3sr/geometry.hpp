#ifndef D3SR_GEOMETRY_HPP
#define D3SR_GEOMETRY_HPP

#include <vector>

#include "d3sr/grid.hpp"
#include "d3sr/radar_config.hpp"

namespace d3sr {

// ============================ angle chains ============================
//
// A ground patch seen at azimuth phi (measured from the velocity vector,
// in the horizontal plane) and elevation cos factor cos_theta produces
//   doppler  f_d   = (2 v / lambda) * cos(phi) * cos_theta
//   cone cos cos_b = cos(phi - crab) * cos_theta        (array axis cone)
// and phases the array with spatial frequency (d / lambda) * cos_b.

// cos(theta) for a scatter on the ground at slant range R_s from height H.
// Throws RangeBelowHeight when R_s < H.
double elevation_cos(double height, double slant_range);
double elevation_cos_from_range(const RadarConfig& cfg, int range_cell);

// Doppler (Hz) from azimuth and elevation.
double doppler_from_angles(const RadarConfig& cfg, double azimuth,
                           double elevation_cos);

// Cosine of the cone angle between the array axis and the line of sight.
double look_angle_cos(const RadarConfig& cfg, double azimuth,
                      double elevation_cos);

// Which root of the cone-angle inversion to take when recovering Doppler
// from the look direction alone.  A crabbed array sees two azimuths with
// the same cone angle; Minus selects the one ahead of the array axis.
enum class DopplerBranch { Plus, Minus };

// Doppler (Hz) from the look-angle cosine without knowing the azimuth:
//   f_d = (2v/lambda) * (cos(psi) cos_b ± sqrt(disc)),
//   disc = cos^2(psi) cos_b^2 - cos_b^2 + sin^2(psi) cos_theta^2.
// A slightly negative discriminant (>= -tol) is clamped to zero; beyond
// tol the inputs are geometrically inconsistent and the call throws.
double doppler_from_look(const RadarConfig& cfg, double look_cos,
                         double elevation_cos, DopplerBranch branch,
                         double tol = 1e-9);

// ======================= normalized frequencies =======================

// Spatial frequency phased by the cone angle: (d / lambda) * look_cos.
double spatial_frequency(const RadarConfig& cfg, double look_cos);

// Spatial frequency of a point source given by its angle off array
// broadside:  (d / lambda) * sin(angle).
double broadside_spatial_frequency(const RadarConfig& cfg, double angle);

// Doppler in cycles per pulse.
double normalized_doppler(const RadarConfig& cfg, double doppler_hz);

// ============================ clutter ridge ===========================

// Azimuth interval, radians.  lo < hi required.
struct AngularSector {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

struct RidgePoint {
  double azimuth = 0.0;             // rad
  double look_cos = 0.0;            // cos of array cone angle
  double doppler_hz = 0.0;          // Hz
  double spatial_freq = 0.0;        // cycles per element
  double doppler_freq = 0.0;        // cycles per pulse
};

// Samples the clutter ridge of one range cell: num_points azimuths evenly
// spread over the sector, each mapped through the angle chain above.
std::vector<RidgePoint> clutter_ridge(const RadarConfig& cfg, int range_cell,
                                      const AngularSector& sector,
                                      int num_points);

// Convenience overload: sampling density tied to the grid resolution so
// consecutive ridge points land at most one cell apart.
std::vector<RidgePoint> clutter_ridge(const RadarConfig& cfg, int range_cell,
                                      const AngularSector& sector,
                                      const DictionaryGrid& grid);

// Grid-cell footprint of the ridge, dilated by a Chebyshev radius.
// Returns sorted unique flat cell indices; ridge points falling outside
// the grid span are skipped.
std::vector<int> ridge_cells(const RadarConfig& cfg, const DictionaryGrid& grid,
                             int range_cell, const AngularSector& sector,
                             int dilation);

}  // namespace d3sr

#endif  // D3SR_GEOMETRY_HPP
