#include "d3sr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "d3sr/errors.hpp"

namespace d3sr {

double elevation_cos(double height, double slant_range) {
  if (slant_range < height) {
    std::ostringstream os;
    os << "slant range " << slant_range << " m is below the platform height "
       << height << " m";
    throw RangeBelowHeight(os.str());
  }
  const double ratio = height / slant_range;
  return std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
}

double elevation_cos_from_range(const RadarConfig& cfg, int range_cell) {
  return elevation_cos(cfg.height, cfg.slant_range(range_cell));
}

double doppler_from_angles(const RadarConfig& cfg, double azimuth,
                           double elevation_cos) {
  return 2.0 * cfg.velocity / cfg.wavelength * std::cos(azimuth) *
         elevation_cos;
}

double look_angle_cos(const RadarConfig& cfg, double azimuth,
                      double elevation_cos) {
  return std::cos(azimuth - cfg.crab) * elevation_cos;
}

double doppler_from_look(const RadarConfig& cfg, double look_cos,
                         double elevation_cos, DopplerBranch branch,
                         double tol) {
  const double cpsi = std::cos(cfg.crab);
  const double spsi = std::sin(cfg.crab);
  double disc = cpsi * cpsi * look_cos * look_cos - look_cos * look_cos +
                spsi * spsi * elevation_cos * elevation_cos;
  if (disc < -tol) {
    std::ostringstream os;
    os << "no real Doppler for look_cos=" << look_cos
       << ", elevation_cos=" << elevation_cos << ", crab=" << cfg.crab
       << " (discriminant " << disc << ")";
    throw InconsistentGeometry(os.str());
  }
  disc = std::max(disc, 0.0);
  const double root = std::sqrt(disc);
  const double sign = (branch == DopplerBranch::Plus) ? 1.0 : -1.0;
  return 2.0 * cfg.velocity / cfg.wavelength * (cpsi * look_cos + sign * root);
}

double spatial_frequency(const RadarConfig& cfg, double look_cos) {
  return cfg.spacing / cfg.wavelength * look_cos;
}

double broadside_spatial_frequency(const RadarConfig& cfg, double angle) {
  return cfg.spacing / cfg.wavelength * std::sin(angle);
}

double normalized_doppler(const RadarConfig& cfg, double doppler_hz) {
  return doppler_hz * cfg.pri;
}

std::vector<RidgePoint> clutter_ridge(const RadarConfig& cfg, int range_cell,
                                      const AngularSector& sector,
                                      int num_points) {
  if (num_points < 2)
    throw InvalidConfig("clutter_ridge needs at least two azimuth samples");
  if (!(sector.hi > sector.lo))
    throw InvalidConfig("angular sector must have positive width");

  const double ecos = elevation_cos_from_range(cfg, range_cell);
  std::vector<RidgePoint> ridge(num_points);
  const double step = sector.width() / (num_points - 1);
  for (int i = 0; i < num_points; ++i) {
    const double az = sector.lo + i * step;
    RidgePoint& p = ridge[i];
    p.azimuth = az;
    p.look_cos = look_angle_cos(cfg, az, ecos);
    p.doppler_hz = doppler_from_angles(cfg, az, ecos);
    p.spatial_freq = spatial_frequency(cfg, p.look_cos);
    p.doppler_freq = normalized_doppler(cfg, p.doppler_hz);
  }
  return ridge;
}

std::vector<RidgePoint> clutter_ridge(const RadarConfig& cfg, int range_cell,
                                      const AngularSector& sector,
                                      const DictionaryGrid& grid) {
  // Dense enough that adjacent samples move by under one cell on each axis.
  const int n = 8 * std::max(grid.num_spatial(), grid.num_doppler());
  return clutter_ridge(cfg, range_cell, sector, n);
}

std::vector<int> ridge_cells(const RadarConfig& cfg, const DictionaryGrid& grid,
                             int range_cell, const AngularSector& sector,
                             int dilation) {
  std::set<int> cells;
  for (const RidgePoint& p : clutter_ridge(cfg, range_cell, sector, grid)) {
    if (!grid.contains(p.spatial_freq, p.doppler_freq)) continue;
    const auto [si, di] = grid.coords(grid.cell_index(p.spatial_freq,
                                                      p.doppler_freq));
    for (int ds = -dilation; ds <= dilation; ++ds) {
      for (int dd = -dilation; dd <= dilation; ++dd) {
        const int s = si + ds;
        const int d = di + dd;
        if (s < 0 || s >= grid.num_spatial() || d < 0 || d >= grid.num_doppler())
          continue;
        cells.insert(grid.flat(s, d));
      }
    }
  }
  return {cells.begin(), cells.end()};
}

}  // namespace d3sr
