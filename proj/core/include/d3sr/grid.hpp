#ifndef D3SR_GRID_HPP
#define D3SR_GRID_HPP

#include <utility>
#include <vector>

#include "d3sr/radar_config.hpp"

namespace d3sr {

// Dimensions of an angle-Doppler search grid.  Cells are flattened
// Doppler-major: flat = doppler_index * num_spatial + spatial_index,
// i.e. all spatial cells of the first Doppler bin come first.
struct GridShape {
  int num_spatial = 0;
  int num_doppler = 0;

  int size() const { return num_spatial * num_doppler; }
  int flat(int spatial_idx, int doppler_idx) const {
    return doppler_idx * num_spatial + spatial_idx;
  }
  std::pair<int, int> coords(int flat_idx) const {
    return {flat_idx % num_spatial, flat_idx / num_spatial};
  }
};

// Uniform angle-Doppler grid over [-0.5, 0.5) x [-0.5, 0.5) in normalized
// spatial frequency (cycles/element) and normalized Doppler (cycles/pulse).
// Oversampling factors rho_s / rho_t scale the cell counts relative to the
// array size: num_spatial = rho_s * N, num_doppler = rho_t * M.
class DictionaryGrid {
 public:
  // Grid for a radar configuration.  rho_s, rho_t >= 1.
  DictionaryGrid(const RadarConfig& cfg, int rho_s, int rho_t);
  // Grid with explicit cell counts (synthetic dictionaries, tests).
  DictionaryGrid(int num_spatial, int num_doppler);

  int rho_s() const { return rho_s_; }
  int rho_t() const { return rho_t_; }
  int num_spatial() const { return shape_.num_spatial; }
  int num_doppler() const { return shape_.num_doppler; }
  int size() const { return shape_.size(); }
  const GridShape& shape() const { return shape_; }

  const std::vector<double>& spatial_axis() const { return spatial_axis_; }
  const std::vector<double>& doppler_axis() const { return doppler_axis_; }
  double spatial_value(int i) const { return spatial_axis_[i]; }
  double doppler_value(int j) const { return doppler_axis_[j]; }
  double spatial_step() const { return 1.0 / shape_.num_spatial; }
  double doppler_step() const { return 1.0 / shape_.num_doppler; }

  int flat(int spatial_idx, int doppler_idx) const {
    return shape_.flat(spatial_idx, doppler_idx);
  }
  std::pair<int, int> coords(int flat_idx) const {
    return shape_.coords(flat_idx);
  }
  // Frequencies at the center of a flat cell.
  std::pair<double, double> cell_center(int flat_idx) const;

  bool contains(double spatial_freq, double doppler_freq) const;

  // Nearest grid cell (flat index) for a frequency pair; exact midpoints
  // resolve toward the lower index.  Throws OutOfRange outside the span.
  int cell_index(double spatial_freq, double doppler_freq) const;

 private:
  int rho_s_ = 1;
  int rho_t_ = 1;
  GridShape shape_;
  std::vector<double> spatial_axis_;
  std::vector<double> doppler_axis_;
};

}  // namespace d3sr

#endif  // D3SR_GRID_HPP
