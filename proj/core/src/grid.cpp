#include "d3sr/grid.hpp"

#include <cmath>
#include <sstream>

#include "d3sr/errors.hpp"

namespace d3sr {

namespace {

std::vector<double> uniform_axis(int count) {
  std::vector<double> axis(count);
  const double step = 1.0 / count;
  for (int i = 0; i < count; ++i) axis[i] = -0.5 + i * step;
  return axis;
}

// Nearest integer with exact halves rounded down.
int nearest_half_down(double t) {
  return static_cast<int>(std::ceil(t - 0.5));
}

}  // namespace

DictionaryGrid::DictionaryGrid(const RadarConfig& cfg, int rho_s, int rho_t)
    : rho_s_(rho_s), rho_t_(rho_t) {
  if (rho_s < 1 || rho_t < 1)
    throw InvalidConfig("grid oversampling factors must be >= 1");
  shape_ = {rho_s * cfg.num_channels, rho_t * cfg.num_pulses};
  if (shape_.size() < cfg.num_channels * cfg.num_pulses)
    throw GridTooCoarse("grid has fewer cells than the space-time product");
  spatial_axis_ = uniform_axis(shape_.num_spatial);
  doppler_axis_ = uniform_axis(shape_.num_doppler);
}

DictionaryGrid::DictionaryGrid(int num_spatial, int num_doppler) {
  if (num_spatial < 1 || num_doppler < 1)
    throw InvalidConfig("grid dimensions must be positive");
  shape_ = {num_spatial, num_doppler};
  spatial_axis_ = uniform_axis(num_spatial);
  doppler_axis_ = uniform_axis(num_doppler);
}

std::pair<double, double> DictionaryGrid::cell_center(int flat_idx) const {
  auto [si, di] = coords(flat_idx);
  return {spatial_axis_[si], doppler_axis_[di]};
}

bool DictionaryGrid::contains(double spatial_freq, double doppler_freq) const {
  const double slack = 1e-12;
  return spatial_freq >= -0.5 - slack && spatial_freq <= 0.5 + slack &&
         doppler_freq >= -0.5 - slack && doppler_freq <= 0.5 + slack;
}

int DictionaryGrid::cell_index(double spatial_freq, double doppler_freq) const {
  if (!contains(spatial_freq, doppler_freq)) {
    std::ostringstream os;
    os << "frequency pair (" << spatial_freq << ", " << doppler_freq
       << ") lies outside the grid span [-0.5, 0.5]";
    throw OutOfRange(os.str());
  }
  auto clamp = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };
  const int si = clamp(
      nearest_half_down((spatial_freq + 0.5) * shape_.num_spatial),
      shape_.num_spatial - 1);
  const int di = clamp(
      nearest_half_down((doppler_freq + 0.5) * shape_.num_doppler),
      shape_.num_doppler - 1);
  return flat(si, di);
}

}  // namespace d3sr
