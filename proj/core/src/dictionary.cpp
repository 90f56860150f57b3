#include "d3sr/dictionary.hpp"

#include "d3sr/errors.hpp"

namespace d3sr {

Dictionary build_dictionary(const RadarConfig& cfg, const DictionaryGrid& grid) {
  const int nm = cfg.num_channels * cfg.num_pulses;
  const auto shape = grid.shape();

  Dictionary dict{CMatrix(nm, shape.size()), grid};
  for (int d = 0; d < shape.num_doppler; ++d) {
    for (int s = 0; s < shape.num_spatial; ++s) {
      const auto sv = space_time_steering(cfg, grid.spatial_axis()[s],
                                          grid.doppler_axis()[d]);
      dict.atoms.col(shape.flat(s, d)) = sv.values;
    }
  }
  return dict;
}

CVector fourier_spectrum(const Dictionary& dict, const CVector& x) {
  if (x.size() != dict.atoms.rows())
    throw DimensionMismatch("snapshot length does not match dictionary rows");
  return dict.atoms.adjoint() * x;
}

}  // namespace d3sr
