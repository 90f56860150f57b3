#include "d3sr/radar_config.hpp"

#include <cmath>
#include <sstream>

#include "d3sr/errors.hpp"

namespace d3sr {

std::vector<std::string> validate(const RadarConfig& cfg) {
  auto fail = [](const std::string& msg) { throw InvalidConfig(msg); };

  if (cfg.num_channels < 2) fail("num_channels must be >= 2");
  if (cfg.num_pulses < 2) fail("num_pulses must be >= 2");
  if (!(cfg.velocity > 0.0)) fail("velocity must be positive");
  if (!(cfg.pri > 0.0)) fail("pri must be positive");
  if (!(cfg.sample_rate > 0.0)) fail("sample_rate must be positive");
  if (!(cfg.wavelength > 0.0)) fail("wavelength must be positive");
  if (!(cfg.spacing > 0.0)) fail("spacing must be positive");
  if (!(cfg.height > 0.0)) fail("height must be positive");
  if (!std::isfinite(cfg.crab)) fail("crab must be finite");
  if (!std::isfinite(cfg.input_scr_db)) fail("input_scr_db must be finite");

  std::vector<std::string> warnings;
  if (cfg.spacing > 0.5 * cfg.wavelength) {
    std::ostringstream os;
    os << "element spacing " << cfg.spacing << " m exceeds half the wavelength ("
       << 0.5 * cfg.wavelength << " m); the spatial frequency axis will alias";
    warnings.push_back(os.str());
  }
  return warnings;
}

}  // namespace d3sr
