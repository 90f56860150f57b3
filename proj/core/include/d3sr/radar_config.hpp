#ifndef D3SR_RADAR_CONFIG_HPP
#define D3SR_RADAR_CONFIG_HPP

#include <string>
#include <vector>

namespace d3sr {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

// Airborne side/forward-looking uniform linear array and waveform parameters.
// Angles are radians internally; degrees appear only at the CLI boundary.
struct RadarConfig {
  int num_channels = 12;      // N, spatial channels
  int num_pulses = 12;        // M, pulses per CPI
  double velocity = 300.0;    // platform speed (m/s)
  double pri = 0.25e-3;       // pulse repetition interval (s)
  double sample_rate = 5.0e6; // fast-time sampling rate (Hz)
  double wavelength = 0.3;    // carrier wavelength (m)
  double spacing = 0.15;      // element spacing d (m)
  double height = 3000.0;     // platform altitude H (m)
  double crab = 0.0;          // crab angle between array axis and velocity (rad)
  double input_scr_db = -30.0;// target-to-clutter power ratio at the input (dB)

  double prf() const { return 1.0 / pri; }
  // Range-gate spacing set by the fast-time bandwidth.
  double range_gate() const { return kSpeedOfLight / (2.0 * sample_rate); }
  // Slant range of a range cell; gate 0 sits at the platform height.
  double slant_range(int range_cell) const {
    return height + static_cast<double>(range_cell) * range_gate();
  }
};

// Throws InvalidConfig on hard violations; returns soft warnings
// (e.g. element spacing above half a wavelength aliases the spatial axis).
std::vector<std::string> validate(const RadarConfig& cfg);

}  // namespace d3sr

#endif  // D3SR_RADAR_CONFIG_HPP
