#include "d3sr/config.hpp"

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

#include "d3sr/errors.hpp"
#include "d3sr/geometry.hpp"

namespace d3sr {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += '\n';
    out += lines[i];
  }
  return out;
}

// Strict view over one section: the constructor rejects unknown and
// repeated keys in one pass, listing every offender with its line.
class Reader {
 public:
  Reader(const io::TextSection& section, const std::string& origin,
         std::initializer_list<const char*> allowed)
      : section_(section), origin_(origin) {
    std::vector<std::string> problems;
    std::set<std::string> seen;
    for (const auto& e : section.entries) {
      bool known = false;
      for (const char* k : allowed)
        if (e.key == k) {
          known = true;
          break;
        }
      if (!known)
        problems.push_back(at(e.line) + ": [" + section_.name +
                           "] unknown key '" + e.key + "'");
      else if (!seen.insert(e.key).second)
        problems.push_back(at(e.line) + ": [" + section_.name +
                           "] repeated key '" + e.key + "'");
    }
    if (!problems.empty()) throw ConfigError(join(problems));
  }

  bool has(const std::string& key) const {
    return section_.find(key) != nullptr;
  }

  double number(const std::string& key, double fallback) const {
    const io::TextEntry* e = entry(key);
    return e == nullptr ? fallback : parse<double>(*e, io::parse_double);
  }

  double require_number(const std::string& key) const {
    return parse<double>(require(key), io::parse_double);
  }

  int integer(const std::string& key, int fallback) const {
    const io::TextEntry* e = entry(key);
    return e == nullptr ? fallback : parse<int>(*e, io::parse_int);
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const {
    const io::TextEntry* e = entry(key);
    return e == nullptr ? fallback : parse<std::uint64_t>(*e, io::parse_uint64);
  }

  bool flag(const std::string& key, bool fallback) const {
    const io::TextEntry* e = entry(key);
    if (e == nullptr) return fallback;
    const int v = parse<int>(*e, io::parse_int);
    if (v != 0 && v != 1) fail(key, "expected 0 or 1");
    return v != 0;
  }

  std::vector<double> numbers(const std::string& key) const {
    const io::TextEntry* e = entry(key);
    return e == nullptr ? std::vector<double>{}
                        : parse<std::vector<double>>(*e, io::parse_doubles);
  }

  std::vector<int> integers(const std::string& key) const {
    const io::TextEntry* e = entry(key);
    return e == nullptr ? std::vector<int>{}
                        : parse<std::vector<int>>(*e, io::parse_ints);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const std::string* v = section_.find(key);
    return v == nullptr ? fallback : *v;
  }

  // Wraps a value problem in file:line context.
  [[noreturn]] void fail(const std::string& key,
                         const std::string& detail) const {
    const io::TextEntry* e = entry(key);
    const int line = e != nullptr ? e->line : section_.line;
    throw ConfigError(at(line) + ": [" + section_.name + "] " + key + ": " +
                      detail);
  }

  [[noreturn]] void fail_section(const std::string& detail) const {
    throw ConfigError(at(section_.line) + ": [" + section_.name + "] " +
                      detail);
  }

 private:
  const io::TextEntry* entry(const std::string& key) const {
    for (const auto& e : section_.entries)
      if (e.key == key) return &e;
    return nullptr;
  }

  const io::TextEntry& require(const std::string& key) const {
    const io::TextEntry* e = entry(key);
    if (e == nullptr) fail_section("missing required key '" + key + "'");
    return *e;
  }

  template <typename T, typename Fn>
  T parse(const io::TextEntry& e, Fn fn) const {
    try {
      return fn(e.value);
    } catch (const FileError& err) {
      throw ConfigError(at(e.line) + ": [" + section_.name + "] " + e.key +
                        ": " + err.what());
    }
  }

  std::string at(int line) const {
    return origin_ + ":" + std::to_string(line);
  }

  const io::TextSection& section_;
  std::string origin_;
};

void check_sections(const io::TextDocument& doc, const std::string& origin) {
  static const char* kOneShot[] = {"radar", "scene", "target", "grid",
                                   "solver", "stap", "mdv", "run"};
  std::vector<std::string> problems;
  std::set<std::string> seen;
  for (const auto& s : doc.sections) {
    bool known = s.name == "interferer";
    for (const char* k : kOneShot)
      if (s.name == k) {
        known = true;
        if (!seen.insert(s.name).second)
          problems.push_back(origin + ":" + std::to_string(s.line) +
                             ": repeated section [" + s.name + "]");
      }
    if (!known)
      problems.push_back(origin + ":" + std::to_string(s.line) +
                         ": unknown section [" + s.name + "]");
  }
  if (!problems.empty()) throw ConfigError(join(problems));
}

void read_radar(const io::TextDocument& doc, const std::string& origin,
                RadarConfig& radar) {
  const io::TextSection* s = doc.find("radar");
  if (s == nullptr) return;
  const Reader r(*s, origin,
                 {"channels", "pulses", "velocity", "pri", "sample_rate",
                  "wavelength", "spacing", "height", "crab_deg",
                  "input_scr_db"});
  radar.num_channels = r.integer("channels", radar.num_channels);
  radar.num_pulses = r.integer("pulses", radar.num_pulses);
  radar.velocity = r.number("velocity", radar.velocity);
  radar.pri = r.number("pri", radar.pri);
  radar.sample_rate = r.number("sample_rate", radar.sample_rate);
  radar.wavelength = r.number("wavelength", radar.wavelength);
  radar.spacing = r.number("spacing", radar.spacing);
  radar.height = r.number("height", radar.height);
  radar.crab = r.number("crab_deg", radar.crab / kDegToRad) * kDegToRad;
  radar.input_scr_db = r.number("input_scr_db", radar.input_scr_db);

  try {
    validate(radar);  // returned warnings are advisory, not parse errors
  } catch (const InvalidConfig& e) {
    r.fail_section(e.what());
  }
}

void read_target(const io::TextDocument& doc, const std::string& origin,
                 const RadarConfig& radar, int num_range_cells,
                 ClutterScene& scene) {
  const io::TextSection* s = doc.find("target");
  if (s == nullptr) return;
  const Reader r(*s, origin,
                 {"angle_deg", "azimuth_deg", "spatial_freq", "doppler",
                  "amplitude", "range_cell"});
  TargetSpec target;
  target.range_cell = r.integer("range_cell", 0);
  if (target.range_cell < 0 || target.range_cell >= num_range_cells)
    r.fail("range_cell", "outside the scene's range extent");
  target.doppler_freq = r.require_number("doppler");
  target.amplitude = r.number("amplitude", 1.0);

  const int picks = static_cast<int>(r.has("angle_deg")) +
                    static_cast<int>(r.has("azimuth_deg")) +
                    static_cast<int>(r.has("spatial_freq"));
  if (picks != 1)
    r.fail_section(
        "give exactly one of angle_deg, azimuth_deg, spatial_freq");
  if (r.has("spatial_freq")) {
    target.spatial_freq = r.require_number("spatial_freq");
  } else if (r.has("angle_deg")) {
    target.spatial_freq = broadside_spatial_frequency(
        radar, r.require_number("angle_deg") * kDegToRad);
  } else {
    try {
      const double ecos = elevation_cos_from_range(radar, target.range_cell);
      target.spatial_freq = spatial_frequency(
          radar,
          look_angle_cos(radar, r.require_number("azimuth_deg") * kDegToRad,
                         ecos));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      r.fail("azimuth_deg", e.what());
    }
  }
  scene.target = target;
}

void read_interferers(const io::TextDocument& doc, const std::string& origin,
                      const RadarConfig& radar, ClutterScene& scene) {
  for (const auto& s : doc.sections) {
    if (s.name != "interferer") continue;
    const Reader r(s, origin,
                   {"angle_deg", "spatial_freq", "doppler", "amplitude_db",
                    "random_phase"});
    PointSource source;
    if (r.has("angle_deg") == r.has("spatial_freq"))
      r.fail_section("give exactly one of angle_deg, spatial_freq");
    source.spatial_freq =
        r.has("spatial_freq")
            ? r.require_number("spatial_freq")
            : broadside_spatial_frequency(
                  radar, r.require_number("angle_deg") * kDegToRad);
    source.doppler_freq = r.require_number("doppler");
    const double db = r.number("amplitude_db", 30.0);
    source.amplitude =
        std::sqrt(scene.noise_power * std::pow(10.0, db / 10.0));
    source.random_phase = r.flag("random_phase", true);
    scene.interferers.push_back(source);
  }
}

}  // namespace

ExperimentConfig parse_config(const io::TextDocument& doc,
                              const std::string& origin) {
  check_sections(doc, origin);

  ExperimentConfig cfg;
  read_radar(doc, origin, cfg.radar);

  // Scene scalars come first; the clutter bed itself waits for the target
  // amplitude, which sets the clutter power that realizes the input SCR.
  int clutter_count = 0;
  double clutter_power = -1.0;  // <0: derive from the input SCR
  bool sector_given = false;
  if (const io::TextSection* s = doc.find("scene")) {
    const Reader r(*s, origin,
                   {"sector_lo_deg", "sector_hi_deg", "clutter_count",
                    "clutter_power", "noise_power", "range_cells",
                    "ridge_reference_cell", "interference_cells"});
    cfg.num_range_cells = r.integer("range_cells", 1);
    if (cfg.num_range_cells < 1) r.fail("range_cells", "must be at least 1");
    cfg.scene.noise_power = r.number("noise_power", 1.0);
    if (!(cfg.scene.noise_power > 0.0))
      r.fail("noise_power", "must be positive");
    clutter_count = r.integer("clutter_count", 0);
    if (clutter_count < 0) r.fail("clutter_count", "must not be negative");
    if (r.has("clutter_power")) {
      clutter_power = r.require_number("clutter_power");
      if (!(clutter_power > 0.0)) r.fail("clutter_power", "must be positive");
    }
    sector_given = r.has("sector_lo_deg") || r.has("sector_hi_deg");
    if (sector_given) {
      cfg.scene.sector.lo = r.require_number("sector_lo_deg") * kDegToRad;
      cfg.scene.sector.hi = r.require_number("sector_hi_deg") * kDegToRad;
      if (!(cfg.scene.sector.lo < cfg.scene.sector.hi))
        r.fail("sector_hi_deg", "sector must satisfy lo < hi");
    }
    if (r.has("ridge_reference_cell")) {
      const int cell = r.integer("ridge_reference_cell", 0);
      if (cell < 0 || cell >= cfg.num_range_cells)
        r.fail("ridge_reference_cell", "outside the scene's range extent");
      cfg.scene.ridge_reference_cell = cell;
    }
    cfg.scene.interference_cells = r.integers("interference_cells");
    for (const int cell : cfg.scene.interference_cells)
      if (cell < 0 || cell >= cfg.num_range_cells)
        r.fail("interference_cells", "cell " + std::to_string(cell) +
                                         " outside the scene's range extent");
    if (clutter_count > 0 &&
        (!r.has("sector_lo_deg") || !r.has("sector_hi_deg")))
      r.fail_section("clutter needs sector_lo_deg and sector_hi_deg");
  }

  read_target(doc, origin, cfg.radar, cfg.num_range_cells, cfg.scene);
  read_interferers(doc, origin, cfg.radar, cfg.scene);

  if (clutter_count > 0) {
    const std::complex<double> ref =
        cfg.scene.target.has_value() ? cfg.scene.target->amplitude : 1.0;
    const double power = clutter_power > 0.0
                             ? clutter_power
                             : clutter_power_for_scr(cfg.radar, ref);
    cfg.scene.scatters =
        uniform_clutter(cfg.scene.sector, clutter_count, power);
  }

  if (const io::TextSection* s = doc.find("grid")) {
    const Reader r(*s, origin, {"rho_s", "rho_t"});
    cfg.options.grid_rho_s = r.integer("rho_s", cfg.options.grid_rho_s);
    cfg.options.grid_rho_t = r.integer("rho_t", cfg.options.grid_rho_t);
    if (cfg.options.grid_rho_s < 1) r.fail("rho_s", "must be at least 1");
    if (cfg.options.grid_rho_t < 1) r.fail("rho_t", "must be at least 1");
  }

  if (const io::TextSection* s = doc.find("solver")) {
    const Reader r(*s, origin,
                   {"prune_threshold", "convergence_tol", "max_iterations",
                    "tsvd_level", "neighborhood_radius",
                    "overfocal_correlation_min", "max_restarts", "l1_epsilon",
                    "l1_max_iterations", "l1_kkt_tol", "l1_refit"});
    FocussOptions& f = cfg.options.focuss;
    f.prune_threshold = r.number("prune_threshold", f.prune_threshold);
    f.convergence_tol = r.number("convergence_tol", f.convergence_tol);
    f.max_iterations = r.integer("max_iterations", f.max_iterations);
    f.tsvd_level = r.number("tsvd_level", f.tsvd_level);
    f.neighborhood_radius =
        r.number("neighborhood_radius", f.neighborhood_radius);
    f.overfocal_correlation_min =
        r.number("overfocal_correlation_min", f.overfocal_correlation_min);
    f.max_restarts = r.integer("max_restarts", f.max_restarts);
    L1Options& l = cfg.options.l1;
    l.epsilon = r.number("l1_epsilon", l.epsilon);
    l.max_fista_iterations =
        r.integer("l1_max_iterations", l.max_fista_iterations);
    l.kkt_tol = r.number("l1_kkt_tol", l.kkt_tol);
    l.refit = r.flag("l1_refit", l.refit);
  }
  if (!(cfg.options.l1.epsilon > 0.0)) {
    // Discrepancy-principle default: budget the relaxation for the expected
    // noise energy in one snapshot rather than demanding an exact fit.
    cfg.options.l1.epsilon =
        std::sqrt(static_cast<double>(cfg.radar.num_channels) *
                  cfg.radar.num_pulses * cfg.scene.noise_power);
  }

  if (const io::TextSection* s = doc.find("stap")) {
    const Reader r(*s, origin,
                   {"ccm_loading", "lsmi_loading", "lsmi_training",
                    "subaperture_channels", "subaperture_pulses",
                    "soi_spatial_extent", "soi_doppler_extent"});
    PipelineOptions& o = cfg.options;
    o.ccm_loading = r.number("ccm_loading", o.ccm_loading);
    o.lsmi_loading = r.number("lsmi_loading", o.lsmi_loading);
    o.lsmi_training = r.integer("lsmi_training", o.lsmi_training);
    if (o.lsmi_training < 0) r.fail("lsmi_training", "must not be negative");
    o.subaperture_channels =
        r.integer("subaperture_channels", o.subaperture_channels);
    o.subaperture_pulses =
        r.integer("subaperture_pulses", o.subaperture_pulses);
    o.soi_spatial_extent =
        r.integer("soi_spatial_extent", o.soi_spatial_extent);
    o.soi_doppler_extent =
        r.integer("soi_doppler_extent", o.soi_doppler_extent);
    if (o.soi_spatial_extent < 1 || o.soi_doppler_extent < 1)
      r.fail_section("SOI extents must be at least 1");
  }

  if (const io::TextSection* s = doc.find("mdv")) {
    const Reader r(*s, origin, {"dopplers", "trials"});
    cfg.mdv_dopplers = r.numbers("dopplers");
    cfg.mdv_trials = r.integer("trials", cfg.mdv_trials);
    if (cfg.mdv_trials < 1) r.fail("trials", "must be at least 1");
    for (size_t i = 1; i < cfg.mdv_dopplers.size(); ++i)
      if (!(cfg.mdv_dopplers[i - 1] < cfg.mdv_dopplers[i]))
        r.fail("dopplers", "values must ascend strictly");
  }

  if (const io::TextSection* s = doc.find("run")) {
    const Reader r(*s, origin, {"methods", "output_dir", "seed"});
    cfg.output_dir = r.text("output_dir", cfg.output_dir);
    cfg.master_seed = r.seed("seed", cfg.master_seed);
    std::istringstream labels(r.text("methods", ""));
    std::string label;
    while (labels >> label) {
      Method method = Method::kNone;
      try {
        method = parse_method(label);
      } catch (const Error& e) {
        r.fail("methods", e.what());
      }
      for (const Method m : cfg.methods)
        if (m == method) r.fail("methods", "repeated method '" + label + "'");
      cfg.methods.push_back(method);
    }
  }

  cfg.scene.rng_seed = cfg.master_seed;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(io::read_document(path), path.string());
  } catch (const FileError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace d3sr
