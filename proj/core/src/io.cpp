#include "d3sr/io.hpp"

#include <atomic>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <system_error>

#include "d3sr/errors.hpp"

namespace d3sr::io {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double power_db_of(const std::complex<double>& a) {
  const double p = std::norm(a);
  return p > 0.0 ? 10.0 * std::log10(p)
                 : -std::numeric_limits<double>::infinity();
}

void append_power_rows(TextSection& section, int num_spatial, int num_doppler,
                       const std::function<double(int, int)>& value) {
  for (int d = 0; d < num_doppler; ++d) {
    std::string row;
    for (int s = 0; s < num_spatial; ++s) {
      if (s > 0) row += ' ';
      row += format_double(value(s, d));
    }
    section.add("row_" + std::to_string(d), row);
  }
}

void write_radar_block(TextDocument& doc, const RadarConfig& cfg) {
  auto& r = doc.add("radar");
  r.add("channels", std::to_string(cfg.num_channels));
  r.add("pulses", std::to_string(cfg.num_pulses));
  r.add("velocity", format_double(cfg.velocity));
  r.add("pri", format_double(cfg.pri));
  r.add("sample_rate", format_double(cfg.sample_rate));
  r.add("wavelength", format_double(cfg.wavelength));
  r.add("spacing", format_double(cfg.spacing));
  r.add("height", format_double(cfg.height));
  r.add("crab", format_double(cfg.crab));
  r.add("input_scr_db", format_double(cfg.input_scr_db));
}

RadarConfig read_radar_block(const TextSection& r) {
  RadarConfig cfg;
  cfg.num_channels = parse_int(r.need("channels"));
  cfg.num_pulses = parse_int(r.need("pulses"));
  cfg.velocity = parse_double(r.need("velocity"));
  cfg.pri = parse_double(r.need("pri"));
  cfg.sample_rate = parse_double(r.need("sample_rate"));
  cfg.wavelength = parse_double(r.need("wavelength"));
  cfg.spacing = parse_double(r.need("spacing"));
  cfg.height = parse_double(r.need("height"));
  cfg.crab = parse_double(r.need("crab"));
  cfg.input_scr_db = parse_double(r.need("input_scr_db"));
  return cfg;
}

void check_version(const TextSection& head) {
  if (parse_int(head.need("version")) != 1)
    throw FileError("[" + head.name + "] has an unsupported version");
}

FilterMethod parse_filter_method(const std::string& name) {
  if (name == "d3sr") return FilterMethod::kD3sr;
  if (name == "d3ls") return FilterMethod::kD3ls;
  if (name == "lsmi") return FilterMethod::kLsmi;
  if (name == "none") return FilterMethod::kNone;
  throw FileError("unknown filter method '" + name + "'");
}

}  // namespace

// ======================= sectioned text layer =========================

void TextSection::add(const std::string& key, const std::string& value) {
  entries.push_back({key, value, 0});
}

const std::string* TextSection::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e.value;
  return nullptr;
}

const std::string& TextSection::need(const std::string& key) const {
  const std::string* v = find(key);
  if (v == nullptr)
    throw FileError("[" + name + "] is missing the key '" + key + "'");
  return *v;
}

TextSection& TextDocument::add(const std::string& name) {
  sections.push_back({name, 0, {}});
  return sections.back();
}

const TextSection* TextDocument::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const TextSection& TextDocument::need(const std::string& name) const {
  const TextSection* s = find(name);
  if (s == nullptr) throw FileError("missing the [" + name + "] section");
  return *s;
}

TextDocument parse_document(const std::string& text,
                            const std::string& origin) {
  TextDocument doc;
  std::istringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    // '#' starts a comment anywhere on the line; values cannot contain it.
    const std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line);
    if (s.front() == '[') {
      if (s.back() != ']')
        throw FileError(where + ": unterminated section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) throw FileError(where + ": empty section name");
      doc.sections.push_back({name, line, {}});
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw FileError(where + ": expected 'key = value' or '[section]'");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw FileError(where + ": empty key");
    if (doc.sections.empty())
      throw FileError(where + ": entry before any section");
    doc.sections.back().entries.push_back({key, trim(s.substr(eq + 1)), line});
  }
  return doc;
}

std::string render_document(const TextDocument& doc) {
  std::string out;
  bool first = true;
  for (const auto& section : doc.sections) {
    if (!first) out += '\n';
    first = false;
    out += '[' + section.name + "]\n";
    for (const auto& e : section.entries)
      out += e.key + " = " + e.value + '\n';
  }
  return out;
}

TextDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FileError("read failed on '" + path.string() + "'");
  return parse_document(buf.str(), path.string());
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const auto tmp = std::filesystem::path(
      path.string() + ".tmp" + std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot create '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out.good()) {
      out.close();
      std::filesystem::remove(tmp);
      throw FileError("write failed on '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FileError("cannot move '" + tmp.string() + "' to '" + path.string() +
                    "': " + ec.message());
  }
}

void write_document(const std::filesystem::path& path,
                    const TextDocument& doc) {
  write_text_atomic(path, render_document(doc));
}

// ========================= number formatting ==========================

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_doubles(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

std::string format_complex_vector(const CVector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_double(v[i].real());
    out += ' ';
    out += format_double(v[i].imag());
  }
  return out;
}

std::string format_ints(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

double parse_double(const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) throw FileError("empty numeric token");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw FileError("bad numeric token '" + t + "'");
  return v;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) out.push_back(parse_double(token));
  return out;
}

CVector parse_complex_vector(const std::string& text) {
  const std::vector<double> parts = parse_doubles(text);
  if (parts.size() % 2 != 0)
    throw FileError("complex vector has an odd number of components");
  CVector v(static_cast<Eigen::Index>(parts.size() / 2));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = std::complex<double>(parts[2 * i], parts[2 * i + 1]);
  return v;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) out.push_back(parse_int(token));
  return out;
}

int parse_int(const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) throw FileError("empty integer token");
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || errno == ERANGE ||
      v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw FileError("bad integer token '" + t + "'");
  return static_cast<int>(v);
}

std::uint64_t parse_uint64(const std::string& token) {
  const std::string t = trim(token);
  if (t.empty() || t[0] == '-') throw FileError("bad seed token '" + t + "'");
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw FileError("bad seed token '" + t + "'");
  return v;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FileError("read failed on '" + path.string() + "'");
  return content_hash(buf.str());
}

// ========================= typed artifacts ============================

void write_cube(const std::filesystem::path& path, const CubeFile& cube) {
  TextDocument doc;
  auto& head = doc.add("cube");
  head.add("version", "1");
  head.add("cells", std::to_string(cube.cells.size()));
  const Eigen::Index size =
      cube.cells.empty() ? 0 : cube.cells.front().data.size();
  head.add("size", std::to_string(size));
  head.add("target_cell", std::to_string(cube.target_cell));
  head.add("noise_power", format_double(cube.noise_power));
  head.add("seed", std::to_string(cube.seed));
  head.add("interference_cells", format_ints(cube.interference_cells));

  write_radar_block(doc, cube.radar);

  for (const auto& snap : cube.cells) {
    auto& cell = doc.add("cell");
    cell.add("index", std::to_string(snap.range_cell));
    cell.add("seed", std::to_string(snap.seed));
    cell.add("data", format_complex_vector(snap.data));
    cell.add("clutter", format_complex_vector(snap.clutter));
    cell.add("interference", format_complex_vector(snap.interference));
    cell.add("target", format_complex_vector(snap.target));
    cell.add("noise", format_complex_vector(snap.noise));
  }
  write_document(path, doc);
}

CubeFile read_cube(const std::filesystem::path& path) {
  const TextDocument doc = read_document(path);
  const auto& head = doc.need("cube");
  check_version(head);

  CubeFile cube;
  cube.radar = read_radar_block(doc.need("radar"));
  cube.target_cell = parse_int(head.need("target_cell"));
  cube.noise_power = parse_double(head.need("noise_power"));
  cube.seed = parse_uint64(head.need("seed"));
  cube.interference_cells = parse_ints(head.need("interference_cells"));

  const int cells = parse_int(head.need("cells"));
  const int size = parse_int(head.need("size"));
  for (const auto& section : doc.sections) {
    if (section.name != "cell") continue;
    Snapshot snap;
    snap.range_cell = parse_int(section.need("index"));
    snap.seed = parse_uint64(section.need("seed"));
    snap.data = parse_complex_vector(section.need("data"));
    snap.clutter = parse_complex_vector(section.need("clutter"));
    snap.interference = parse_complex_vector(section.need("interference"));
    snap.target = parse_complex_vector(section.need("target"));
    snap.noise = parse_complex_vector(section.need("noise"));
    if (snap.data.size() != size)
      throw FileError("cell " + std::to_string(snap.range_cell) +
                      " does not match the declared snapshot size");
    cube.cells.push_back(std::move(snap));
  }
  if (static_cast<int>(cube.cells.size()) != cells)
    throw FileError("cube declares " + std::to_string(cells) + " cells but " +
                    std::to_string(cube.cells.size()) + " are present");
  return cube;
}

void write_spectrum(const std::filesystem::path& path,
                    const SpectrumFile& spectrum) {
  if (spectrum.kind != "fourier" && spectrum.kind != "sparse")
    throw FileError("spectrum kind must be 'fourier' or 'sparse'");
  const Eigen::Index grid_size =
      static_cast<Eigen::Index>(spectrum.num_spatial) * spectrum.num_doppler;
  if (spectrum.amplitudes.size() != grid_size)
    throw FileError("spectrum amplitudes do not cover the grid");

  TextDocument doc;
  auto& head = doc.add("spectrum");
  head.add("version", "1");
  head.add("kind", spectrum.kind);
  head.add("num_spatial", std::to_string(spectrum.num_spatial));
  head.add("num_doppler", std::to_string(spectrum.num_doppler));
  head.add("rho_s", std::to_string(spectrum.rho_s));
  head.add("rho_t", std::to_string(spectrum.rho_t));
  if (spectrum.kind == "sparse") {
    head.add("residual", format_double(spectrum.residual_norm));
    head.add("iterations", std::to_string(spectrum.iterations));
    head.add("attempts", std::to_string(spectrum.attempts));
  }

  auto& amps = doc.add("amplitudes");
  if (spectrum.kind == "sparse") {
    amps.add("support", format_ints(spectrum.support));
    CVector active(static_cast<Eigen::Index>(spectrum.support.size()));
    for (size_t i = 0; i < spectrum.support.size(); ++i)
      active[static_cast<Eigen::Index>(i)] =
          spectrum.amplitudes[spectrum.support[i]];
    amps.add("values", format_complex_vector(active));
  } else {
    amps.add("values", format_complex_vector(spectrum.amplitudes));
  }

  auto& power = doc.add("power_db");
  append_power_rows(power, spectrum.num_spatial, spectrum.num_doppler,
                    [&](int s, int d) {
                      return power_db_of(spectrum.amplitudes
                                             [static_cast<Eigen::Index>(d) *
                                                  spectrum.num_spatial +
                                              s]);
                    });
  write_document(path, doc);
}

SpectrumFile read_spectrum(const std::filesystem::path& path) {
  const TextDocument doc = read_document(path);
  const auto& head = doc.need("spectrum");
  check_version(head);

  SpectrumFile spectrum;
  spectrum.kind = head.need("kind");
  if (spectrum.kind != "fourier" && spectrum.kind != "sparse")
    throw FileError("unsupported spectrum kind '" + spectrum.kind + "'");
  spectrum.num_spatial = parse_int(head.need("num_spatial"));
  spectrum.num_doppler = parse_int(head.need("num_doppler"));
  spectrum.rho_s = parse_int(head.need("rho_s"));
  spectrum.rho_t = parse_int(head.need("rho_t"));
  const Eigen::Index grid_size =
      static_cast<Eigen::Index>(spectrum.num_spatial) * spectrum.num_doppler;
  if (grid_size <= 0) throw FileError("spectrum grid is empty");

  const auto& amps = doc.need("amplitudes");
  if (spectrum.kind == "sparse") {
    spectrum.residual_norm = parse_double(head.need("residual"));
    spectrum.iterations = parse_int(head.need("iterations"));
    spectrum.attempts = parse_int(head.need("attempts"));
    spectrum.support = parse_ints(amps.need("support"));
    const CVector active = parse_complex_vector(amps.need("values"));
    if (active.size() != static_cast<Eigen::Index>(spectrum.support.size()))
      throw FileError("support and amplitude counts differ");
    spectrum.amplitudes = CVector::Zero(grid_size);
    int last = -1;
    for (size_t i = 0; i < spectrum.support.size(); ++i) {
      const int idx = spectrum.support[i];
      if (idx <= last || idx >= grid_size)
        throw FileError("support indices must ascend within the grid");
      last = idx;
      spectrum.amplitudes[idx] = active[static_cast<Eigen::Index>(i)];
    }
  } else {
    spectrum.amplitudes = parse_complex_vector(amps.need("values"));
    if (spectrum.amplitudes.size() != grid_size)
      throw FileError("amplitude count does not match the grid");
  }
  return spectrum;
}

void write_power_map(const std::filesystem::path& path,
                     const Eigen::MatrixXd& db, const std::string& method) {
  TextDocument doc;
  auto& head = doc.add("spectrum");
  head.add("version", "1");
  head.add("kind", "adapted");
  head.add("method", method);
  head.add("num_spatial", std::to_string(db.cols()));
  head.add("num_doppler", std::to_string(db.rows()));

  auto& power = doc.add("power_db");
  append_power_rows(power, static_cast<int>(db.cols()),
                    static_cast<int>(db.rows()),
                    [&](int s, int d) { return db(d, s); });
  write_document(path, doc);
}

void write_filter(const std::filesystem::path& path,
                  const StapFilter& filter) {
  TextDocument doc;
  auto& head = doc.add("filter");
  head.add("version", "1");
  head.add("method", method_name(filter.method));
  head.add("spatial_freq", format_double(filter.soi.spatial_freq));
  head.add("doppler_freq", format_double(filter.soi.doppler_freq));
  head.add("spatial_extent", std::to_string(filter.soi.spatial_extent));
  head.add("doppler_extent", std::to_string(filter.soi.doppler_extent));
  head.add("normalization", format_double(filter.normalization.real()) + " " +
                                format_double(filter.normalization.imag()));
  head.add("channels", std::to_string(filter.num_channels));
  head.add("pulses", std::to_string(filter.num_pulses));
  head.add("subaperture_channels",
           std::to_string(filter.subaperture_channels));
  head.add("subaperture_pulses", std::to_string(filter.subaperture_pulses));
  head.add("rank_deficient", filter.rank_deficient ? "1" : "0");

  auto& weights = doc.add("weights");
  weights.add("values", format_complex_vector(filter.weights));
  write_document(path, doc);
}

StapFilter read_filter(const std::filesystem::path& path) {
  const TextDocument doc = read_document(path);
  const auto& head = doc.need("filter");
  check_version(head);

  StapFilter filter;
  filter.method = parse_filter_method(head.need("method"));
  filter.soi.spatial_freq = parse_double(head.need("spatial_freq"));
  filter.soi.doppler_freq = parse_double(head.need("doppler_freq"));
  filter.soi.spatial_extent = parse_int(head.need("spatial_extent"));
  filter.soi.doppler_extent = parse_int(head.need("doppler_extent"));
  const CVector norm = parse_complex_vector(head.need("normalization"));
  if (norm.size() != 1) throw FileError("normalization must be one pair");
  filter.normalization = norm[0];
  filter.num_channels = parse_int(head.need("channels"));
  filter.num_pulses = parse_int(head.need("pulses"));
  filter.subaperture_channels = parse_int(head.need("subaperture_channels"));
  filter.subaperture_pulses = parse_int(head.need("subaperture_pulses"));
  filter.rank_deficient = parse_int(head.need("rank_deficient")) != 0;
  filter.weights = parse_complex_vector(doc.need("weights").need("values"));
  if (filter.weights.size() == 0) throw FileError("filter has no weights");
  return filter;
}

void write_profile(const std::filesystem::path& path,
                   const std::vector<double>& power_db,
                   const std::string& method) {
  TextDocument doc;
  auto& head = doc.add("profile");
  head.add("version", "1");
  head.add("method", method);
  head.add("cells", std::to_string(power_db.size()));

  auto& rows = doc.add("rows");
  for (size_t i = 0; i < power_db.size(); ++i)
    rows.add("row_" + std::to_string(i),
             std::to_string(i) + " " + format_double(power_db[i]));
  write_document(path, doc);
}

void write_curves(const std::filesystem::path& path,
                  const std::vector<MdvCurve>& curves,
                  std::uint64_t master_seed) {
  TextDocument doc;
  for (const auto& curve : curves) {
    auto& head = doc.add("curve");
    head.add("version", "1");
    head.add("method", method_label(curve.method));
    head.add("seed", std::to_string(master_seed));
    head.add("trials", std::to_string(curve.trials));
    head.add("points", std::to_string(curve.doppler_axis.size()));

    auto& rows = doc.add("rows");
    for (size_t i = 0; i < curve.doppler_axis.size(); ++i)
      rows.add("row_" + std::to_string(i),
               format_double(curve.doppler_axis[i]) + " " +
                   format_double(curve.mean_scr_db[i]) + " " +
                   std::to_string(curve.trials) + " " +
                   std::to_string(curve.failures[i]));
  }
  write_document(path, doc);
}

void write_manifest(const std::filesystem::path& path,
                    const std::string& tool_version,
                    const std::string& config_hash, std::uint64_t master_seed,
                    const std::string& method,
                    const std::vector<ManifestEntry>& artifacts) {
  TextDocument doc;
  auto& head = doc.add("manifest");
  head.add("version", "1");
  head.add("tool", tool_version);
  head.add("method", method);
  head.add("config_hash", config_hash);
  head.add("master_seed", std::to_string(master_seed));

  auto& files = doc.add("artifacts");
  for (const auto& entry : artifacts) files.add(entry.filename, entry.hash);
  write_document(path, doc);
}

}  // namespace d3sr::io
