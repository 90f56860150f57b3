#ifndef D3SR_IO_HPP
#define D3SR_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "d3sr/metrics.hpp"
#include "d3sr/scene.hpp"
#include "d3sr/spectrum.hpp"
#include "d3sr/stap.hpp"

namespace d3sr::io {

// ======================= sectioned text layer =========================
//
// Every artifact and config file shares one grammar: '[name]' opens a
// section, 'key = value' adds an entry to it, '#' starts a comment, blank
// lines separate.  Values run to end of line with surrounding whitespace
// trimmed; repeated section names and repeated keys are legal at this
// level (artifact files use them for per-cell and per-curve blocks).

struct TextEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct TextSection {
  std::string name;
  int line = 0;
  std::vector<TextEntry> entries;

  void add(const std::string& key, const std::string& value);
  // First value under the key, or null when absent.
  const std::string* find(const std::string& key) const;
  // Same, but missing keys throw FileError naming section and key.
  const std::string& need(const std::string& key) const;
};

struct TextDocument {
  std::vector<TextSection> sections;

  TextSection& add(const std::string& name);
  const TextSection* find(const std::string& name) const;
  const TextSection& need(const std::string& name) const;
};

// `origin` names the source (file path) in parse diagnostics.
TextDocument parse_document(const std::string& text, const std::string& origin);
std::string render_document(const TextDocument& doc);

TextDocument read_document(const std::filesystem::path& path);
// Write-temp-then-rename; partial files never appear under `path`.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);
void write_document(const std::filesystem::path& path,
                    const TextDocument& doc);

// ========================= number formatting ==========================
//
// Doubles print with 17 significant digits so every binary64 value
// survives a write/read cycle bit-exactly; complex values are adjacent
// (re, im) pairs.

std::string format_double(double v);
std::string format_doubles(const std::vector<double>& v);
std::string format_complex_vector(const CVector& v);
std::string format_ints(const std::vector<int>& v);

double parse_double(const std::string& token);
std::vector<double> parse_doubles(const std::string& text);
CVector parse_complex_vector(const std::string& text);
std::vector<int> parse_ints(const std::string& text);
int parse_int(const std::string& token);
std::uint64_t parse_uint64(const std::string& token);

// FNV-1a over the bytes, as 16 hex digits; the manifest's content hash.
std::string content_hash(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

// ========================= typed artifacts ============================

struct CubeFile {
  RadarConfig radar;
  std::vector<Snapshot> cells;
  int target_cell = -1;  // -1: no target present
  std::vector<int> interference_cells;
  double noise_power = 1.0;
  std::uint64_t seed = 0;
};

void write_cube(const std::filesystem::path& path, const CubeFile& cube);
CubeFile read_cube(const std::filesystem::path& path);

// One grid-shaped complex spectrum: the Fourier correlation ("fourier")
// or a sparse estimate ("sparse", amplitudes stored over the support).
// The stored dB grid (num_doppler rows x num_spatial columns) is a
// derived plotting view; the complex amplitudes are authoritative.
struct SpectrumFile {
  std::string kind;  // "fourier" | "sparse"
  int num_spatial = 0;
  int num_doppler = 0;
  int rho_s = 0;  // 0 when the grid is not tied to a radar config
  int rho_t = 0;
  CVector amplitudes;        // full grid length, zero off support
  std::vector<int> support;  // sparse only, ascending
  double residual_norm = 0.0;
  int iterations = 0;
  int attempts = 1;
};

void write_spectrum(const std::filesystem::path& path,
                    const SpectrumFile& spectrum);
SpectrumFile read_spectrum(const std::filesystem::path& path);

// Power map over the grid in dB (doppler rows x spatial columns); the
// adapted-spectrum artifact.  Write-only plot data.
void write_power_map(const std::filesystem::path& path,
                     const Eigen::MatrixXd& db, const std::string& method);

void write_filter(const std::filesystem::path& path, const StapFilter& filter);
StapFilter read_filter(const std::filesystem::path& path);

// (range_cell, power_db) rows.
void write_profile(const std::filesystem::path& path,
                   const std::vector<double>& power_db,
                   const std::string& method);

// One [curve] block per entry: (doppler, mean_scr_db, trials, failures)
// rows under per-method metadata.
void write_curves(const std::filesystem::path& path,
                  const std::vector<MdvCurve>& curves,
                  std::uint64_t master_seed);

struct ManifestEntry {
  std::string filename;
  std::string hash;
};

void write_manifest(const std::filesystem::path& path,
                    const std::string& tool_version,
                    const std::string& config_hash, std::uint64_t master_seed,
                    const std::string& method,
                    const std::vector<ManifestEntry>& artifacts);

}  // namespace d3sr::io

#endif  // D3SR_IO_HPP
