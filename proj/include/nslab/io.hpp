#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nslab/experiments.hpp"
#include "nslab/field.hpp"
#include "nslab/solver.hpp"
#include "nslab/trajectory.hpp"

namespace nslab::io {

inline constexpr std::string_view kVersion = "0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

struct ConfigEntry {
  std::string value;
  int line = 0;
  int column = 0;  // 1-based column of the value
};

/// Flat `key = value` file; `#` starts a comment, blank lines are ignored.
class Config {
 public:
  std::string source = "<string>";
  std::map<std::string, ConfigEntry> entries;

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  /// Hash of the sorted key=value pairs; independent of comments and layout.
  std::uint64_t hash() const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  /// "1:1.0, 2:0.5" -> {{1, 1.0}, {2, 0.5}}
  std::vector<ShellSpec> get_shells(const std::string& key) const;
};

/// Syntax errors carry "source:line:column".
Config parse_config_text(std::string_view text, const std::string& source = "<string>");
/// Io when the file cannot be read.
Config parse_config(const std::filesystem::path& path);

enum class ValueType { Int, UInt, Double, Bool, String, IntList, ShellList };

struct SchemaKey {
  std::string key;
  ValueType type = ValueType::Double;
  bool required = false;
  std::optional<double> min;  // inclusive unless the exclusive flags are set
  std::optional<double> max;
  bool min_exclusive = false;
  bool max_exclusive = false;
  std::string help;
};

struct Schema {
  std::string name;
  std::vector<SchemaKey> keys;
  const SchemaKey* find(const std::string& key) const;
};

/// Schemas: "solve", "picard", "experiment:<scenario>".
Schema schema_for(const std::string& name);
/// Throws Schema naming every violation (unknown key, missing key, bad type, range).
void validate(const Config& cfg, const Schema& schema);
/// Human-readable key list for --help output.
std::string describe(const Schema& schema);

ExperimentConfig experiment_config(const Config& cfg, Scenario scenario);
SolverConfig solver_config(const Config& cfg);

// Snapshot layout (little endian):
//   "NSLB1" | u32 N | u32 components | u8 real | u32 label length | label bytes
//   then per component, n1, n2, n3 each ascending over -N/2+1 .. N/2: f64 re, f64 im
void write_snapshot(const SpectralField& f, const std::filesystem::path& path);
SpectralField read_snapshot(const std::filesystem::path& path);

/// "# nslab <version> config_hash=<hex>"
std::string csv_comment(std::uint64_t config_hash);
/// Shortest round-trip representation.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::filesystem::path path_;
  std::string buffer_;
};

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<std::pair<double, Diagnostics>>& rows,
                           std::uint64_t config_hash);
std::vector<std::pair<double, Diagnostics>> diagnostics_of(const Trajectory& tr);

/// Writes report.csv, summary.csv, estimates.csv (when present), diagnostics.csv
/// (when present), one snapshot per report snapshot and manifest.txt into dir.
/// Fills report.manifest with the written file names.
void write_report(ExperimentReport& report, const std::filesystem::path& dir, std::uint64_t config_hash);

}  // namespace nslab::io
