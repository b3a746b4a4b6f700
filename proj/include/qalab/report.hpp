#pragma once

// CSV and manifest plumbing shared by the command-line front end.

#include <string>
#include <vector>

#include <json.hpp>

namespace qalab {

/// Comma-safe decimal rendering: scientific for 0 < |x| < 1e-3, plain
/// otherwise, 12 significant digits, '.' decimal separator in any locale.
std::string format_number(double x);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

/// Builds a CSV document: one comment line, one header row, then rows.
class CsvTable {
 public:
  CsvTable(std::string comment, std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);

  std::size_t columns() const noexcept { return columns_.size(); }
  std::string str() const;

 private:
  std::string comment_;
  std::vector<std::string> columns_;
  std::vector<std::string> lines_;
};

/// Record of one CLI invocation. `config` holds everything that determines
/// the output bytes; `config_digest` hashes its canonical dump, so reruns of
/// the same configuration stamp identical CSV comment lines.
struct RunManifest {
  std::vector<std::string> command_line;
  nlohmann::json config;
  double wall_clock_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> outputs;  ///< (path, sha256)

  std::string config_digest() const;
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

}  // namespace qalab
