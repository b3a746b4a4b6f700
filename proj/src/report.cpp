#include "qalab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "qalab/errors.hpp"

namespace qalab {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  if (std::abs(x) < 1e-3) {
    os << std::scientific << std::setprecision(11) << x;
  } else {
    os << std::setprecision(12) << x;
  }
  return os.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: OpenSSL digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

CsvTable::CsvTable(std::string comment, std::vector<std::string> columns)
    : comment_(std::move(comment)), columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw ContractError("CsvTable: row has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(columns_.size()));
  }
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  lines_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out = "# " + comment_ + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& l : lines_) out += l + '\n';
  return out;
}

std::string RunManifest::config_digest() const { return sha256_hex(config.dump()); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command_line"] = command_line;
  j["config"] = config;
  j["config_digest"] = config_digest();
  j["wall_clock_seconds"] = wall_clock_seconds;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& [path, digest] : outputs) outs.push_back({{"path", path}, {"sha256", digest}});
  j["outputs"] = outs;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command_line = j.at("command_line").get<std::vector<std::string>>();
  m.config = j.at("config");
  m.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  for (const auto& o : j.value("outputs", nlohmann::json::array())) {
    m.outputs.emplace_back(o.at("path").get<std::string>(), o.at("sha256").get<std::string>());
  }
  return m;
}

}  // namespace qalab
