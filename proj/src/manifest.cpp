#include "ilw/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ilw {

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(const std::vector<Real>& values) {
  if (values.size() != columns_.size()) throw ConfigError("CsvTable: column count mismatch");
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (Real v : values) cells.push_back(format_real(v));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row_raw(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw ConfigError("CsvTable: column count mismatch");
  rows_.push_back(cells);
}

std::string CsvTable::body() const {
  std::string out;
  for (size_t i = 0; i < columns_.size(); ++i) {
    out += columns_[i];
    out += (i + 1 < columns_.size()) ? "," : "\n";
  }
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      out += (i + 1 < row.size()) ? "," : "\n";
    }
  }
  return out;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "ilw-lab";
  j["version"] = version;
  j["experiment"] = experiment;
  j["config"] = config_echo;
  j["elapsedSeconds"] = elapsed_seconds;
  j["timings"] = timings;
  j["drifts"] = drifts;
  j["warnings"] = warnings;
  j["gateViolations"] = gate_violations;
  j["notes"] = notes;
  j["status"] = status;
  j["outputs"] = nlohmann::json::array();
  for (const auto& rec : outputs) {
    j["outputs"].push_back({{"file", rec.file}, {"bytes", rec.bytes}, {"fnv1a64", rec.checksum}});
  }
  return j;
}

void emit_file(const std::string& dir, const std::string& name, const std::string& body,
               RunManifest& manifest) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / name, std::ios::binary);
  if (!out) throw ConfigError("emit_file: cannot open " + name + " under " + dir);
  out << body;
  manifest.outputs.push_back({name, body.size(), fnv1a64_hex(body)});
}

void write_manifest(const std::string& dir, const RunManifest& manifest) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / "manifest.json");
  out << manifest.to_json().dump(2) << "\n";
}

bool verify_manifest(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) return false;
  nlohmann::json j;
  in >> j;
  for (const auto& rec : j.at("outputs")) {
    std::ifstream f(fs::path(dir) / rec.at("file").get<std::string>(), std::ios::binary);
    if (!f) return false;
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (bytes.size() != rec.at("bytes").get<std::size_t>()) return false;
    if (fnv1a64_hex(bytes) != rec.at("fnv1a64").get<std::string>()) return false;
  }
  return true;
}

}  // namespace ilw
