#pragma once

// Run provenance: CSV emission with fixed formatting, content checksums,
// and the machine-readable manifest written next to every experiment's
// outputs (including partial failures).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilw/spectral.hpp"

namespace ilw {

inline constexpr const char* kToolVersion = "1.0.0";

/// FNV-1a 64-bit content hash, hex encoded.
std::string fnv1a64_hex(const std::string& bytes);

/// Format a double with 17 significant digits (round-trip exact).
std::string format_real(Real v);

/// In-memory CSV: header fixed at construction, rows appended as values.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(const std::vector<Real>& values);
  void add_row_raw(const std::vector<std::string>& cells);
  std::string body() const;
  int rows() const { return int(rows_.size()); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct OutputRecord {
  std::string file;
  std::size_t bytes = 0;
  std::string checksum;
};

struct RunManifest {
  std::string experiment;
  nlohmann::json config_echo;
  std::string version = kToolVersion;
  Real elapsed_seconds = 0;
  std::map<std::string, Real> timings;
  std::map<std::string, Real> drifts;
  std::vector<std::string> warnings;
  std::vector<std::string> gate_violations;
  nlohmann::json notes = nlohmann::json::object();
  std::vector<OutputRecord> outputs;
  std::string status = "ok";  // "ok" | "partial"

  nlohmann::json to_json() const;
};

/// Write `body` under dir/name and append its checksum to the manifest.
void emit_file(const std::string& dir, const std::string& name, const std::string& body,
               RunManifest& manifest);

void write_manifest(const std::string& dir, const RunManifest& manifest);

/// Recompute checksums of every listed output; true when all match.
bool verify_manifest(const std::string& dir);

}  // namespace ilw
