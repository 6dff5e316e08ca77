#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "feketelab/family.hpp"

namespace feketelab::persist {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kCsvHeader =
    "D,n_zeros_grid,n_zeros_window,sign_changes_full,sign_changes_window,all_nonneg,log_l_s055,log_l_s075";

enum class Format { csv, jsonl };
Format format_from_path(const std::string& path);

// Shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
// Hash of the canonical (sorted-key, compact) serialization, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

std::string code_version();

struct Manifest {
  int schema_version = kSchemaVersion;
  std::string path;
  Format format = Format::csv;
  nlohmann::json config;
  std::string config_hash;
  std::string code_version;
  std::uint64_t rows = 0;
  double wall_seconds = 0;
  bool complete = false;
  std::string error;
};

nlohmann::json to_json(const Manifest& m);
// Written next to the data file as <path>.manifest.json.
void write_manifest(const Manifest& m);
std::string manifest_path(const std::string& data_path);

nlohmann::json to_json(const family::FamilyRecord& r);
family::FamilyRecord record_from_json(const nlohmann::json& j);
std::string to_csv_row(const family::FamilyRecord& r);
family::FamilyRecord record_from_csv(std::string_view row);

// Streams records to a file. An I/O failure writes a partial manifest
// (complete = false, rows written so far) and throws IoError.
class RecordWriter {
 public:
  RecordWriter(std::string path, Format format, nlohmann::json config);
  void write(const family::FamilyRecord& r);
  // Flushes and records progress in the manifest.
  void checkpoint(double wall_seconds);
  Manifest finish(double wall_seconds);

 private:
  void fail(const std::string& what);
  Manifest manifest_;
  std::ofstream out_;
};

std::vector<family::FamilyRecord> load_records(const std::string& path);

}  // namespace feketelab::persist
