#include "feketelab/persist.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "feketelab/errors.hpp"

#ifndef FEKETELAB_VERSION
#define FEKETELAB_VERSION "unknown"
#endif

namespace feketelab::persist {

using nlohmann::json;

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("malformed number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Format format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "csv") return Format::csv;
  if (ext == "jsonl" || ext == "json" || ext == "ndjson") return Format::jsonl;
  throw DomainError("unknown output format for '" + path + "' (use .csv or .jsonl)");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

std::string code_version() { return FEKETELAB_VERSION; }

json to_json(const Manifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["path"] = m.path;
  j["format"] = m.format == Format::csv ? "csv" : "jsonl";
  j["config"] = m.config;
  j["config_hash"] = m.config_hash;
  j["code_version"] = m.code_version;
  j["rows"] = m.rows;
  j["wall_seconds"] = m.wall_seconds;
  j["complete"] = m.complete;
  if (!m.error.empty()) j["error"] = m.error;
  return j;
}

std::string manifest_path(const std::string& data_path) { return data_path + ".manifest.json"; }

void write_manifest(const Manifest& m) {
  std::ofstream f(manifest_path(m.path), std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open manifest for '" + m.path + "'");
  f << to_json(m).dump(2) << '\n';
  if (!f) throw IoError("cannot write manifest for '" + m.path + "'");
}

json to_json(const family::FamilyRecord& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["D"] = r.D;
  j["n_zeros_grid"] = r.n_zeros_grid;
  j["n_zeros_window"] = r.n_zeros_window;
  j["sign_changes_full"] = r.sign_changes_full;
  j["sign_changes_window"] = r.sign_changes_window;
  j["all_nonneg"] = r.all_partial_sums_nonneg;
  json ll = json::array();
  for (const auto& [s, v] : r.log_l_at) ll.push_back({{"s", s}, {"value", v}});
  j["log_l_at"] = ll;
  return j;
}

family::FamilyRecord record_from_json(const json& j) {
  if (!j.contains("schema_version")) throw IoError("record without schema_version");
  if (j.at("schema_version").get<int>() != kSchemaVersion) throw IoError("unsupported schema_version");
  family::FamilyRecord r;
  r.D = j.at("D").get<std::int64_t>();
  r.n_zeros_grid = j.at("n_zeros_grid").get<std::uint64_t>();
  r.n_zeros_window = j.at("n_zeros_window").get<std::uint64_t>();
  r.sign_changes_full = j.at("sign_changes_full").get<std::uint64_t>();
  r.sign_changes_window = j.at("sign_changes_window").get<std::uint64_t>();
  r.all_partial_sums_nonneg = j.at("all_nonneg").get<bool>();
  for (const auto& e : j.at("log_l_at")) r.log_l_at.emplace_back(e.at("s").get<double>(), e.at("value").get<double>());
  return r;
}

std::string to_csv_row(const family::FamilyRecord& r) {
  if (r.log_l_at.size() != 2 || r.log_l_at[0].first != 0.55 || r.log_l_at[1].first != 0.75) {
    throw DomainError("CSV schema needs log L at s = 0.55 and s = 0.75; use JSON lines for other s");
  }
  std::string row = std::to_string(r.D);
  for (auto v : {r.n_zeros_grid, r.n_zeros_window, r.sign_changes_full, r.sign_changes_window}) {
    row += ',';
    row += std::to_string(v);
  }
  row += r.all_partial_sums_nonneg ? ",1," : ",0,";
  row += format_double(r.log_l_at[0].second);
  row += ',';
  row += format_double(r.log_l_at[1].second);
  return row;
}

family::FamilyRecord record_from_csv(std::string_view row) {
  const auto f = split(row, ',');
  if (f.size() != 8) throw IoError("CSV row with " + std::to_string(f.size()) + " fields, expected 8");
  family::FamilyRecord r;
  r.D = parse_number<std::int64_t>(f[0]);
  r.n_zeros_grid = parse_number<std::uint64_t>(f[1]);
  r.n_zeros_window = parse_number<std::uint64_t>(f[2]);
  r.sign_changes_full = parse_number<std::uint64_t>(f[3]);
  r.sign_changes_window = parse_number<std::uint64_t>(f[4]);
  r.all_partial_sums_nonneg = parse_number<int>(f[5]) != 0;
  r.log_l_at = {{0.55, parse_number<double>(f[6])}, {0.75, parse_number<double>(f[7])}};
  return r;
}

RecordWriter::RecordWriter(std::string path, Format format, json config) {
  manifest_.path = std::move(path);
  manifest_.format = format;
  manifest_.config_hash = config_hash(config);
  manifest_.config = std::move(config);
  manifest_.code_version = code_version();
  out_.open(manifest_.path, std::ios::binary | std::ios::trunc);
  if (!out_) fail("cannot open '" + manifest_.path + "' for writing");
  if (format == Format::csv) out_ << kCsvHeader << '\n';
  if (!out_) fail("write failed on '" + manifest_.path + "'");
}

void RecordWriter::fail(const std::string& what) {
  manifest_.complete = false;
  manifest_.error = what;
  try {
    write_manifest(manifest_);
  } catch (const IoError&) {
    // the data location itself is unwritable; nothing more to record
  }
  throw IoError(what);
}

void RecordWriter::write(const family::FamilyRecord& r) {
  if (manifest_.format == Format::csv) {
    out_ << to_csv_row(r) << '\n';
  } else {
    out_ << to_json(r).dump() << '\n';
  }
  if (!out_) fail("write failed on '" + manifest_.path + "' after " + std::to_string(manifest_.rows) + " rows");
  ++manifest_.rows;
}

void RecordWriter::checkpoint(double wall_seconds) {
  out_.flush();
  if (!out_) fail("flush failed on '" + manifest_.path + "'");
  manifest_.wall_seconds = wall_seconds;
  write_manifest(manifest_);
}

Manifest RecordWriter::finish(double wall_seconds) {
  out_.flush();
  if (!out_) fail("flush failed on '" + manifest_.path + "'");
  out_.close();
  manifest_.wall_seconds = wall_seconds;
  manifest_.complete = true;
  write_manifest(manifest_);
  return manifest_;
}

std::vector<family::FamilyRecord> load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<family::FamilyRecord> out;
  std::string line;
  const Format fmt = format_from_path(path);
  if (fmt == Format::csv) {
    if (!std::getline(in, line) || line != kCsvHeader) throw IoError("'" + path + "' lacks the expected CSV header");
    while (std::getline(in, line)) {
      if (!line.empty()) out.push_back(record_from_csv(line));
    }
  } else {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        out.push_back(record_from_json(json::parse(line)));
      } catch (const json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
      }
    }
  }
  return out;
}

}  // namespace feketelab::persist
