#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "feketelab/errors.hpp"
#include "feketelab/family.hpp"
#include "feketelab/persist.hpp"

using namespace feketelab;
using namespace feketelab::persist;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "feketelab_test_persist";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json config(double eps) { return {{"x", 20}, {"sign", "positive"}, {"eps", eps}}; }

}  // namespace

TEST_CASE("formats") {
  CHECK(format_from_path("a.csv") == Format::csv);
  CHECK(format_from_path("a.jsonl") == Format::jsonl);
  CHECK(format_from_path("a.ndjson") == Format::jsonl);
  CHECK_THROWS_AS(format_from_path("a.txt"), DomainError);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("config hash is canonical and sensitive") {
  const nlohmann::json a = {{"b", 1}, {"a", 2}};
  const nlohmann::json b = {{"a", 2}, {"b", 1}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(config(0.1)) != config_hash(config(0.2)));
}

TEST_CASE("CSV round trip") {
  const auto recs = family::scan_family(20, arith::Sign::positive);
  const auto path = scratch("f20.csv");
  RecordWriter w(path.string(), Format::csv, config(0.1));
  for (const auto& r : recs) w.write(r);
  const auto m = w.finish(0.5);
  CHECK(m.rows == 5);
  CHECK(m.complete);
  const auto text = slurp(path);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK(load_records(path.string()) == recs);

  const auto mj = nlohmann::json::parse(slurp(manifest_path(path.string())));
  CHECK(mj["schema_version"] == kSchemaVersion);
  CHECK(mj["rows"] == 5);
  CHECK(mj["complete"] == true);
  CHECK(mj["config_hash"] == config_hash(config(0.1)));
  CHECK(mj["code_version"] == code_version());
}

TEST_CASE("JSONL round trip") {
  const auto recs = family::scan_family(30, arith::Sign::both);
  const auto path = scratch("f30.jsonl");
  RecordWriter w(path.string(), Format::jsonl, config(0.1));
  for (const auto& r : recs) w.write(r);
  w.finish(0);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(nlohmann::json::parse(line)["schema_version"] == kSchemaVersion);
  CHECK(load_records(path.string()) == recs);
}

TEST_CASE("CSV rows need exactly the two standard s values") {
  family::FamilyRecord r;
  r.D = 5;
  r.log_l_at = {{0.55, 1.0}};
  CHECK_THROWS_AS(to_csv_row(r), DomainError);
  r.log_l_at = {{0.55, 1.0}, {0.75, -0.25}};
  CHECK(record_from_csv(to_csv_row(r)) == r);
  CHECK_THROWS(record_from_csv("5,0,0"));
}

TEST_CASE("unwritable destination leaves a partial manifest") {
  const auto dir = scratch("blocked");
  fs::create_directories(dir);
  fs::remove(manifest_path(dir.string()));
  CHECK_THROWS_AS(RecordWriter(dir.string(), Format::csv, config(0.1)), IoError);
  const auto mj = nlohmann::json::parse(slurp(manifest_path(dir.string())));
  CHECK(mj["complete"] == false);
  CHECK(mj["rows"] == 0);
  CHECK_FALSE(mj["error"].get<std::string>().empty());
}

TEST_CASE("identical input gives identical bytes") {
  const auto recs = family::scan_family(100, arith::Sign::both);
  std::string texts[2];
  for (int k = 0; k < 2; ++k) {
    const auto path = scratch("twice" + std::to_string(k) + ".csv");
    RecordWriter w(path.string(), Format::csv, config(0.1));
    for (const auto& r : recs) w.write(r);
    w.finish(0);
    texts[k] = slurp(path);
  }
  CHECK(texts[0] == texts[1]);
}
