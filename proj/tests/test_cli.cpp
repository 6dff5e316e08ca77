#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "feketelab/cli.hpp"
#include "feketelab/persist.hpp"

using namespace feketelab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  const auto r = run(args);
  REQUIRE(r.code == cli::kExitOk);
  return nlohmann::json::parse(r.out);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "feketelab_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("Sturm count for D = 5") {
  const auto j = run_json({"fekete-zeros", "--d", "5", "--interval", "0,0.99", "--method", "sturm"});
  CHECK(j["count"] == 0);
  CHECK(j["subcommand"] == "fekete-zeros");
  CHECK(j["schema_version"] == persist::kSchemaVersion);
  CHECK(j["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("Dirichlet identity for D = 5") {
  const auto j = run_json({"identity-check", "dirichlet", "--d", "5", "--s", "1"});
  CHECK(j["residual"].get<double>() <= 1e-8);
  const auto plain = run({"identity-check", "dirichlet", "--d", "5", "--s", "1"});
  CHECK(plain.code == 0);
  CHECK(plain.out.find("residual: ") != std::string::npos);
}

TEST_CASE("Legendre trace mod 7727") {
  const auto r = run({"legendre-trace", "--p", "7727", "--emit", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,S");
  std::size_t rows = 0;
  long min_s = 1;
  while (std::getline(in, line)) {
    ++rows;
    min_s = std::min(min_s, std::stol(line.substr(line.find(',') + 1)));
  }
  CHECK(rows == 7726);
  CHECK(min_s >= 0);
}

TEST_CASE("exit codes") {
  CHECK(run({"fekete-zeros", "--d", "6"}).code == cli::kExitDomain);
  CHECK(run({"fekete-zeros", "--d", "5", "--bogus"}).code == cli::kExitUsage);
  CHECK(run({"no-such-command"}).code == cli::kExitUsage);
  const auto noseed = run({"random-model", "bamo", "--R", "10"});
  CHECK(noseed.code == cli::kExitUsage);
  CHECK(noseed.err.find("--seed") != std::string::npos);
  CHECK(run({"random-model", "bamo", "--seed", "1", "--R", "10", "--delta", "0.9"}).code == cli::kExitDomain);
  const auto missing = scratch("no_such_dir") / "scan.csv";
  CHECK(run({"scan-family", "--x", "50", "--out", missing.string()}).code == cli::kExitIo);
  CHECK(run({"--version"}).code == cli::kExitOk);
}

TEST_CASE("identical config gives identical bytes, independent of thread count") {
  const auto a = scratch("scan_a.csv"), b = scratch("scan_b.csv");
  REQUIRE(run({"--threads", "1", "scan-family", "--x", "300", "--out", a.string()}).code == 0);
  REQUIRE(run({"--threads", "4", "scan-family", "--x", "300", "--out", b.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  const auto ma = nlohmann::json::parse(slurp(persist::manifest_path(a.string())));
  const auto mb = nlohmann::json::parse(slurp(persist::manifest_path(b.string())));
  CHECK(ma["config_hash"] == mb["config_hash"]);
  CHECK(ma["schema_version"] == persist::kSchemaVersion);
  CHECK(ma["complete"] == true);
  CHECK(ma["rows"] == persist::load_records(a.string()).size());

  const auto c = scratch("scan_c.csv");
  REQUIRE(run({"scan-family", "--x", "300", "--grid-points", "64", "--out", c.string()}).code == 0);
  const auto mc = nlohmann::json::parse(slurp(persist::manifest_path(c.string())));
  CHECK(mc["config_hash"] != ma["config_hash"]);

  const std::vector<std::string> sim{"random-model", "bamo", "--seed", "7", "--R", "8", "--trials", "5000"};
  auto s1 = sim, s4 = sim;
  s1.insert(s1.begin(), {"--json", "--threads", "1"});
  s4.insert(s4.begin(), {"--json", "--threads", "3"});
  CHECK(run(s1).out == run(s4).out);
}

TEST_CASE("construct-positive") {
  const auto j = run_json({"construct-positive", "--x", "2500", "--y", "3", "--wide", "--certify"});
  CHECK(j.dump().find("697") != std::string::npos);
}
