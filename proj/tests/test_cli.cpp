#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "circlab/experiment.hpp"

using namespace circlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("circlab_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small(const fs::path& out) {
  ExperimentConfig c;
  c.depth = 15;
  c.tol = "1e-30";
  c.n_max = 10;
  c.samples = 5000;
  c.level_samples = 64;
  c.grid = 512;
  c.out = out.string();
  return c;
}

template <class F>
void expect_error(F&& fn, const std::string& code, ErrorKind kind) {
  try {
    fn();
    FAIL("expected " << code);
  } catch (const LabError& e) {
    CHECK(e.code() == code);
    CHECK(e.kind() == kind);
  }
}

}  // namespace

TEST_CASE("config file with flag overrides") {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "lab.cfg") << "# two-harmonic run\nfamily = two_harmonic\na=0.4\n\na2=0.2\n"
                                    "depth=18\nn-max=9\nout=somewhere\n";
  ExperimentConfig c;
  load_config_file(c, dir / "lab.cfg");
  CHECK(c.family == "two_harmonic");
  CHECK(c.a1 == "0.4");
  CHECK(c.a2 == "0.2");
  CHECK(c.depth == 18);
  CHECK(c.n_max == 9);
  CHECK(c.out == "somewhere");
  apply_setting(c, "depth", "20");
  CHECK(c.depth == 20);

  for (const auto& key : config_keys()) {
    CHECK_NOTHROW(apply_setting(c, key, key == "family" ? "arnold" : "30"));
  }
  expect_error([&] { apply_setting(c, "colour", "red"); }, "bad_config", ErrorKind::precondition);
  expect_error([&] { apply_setting(c, "depth", "0"); }, "bad_config", ErrorKind::precondition);
  expect_error([&] { apply_setting(c, "a", "1/2"); }, "bad_config", ErrorKind::precondition);
  expect_error([&] { apply_setting(c, "family", "logistic"); }, "unknown_family",
               ErrorKind::precondition);
  std::ofstream(dir / "bad.cfg") << "depth 3\n";
  expect_error([&] { load_config_file(c, dir / "bad.cfg"); }, "bad_config",
               ErrorKind::precondition);
  expect_error([&] { load_config_file(c, dir / "absent.cfg"); }, "bad_config",
               ErrorKind::precondition);
}

TEST_CASE("config echo omits the output directory") {
  ExperimentConfig a, b;
  b.out = "elsewhere";
  CHECK(config_json(a) == config_json(b));
  b.depth = 7;
  CHECK(config_json(a) != config_json(b));
}

TEST_CASE("atomic writes leave no temporary file") {
  const fs::path dir = scratch("atomic");
  write_atomic(dir / "sub" / "x.txt", "first");
  write_atomic(dir / "sub" / "x.txt", "second");
  CHECK(slurp(dir / "sub" / "x.txt") == "second");
  CHECK_FALSE(fs::exists(dir / "sub" / "x.txt.tmp"));
}

TEST_CASE("tune writes the verified prefix; the cached map equals a fresh tuning") {
  const fs::path dir = scratch("tune");
  const ExperimentConfig c = small(dir);
  const ResolvedMap fresh = resolve_map(c);
  CHECK(fresh.source == "tuned");
  cmd_tune(c);
  const auto j = nlohmann::json::parse(slurp(dir / "tuned.json"));
  CHECK(j["quotients"] == std::vector<int>(15, 1));
  CHECK(j["t"] == to_decimal(fresh.map.shift()));

  const ResolvedMap cached = resolve_map(c);
  CHECK(cached.source == "tuned.json");
  CHECK(cached.map.descriptor() == fresh.map.descriptor());
  CHECK(cached.cf.quotients() == fresh.cf.quotients());
  CHECK(cached.cf.value() == fresh.cf.value());

  // A different request ignores the cache.
  ExperimentConfig other = c;
  other.depth = 12;
  CHECK(resolve_map(other).source == "tuned");
}

TEST_CASE("explicit maps") {
  ExperimentConfig c = small(scratch("explicit"));
  c.family = "rotation";
  c.t = "0.6180339887498948482045868343656381177203091798057628";
  const ResolvedMap r = resolve_map(c);
  CHECK(r.source == "explicit");
  CHECK(r.map.is_rigid());
  CHECK(r.cf.quotients() == std::vector<std::int64_t>(15, 1));
  CHECK(r.cf.value() == HighReal(c.t));

  c.map = "family=arnold t=0.5 a=0.5";
  c.t.clear();
  c.depth = 5;
  expect_error([&] { resolve_map(c); }, "periodic_orbit", ErrorKind::invariant);
}

TEST_CASE("rigid rotation through the commands") {
  const fs::path dir = scratch("rigid");
  ExperimentConfig c = small(dir);
  c.family = "rotation";
  cmd_tune(c);
  cmd_denjoy(c);
  cmd_conjugacy(c);
  std::istringstream rows(slurp(dir / "denjoy.csv"));
  std::string line;
  std::getline(rows, line);
  int count = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> cells;
    std::stringstream cs(line);
    for (std::string cell; std::getline(cs, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 12);
    CHECK(HighReal(cells[5]) == 0);
    ++count;
  }
  CHECK(count == c.n_max);
  std::istringstream profile(slurp(dir / "profile.csv"));
  std::getline(profile, line);
  while (std::getline(profile, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    const auto third = line.find(',', second + 1);
    CHECK(abs(HighReal(line.substr(second + 1, third - second - 1)) - 1) <
          precision_tolerance(8));
  }
}

TEST_CASE("report merges prior outputs and lists missing ones") {
  const fs::path dir = scratch("report");
  const ExperimentConfig c = small(dir);
  try {
    cmd_report(c);
    FAIL("expected missing_inputs");
  } catch (const PreconditionError& e) {
    CHECK(e.code() == "missing_inputs");
    const std::string msg = e.what();
    CHECK(msg.find("tuned.json") != std::string::npos);
    CHECK(msg.find("denjoy.json") != std::string::npos);
    CHECK(msg.find("conjugacy.json") != std::string::npos);
  }
  cmd_tune(c);
  cmd_denjoy(c);
  try {
    cmd_report(c);
    FAIL("expected missing_inputs");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("tuned.json") == std::string::npos);
    CHECK(std::string(e.what()).find("conjugacy.json") != std::string::npos);
  }
  cmd_conjugacy(c);
  cmd_report(c);
  const auto j = nlohmann::ordered_json::parse(slurp(dir / "report.json"));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"tool", "version", "command", "config", "tuned",
                                         "denjoy", "conjugacy"});
  CHECK(j["version"] == software_version());
  CHECK(j["denjoy"]["summary"]["levels"] == c.n_max);
}

TEST_CASE("commands are deterministic") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    const ExperimentConfig c = small(dir);
    cmd_tune(c);
    cmd_denjoy(c);
    cmd_conjugacy(c);
    cmd_report(c);
  }
  for (const char* name : {"tuned.json", "denjoy.csv", "denjoy.json", "denjoy_ratio.txt",
                           "profile.csv", "holder_scan.txt", "conjugacy.json", "report.json"}) {
    CAPTURE(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}
