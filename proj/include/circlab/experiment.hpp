#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "circlab/cfarith.hpp"
#include "circlab/maps.hpp"

namespace circlab {

/// Everything a run depends on. Decimal parameters stay strings until the
/// working precision is fixed, so they are parsed at precision P.
struct ExperimentConfig {
  std::string family = "arnold";
  std::string a1 = "0.5";
  std::string a2 = "0";
  /// Explicit translation parameter; skips tuning when set.
  std::string t;
  /// Explicit map descriptor; overrides family, a1, a2 and t.
  std::string map;
  std::string target = "golden";
  int depth = 22;
  std::string tol = "1e-45";
  unsigned precision = 50;
  int n_max = 12;
  std::int64_t orbit_cap = kDefaultOrbitCap;
  /// Orbit length N for the conjugacy profile.
  std::int64_t samples = 100'000;
  /// Orbit points sampled per level in the Denjoy check.
  std::int64_t level_samples = 4096;
  int grid = 4096;
  std::uint64_t seed = 0;
  std::string out = "lab_out";
};

/// Keys accepted in config files and as long flags.
const std::vector<std::string>& config_keys();

/// Sets one key; throws PreconditionError("bad_config") on unknown keys or
/// malformed values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// key=value lines; blank lines and lines starting with '#' are skipped.
void load_config_file(ExperimentConfig& config, const std::filesystem::path& path);

nlohmann::ordered_json config_json(const ExperimentConfig& config);

struct ResolvedMap {
  CircleMap map;
  ContinuedFraction cf;
  /// "tuned", "explicit" or "tuned.json".
  std::string source;
};

/// Explicit map when `map` or `t` is set; otherwise the map recorded in
/// <out>/tuned.json when its request matches, else a fresh tuning run.
ResolvedMap resolve_map(const ExperimentConfig& config);

/// Writes through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string software_version();

/// Subcommands. Each returns the list of files written. The working precision
/// must already be config.precision.
std::vector<std::filesystem::path> cmd_tune(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_denjoy(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_conjugacy(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_report(const ExperimentConfig& config);

}  // namespace circlab
