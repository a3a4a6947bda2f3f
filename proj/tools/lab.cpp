#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "circlab/experiment.hpp"

using namespace circlab;

namespace {

using Command = std::vector<std::filesystem::path> (*)(const ExperimentConfig&);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerics lab for circle diffeomorphisms"};
  app.require_subcommand(1, 1);

  const std::vector<std::pair<std::string, Command>> commands = {
      {"tune", cmd_tune},
      {"denjoy", cmd_denjoy},
      {"conjugacy", cmd_conjugacy},
      {"report", cmd_report}};
  const std::map<std::string, std::string> descriptions = {
      {"tune", "tune a family to a target rotation number, writes tuned.json"},
      {"denjoy", "per-level Denjoy-type report, writes denjoy.csv and denjoy.json"},
      {"conjugacy", "invariant density and conjugacy, writes profile.csv and conjugacy.json"},
      {"report", "merge tuned.json, denjoy.json and conjugacy.json into report.json"}};

  std::map<std::string, std::string> flags;
  std::string config_path;
  std::map<std::string, CLI::Option*> options;
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", config_path, "key=value config file (flags override it)");
    for (const auto& key : config_keys()) {
      options[name + "/" + key] = sub->add_option("--" + key, flags[key]);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error code=bad_arguments: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::precondition);
  }

  try {
    for (const auto& [name, fn] : commands) {
      if (!app.got_subcommand(name)) continue;
      ExperimentConfig config;
      if (!config_path.empty()) load_config_file(config, config_path);
      for (const auto& key : config_keys()) {
        if (options.at(name + "/" + key)->count() > 0) apply_setting(config, key, flags[key]);
      }
      PrecisionScope precision(config.precision);
      for (const auto& path : fn(config)) std::cout << path.string() << '\n';
    }
  } catch (const LabError& e) {
    std::cerr << "error code=" << e.code() << ": " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error code=internal: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::invariant);
  }
  return 0;
}
