#include "circlab/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "circlab/conjugacy.hpp"
#include "circlab/denjoy.hpp"
#include "circlab/rotation.hpp"

#ifndef CIRCLAB_VERSION
#define CIRCLAB_VERSION "0.0.0"
#endif

namespace circlab {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const CirclePoint& origin() {
  static const CirclePoint p = mod1(HighReal(0));
  return p;
}

std::int64_t parse_int(const std::string& key, const std::string& value, std::int64_t lo) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used == value.size() && v >= lo) return v;
  } catch (const std::exception&) {
  }
  throw PreconditionError("bad_config", "invalid value '" + value + "' for " + key + " (integer >= " +
                                            std::to_string(lo) + " expected)");
}

std::string parse_decimal(const std::string& key, const std::string& value) {
  static const std::string allowed = "0123456789+-.eE";
  if (value.empty() || value.find_first_not_of(allowed) != std::string::npos) {
    throw PreconditionError("bad_config", "invalid decimal '" + value + "' for " + key);
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Json map_request(const ExperimentConfig& c) {
  Json j;
  j["family"] = c.family;
  j["a1"] = c.a1;
  j["a2"] = c.a2;
  j["target"] = c.target;
  j["depth"] = c.depth;
  j["tol"] = c.tol;
  j["precision"] = c.precision;
  j["orbit_cap"] = c.orbit_cap;
  return j;
}

Json quotients_json(const ContinuedFraction& cf) { return Json(cf.quotients()); }

// Delta_n is exact for the rigid rotation; otherwise rho is only known
// through its convergents.
ContinuedFraction effective_cf(const CircleMap& map, ContinuedFraction verified, int depth) {
  if (map.is_rigid()) return cf_expand(map.shift(), depth);
  return verified;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("bad_input", path.string() + " is not valid JSON: " + e.what());
  }
}

Json header(const ExperimentConfig& config, const std::string& command) {
  Json j;
  j["tool"] = "circlab";
  j["version"] = software_version();
  j["command"] = command;
  j["config"] = config_json(config);
  return j;
}

void add_map(Json& j, const ResolvedMap& r) {
  j["map"] = r.map.descriptor();
  j["quotients"] = quotients_json(r.cf);
  j["rho_estimate"] = to_decimal(r.cf.value());
}

fs::path out_file(const ExperimentConfig& config, const std::string& name) {
  return fs::path(config.out) / name;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "family", "a",     "a1",     "a2",      "t",             "map",  "target",
      "depth",  "tol",   "precision", "n-max", "orbit-cap",    "samples",
      "level-samples", "grid", "seed", "out"};
  return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "family") {
    parse_family(value);
    c.family = value;
  } else if (key == "a" || key == "a1") {
    c.a1 = parse_decimal(key, value);
  } else if (key == "a2") {
    c.a2 = parse_decimal(key, value);
  } else if (key == "t") {
    c.t = parse_decimal(key, value);
  } else if (key == "map") {
    c.map = value;
  } else if (key == "target") {
    c.target = value;
  } else if (key == "depth") {
    c.depth = static_cast<int>(parse_int(key, value, 1));
  } else if (key == "tol") {
    c.tol = parse_decimal(key, value);
  } else if (key == "precision") {
    c.precision = static_cast<unsigned>(parse_int(key, value, 20));
  } else if (key == "n-max") {
    c.n_max = static_cast<int>(parse_int(key, value, 1));
  } else if (key == "orbit-cap") {
    c.orbit_cap = parse_int(key, value, 1);
  } else if (key == "samples") {
    c.samples = parse_int(key, value, 1);
  } else if (key == "level-samples") {
    c.level_samples = parse_int(key, value, 1);
  } else if (key == "grid") {
    c.grid = static_cast<int>(parse_int(key, value, 2));
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_int(key, value, 0));
  } else if (key == "out") {
    c.out = value;
  } else {
    throw PreconditionError("bad_config", "unknown config key '" + key + "'");
  }
}

void load_config_file(ExperimentConfig& config, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("bad_config", "cannot read config file " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("bad_config", path.string() + ":" + std::to_string(number) +
                                                ": expected key=value");
    }
    apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["family"] = c.family;
  j["a1"] = c.a1;
  j["a2"] = c.a2;
  j["t"] = c.t;
  j["map"] = c.map;
  j["target"] = c.target;
  j["depth"] = c.depth;
  j["tol"] = c.tol;
  j["precision"] = c.precision;
  j["n_max"] = c.n_max;
  j["orbit_cap"] = c.orbit_cap;
  j["samples"] = c.samples;
  j["level_samples"] = c.level_samples;
  j["grid"] = c.grid;
  j["seed"] = c.seed;
  return j;
}

ResolvedMap resolve_map(const ExperimentConfig& c) {
  require_precision(c.precision, "experiment");
  if (!c.map.empty() || !c.t.empty()) {
    CircleMap map = !c.map.empty() ? parse_descriptor(c.map) : [&] {
      const HighReal t(c.t);
      switch (parse_family(c.family)) {
        case FamilyKind::rotation:
          return make_rotation(t);
        case FamilyKind::arnold:
          return make_arnold(t, HighReal(c.a1));
        case FamilyKind::two_harmonic:
          return make_two_harmonic(t, HighReal(c.a1), HighReal(c.a2));
      }
      throw PreconditionError("unknown_family", "unknown family");
    }();
    ContinuedFraction cf =
        map.is_rigid() ? cf_expand(map.shift(), c.depth)
                       : partial_quotients_dynamical(map, c.depth, origin(), c.orbit_cap);
    return ResolvedMap{std::move(map), std::move(cf), "explicit"};
  }

  const fs::path cached = out_file(c, "tuned.json");
  if (fs::exists(cached)) {
    const Json j = read_json(cached);
    if (j.contains("request") && j["request"] == map_request(c)) {
      CircleMap map = parse_descriptor(j.at("map").get<std::string>());
      ContinuedFraction cf = ContinuedFraction::from_quotients(
          j.at("quotients").get<std::vector<std::int64_t>>(),
          HighReal(j.at("rho_estimate").get<std::string>()));
      cf = effective_cf(map, std::move(cf), c.depth);
      return ResolvedMap{std::move(map), std::move(cf), "tuned.json"};
    }
  }

  const MapFamily family{parse_family(c.family), HighReal(c.a1), HighReal(c.a2)};
  const ContinuedFraction target = cf_expand(quadratic_irrational(c.target), c.depth + 2);
  TuneResult r = tune_parameter(family, target, c.depth, HighReal(c.tol), c.orbit_cap);
  ContinuedFraction cf = effective_cf(r.map, std::move(r.verified), c.depth);
  return ResolvedMap{std::move(r.map), std::move(cf), "tuned"};
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw ResourceError("write_failed", "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw ResourceError("write_failed", "cannot rename to " + path.string() + ": " + ec.message());
}

std::string software_version() { return CIRCLAB_VERSION; }

std::vector<fs::path> cmd_tune(const ExperimentConfig& c) {
  require_precision(c.precision, "tune");
  const MapFamily family{parse_family(c.family), HighReal(c.a1), HighReal(c.a2)};
  const ContinuedFraction target = cf_expand(quadratic_irrational(c.target), c.depth + 2);
  const TuneResult r = tune_parameter(family, target, c.depth, HighReal(c.tol), c.orbit_cap);

  Json j = header(c, "tune");
  j["request"] = map_request(c);
  j["map"] = r.map.descriptor();
  j["t"] = to_decimal(r.t);
  j["quotients"] = quotients_json(r.verified);
  j["q_depth"] = r.verified.q(c.depth).str();
  j["rho_estimate"] = to_decimal(r.rho_estimate);
  j["rho_bound"] = to_decimal(r.rho_bound);
  j["bisection_steps"] = r.bisection_steps;
  const fs::path path = out_file(c, "tuned.json");
  write_atomic(path, dump(j));
  return {path};
}

std::vector<fs::path> cmd_denjoy(const ExperimentConfig& c) {
  const ResolvedMap r = resolve_map(c);
  const DenjoyReport rep = denjoy_report(r.map, r.cf, c.n_max, c.level_samples, origin(),
                                         c.orbit_cap);

  std::ostringstream csv, plot;
  csv << "n,q_n,delta_n,l_n,eps_n,s_n,ratio,naive_ratio,kn_eps,res_product,res_shift,"
         "res_derivative\n";
  for (const auto& row : rep.rows) {
    csv << row.n << ',' << row.q_n.str() << ',' << to_decimal(row.delta_n) << ','
        << to_decimal(row.l_n) << ',' << to_decimal(row.eps_n) << ',' << to_decimal(row.s_n)
        << ',' << to_decimal(row.ratio) << ',' << to_decimal(row.naive_ratio) << ','
        << to_decimal(row.kn_eps) << ',' << to_decimal(row.residuals.product) << ','
        << to_decimal(row.residuals.shift) << ',' << to_decimal(row.residuals.derivative)
        << '\n';
    plot << row.n << ' ' << to_decimal(row.ratio, 17) << '\n';
  }

  Json j = header(c, "denjoy");
  add_map(j, r);
  Json s;
  s["levels"] = rep.rows.size();
  s["delta_hat"] = to_decimal(rep.delta_hat);
  s["max_residual"] = to_decimal(rep.max_residual);
  s["ratio_spread"] = to_decimal(rep.ratio_spread);
  s["s_rate"] = to_decimal(rep.s_rate);
  s["kn_eps_rate"] = to_decimal(rep.decay.rate);
  s["refined_spread"] = to_decimal(rep.decay.refined_spread);
  s["diophantine_constant"] = to_decimal(rep.diophantine_constant);
  Json ab;
  ab["a_sup"] = to_decimal(rep.statements.a_sup);
  ab["lambda_hat"] = to_decimal(rep.statements.lambda_hat);
  ab["segment_ratio_constant"] = to_decimal(rep.statements.segment_ratio_constant);
  ab["scale_ratio_constant"] = to_decimal(rep.statements.scale_ratio_constant);
  ab["scale_decay_constant"] = to_decimal(rep.statements.scale_decay_constant);
  s["statements"] = ab;
  j["summary"] = s;

  const fs::path csv_path = out_file(c, "denjoy.csv");
  const fs::path plot_path = out_file(c, "denjoy_ratio.txt");
  const fs::path json_path = out_file(c, "denjoy.json");
  write_atomic(csv_path, csv.str());
  write_atomic(plot_path, plot.str());
  write_atomic(json_path, dump(j));
  return {csv_path, plot_path, json_path};
}

std::vector<fs::path> cmd_conjugacy(const ExperimentConfig& c) {
  const ResolvedMap r = resolve_map(c);
  ConjugacyProfile p = gamma_on_orbit(r.map, origin(), c.samples, c.orbit_cap);
  build_density(p);
  build_phi(p);
  const HolderEstimate holder = holder_exponent(p);

  Json j = header(c, "conjugacy");
  add_map(j, r);
  Json s;
  s["orbit_length"] = p.orbit_length;
  s["normalization"] = to_decimal(p.normalization);
  s["density_integral"] = to_decimal(density_integral(p));
  const auto [lo, hi] = std::minmax_element(p.h.begin(), p.h.end());
  s["h_min"] = to_decimal(*lo);
  s["h_max"] = to_decimal(*hi);
  s["max_gamma_gap"] = to_decimal(p.max_gamma_gap());
  s["max_spacing"] = to_decimal(p.max_spacing());
  s["homological_residual"] = to_decimal(homological_residual(r.map, p, c.grid));
  s["commutation_residual"] = to_decimal(commutation_residual(p, r.cf.value()));
  Json measure = Json::object();
  for (int n : {3, 8}) {
    if (n < r.cf.levels()) {
      measure[std::to_string(n)] = to_decimal(verify_measure_identity(r.map, r.cf, p, n, c.grid));
    }
  }
  s["measure_identity"] = measure;
  Json h;
  h["exponent"] = to_decimal(holder.exponent);
  h["flat"] = holder.flat;
  h["lipschitz_or_better"] = holder.lipschitz_or_better;
  h["scales"] = holder.scales.size();
  s["holder"] = h;
  j["summary"] = s;

  const fs::path csv_path = out_file(c, "profile.csv");
  const fs::path scan_path = out_file(c, "holder_scan.txt");
  const fs::path json_path = out_file(c, "conjugacy.json");
  write_atomic(csv_path, profile_csv(p));
  write_atomic(scan_path, holder_scan_text(holder));
  write_atomic(json_path, dump(j));
  return {csv_path, scan_path, json_path};
}

std::vector<fs::path> cmd_report(const ExperimentConfig& c) {
  const std::vector<std::string> inputs = {"tuned.json", "denjoy.json", "conjugacy.json"};
  std::vector<std::string> missing;
  for (const auto& name : inputs) {
    if (!fs::exists(out_file(c, name))) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw PreconditionError("missing_inputs", "missing in " + c.out + ": " + list);
  }
  Json j = header(c, "report");
  for (const auto& name : inputs) {
    j[name.substr(0, name.find('.'))] = read_json(out_file(c, name));
  }
  const fs::path path = out_file(c, "report.json");
  write_atomic(path, dump(j));
  return {path};
}

}  // namespace circlab
