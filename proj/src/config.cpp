#include "shl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "shl/errors.hpp"

namespace shl {

namespace {

using nlohmann::json;

const std::set<std::string> kCommonKeys = {"experiment", "n",       "gauge", "out",
                                           "seed",       "threads", "grid"};

const std::set<std::string>& experiment_keys(const std::string& exp) {
  static const std::set<std::string> profile = {"variant", "N", "eps", "samples"};
  static const std::set<std::string> hardy = {"variant", "levels"};
  static const std::set<std::string> eigen = {"variant", "mu",  "N",
                                              "eps",     "tol", "max_iter", "dump_grid"};
  static const std::set<std::string> eps_sweep = {"mu",    "eps_list", "rho",
                                                  "delta", "tol",      "max_iter"};
  static const std::set<std::string> heat = {"variant", "mu", "N",  "eps",           "T",
                                             "dt",      "u0", "rho", "delta", "forcing_value"};
  static const std::set<std::string> blowup = {"mu", "N_list", "T", "dt", "u0"};
  static const std::set<std::string> cost = {"mu",  "eps_list", "rho", "delta",
                                             "T",   "tol",      "max_iter"};
  static const std::set<std::string> none;
  if (exp == "potential-profile") return profile;
  if (exp == "hardy") return hardy;
  if (exp == "eigen") return eigen;
  if (exp == "eps-sweep") return eps_sweep;
  if (exp == "heat") return heat;
  if (exp == "blowup-scan") return blowup;
  if (exp == "cost-sweep") return cost;
  return none;
}

double as_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("key '" + key + "' must be a number");
  return j.get<double>();
}

void parse_gauge(const json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw ConfigError("'gauge' must be an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "type" && k != "R" && k != "samples")
      throw ConfigError("unknown gauge key '" + k + "'");
  }
  const std::string type = j.value("type", "ball");
  if (type == "ball") {
    c.gauge = Gauge::ball(j.contains("R") ? as_number(j.at("R"), "gauge.R") : 1.0);
  } else if (type == "table") {
    if (!j.contains("samples") || !j.at("samples").is_array())
      throw ConfigError("gauge table needs a 'samples' array");
    std::vector<double> s;
    for (const auto& v : j.at("samples")) s.push_back(as_number(v, "gauge.samples"));
    c.gauge = Gauge::direction_table(std::move(s));
  } else {
    throw ConfigError("gauge type must be 'ball' or 'table'");
  }
}

void parse_grid(const json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw ConfigError("'grid' must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "M")
      c.grid_M = static_cast<std::size_t>(as_number(v, "grid.M"));
    else if (k == "grading")
      c.grading = v.get<std::string>();
    else if (k == "q")
      c.grid_q = as_number(v, "grid.q");
    else if (k == "first")
      c.grid_first = as_number(v, "grid.first");
    else if (k == "last")
      c.grid_last = as_number(v, "grid.last");
    else
      throw ConfigError("unknown grid key '" + k + "'");
  }
}

std::vector<double> parse_list(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(as_number(v, key));
  return out;
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  if (root.contains("config")) root = root.at("config"); // accept a run sidecar

  if (!root.contains("experiment") || !root.at("experiment").is_string())
    throw ConfigError("config needs an 'experiment' string");
  ExperimentConfig c;
  c.experiment = root.at("experiment").get<std::string>();
  const auto& extra = experiment_keys(c.experiment);
  if (extra.empty() && c.experiment != "hardy")
    throw ConfigError("unknown experiment '" + c.experiment + "'");

  for (const auto& [k, v] : root.items()) {
    if (!kCommonKeys.count(k) && !extra.count(k))
      throw ConfigError("key '" + k + "' is not valid for experiment '" + c.experiment + "'");
    if (k == "experiment") continue;
    if (k == "n")
      c.n = static_cast<int>(as_number(v, "n"));
    else if (k == "gauge")
      parse_gauge(v, c);
    else if (k == "grid")
      parse_grid(v, c);
    else if (k == "out")
      c.out = v.get<std::string>();
    else if (k == "seed")
      c.seed = static_cast<std::int64_t>(as_number(v, "seed"));
    else if (k == "threads")
      c.threads = static_cast<int>(as_number(v, "threads"));
    else if (k == "variant")
      c.variant = v.get<std::string>();
    else if (k == "mu")
      c.mu = as_number(v, "mu");
    else if (k == "N")
      c.trunc_N = as_number(v, "N");
    else if (k == "eps")
      c.eps = as_number(v, "eps");
    else if (k == "tol")
      c.tol = as_number(v, "tol");
    else if (k == "max_iter")
      c.max_iter = static_cast<int>(as_number(v, "max_iter"));
    else if (k == "eps_list")
      c.eps_list = parse_list(v, "eps_list");
    else if (k == "N_list")
      c.N_list = parse_list(v, "N_list");
    else if (k == "rho")
      c.rho = as_number(v, "rho");
    else if (k == "delta")
      c.delta = as_number(v, "delta");
    else if (k == "T")
      c.T = as_number(v, "T");
    else if (k == "dt")
      c.dt = as_number(v, "dt");
    else if (k == "u0")
      c.u0 = v.get<std::string>();
    else if (k == "forcing_value")
      c.forcing_value = as_number(v, "forcing_value");
    else if (k == "samples")
      c.samples = static_cast<int>(as_number(v, "samples"));
    else if (k == "dump_grid")
      c.dump_grid = v.is_boolean() ? v.get<bool>() : (as_number(v, "dump_grid") != 0.0);
    else if (k == "levels") {
      if (!v.is_array()) throw ConfigError("'levels' must be an array of [M, cutoff] pairs");
      for (const auto& lv : v) {
        if (!lv.is_array() || lv.size() != 2)
          throw ConfigError("'levels' entries must be [M, cutoff] pairs");
        c.hardy_levels.emplace_back(static_cast<std::size_t>(as_number(lv[0], "levels.M")),
                                    as_number(lv[1], "levels.cutoff"));
      }
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const ExperimentConfig& c) {
  const auto& extra = experiment_keys(c.experiment);
  if (extra.empty() && c.experiment != "hardy")
    throw ConfigError("unknown experiment '" + c.experiment + "'");

  DomainSpec d{c.n, c.gauge};
  validate(d);

  if (c.grading != "geometric" && c.grading != "uniform")
    throw ConfigError("grading must be 'geometric' or 'uniform'");
  if (c.grid_M < 8) throw ConfigError("grid.M must be at least 8");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.max_iter < 1) throw ConfigError("max_iter must be >= 1");

  const bool wants_variant = (c.experiment == "potential-profile" || c.experiment == "eigen" ||
                              c.experiment == "heat");
  if (wants_variant && !c.variant.empty()) {
    static const std::set<std::string> variants = {"exact", "as-printed", "truncated",
                                                   "regularized", "classical"};
    if (!variants.count(c.variant))
      throw ConfigError("unknown potential variant '" + c.variant + "'");
    if (c.variant == "truncated" && !(c.trunc_N > 0.0))
      throw ConfigError("truncated potential requires N > 0");
    if (c.variant == "regularized" && !(c.eps > 0.0))
      throw ConfigError("regularized potential requires eps > 0");
  }
  if (c.experiment == "hardy" && !c.variant.empty() && c.variant != "double-singular" &&
      c.variant != "classical")
    throw ConfigError("hardy variant must be 'double-singular' or 'classical'");

  if (c.experiment == "potential-profile" && c.samples < 1)
    throw ConfigError("samples must be >= 1");

  if (c.experiment == "eps-sweep" || c.experiment == "cost-sweep") {
    if (!(c.mu > critical_mu(c.n))) throw ConfigError("mu must exceed ((n-2)/2)^2");
    if (c.eps_list.empty()) throw ConfigError("eps_list must not be empty");
    for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
      if (!(c.eps_list[i] > 0.0)) throw ConfigError("eps_list values must be positive");
      if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))
        throw ConfigError("eps_list must be strictly decreasing");
    }
    if (!(c.rho > 0.0 && c.delta > 0.0 && c.rho < (1.0 - c.delta) * c.gauge.max_radius()))
      throw ConfigError("window (rho, delta) is empty");
  }
  if (c.experiment == "blowup-scan") {
    if (!(c.mu > critical_mu(c.n))) throw ConfigError("mu must exceed ((n-2)/2)^2");
    if (c.N_list.empty()) throw ConfigError("N_list must not be empty");
    for (std::size_t i = 0; i < c.N_list.size(); ++i) {
      if (!(c.N_list[i] > 0.0)) throw ConfigError("N_list values must be positive");
      if (i > 0 && !(c.N_list[i] > c.N_list[i - 1]))
        throw ConfigError("N_list must be strictly increasing");
    }
  }
  if (c.experiment == "heat" || c.experiment == "blowup-scan" || c.experiment == "cost-sweep") {
    if (!(c.T > 0.0)) throw ConfigError("T must be positive");
    if (c.dt < 0.0) throw ConfigError("dt must be nonnegative");
  }
  if ((c.experiment == "heat" || c.experiment == "blowup-scan") && c.u0 != "ones" &&
      c.u0 != "eigenfunction")
    throw ConfigError("u0 must be 'ones' or 'eigenfunction'");
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["n"] = c.n;
  if (c.gauge.is_ball()) {
    j["gauge"] = {{"type", "ball"}, {"R", c.gauge.radius}};
  } else {
    j["gauge"] = {{"type", "table"}, {"samples", c.gauge.table}};
  }
  j["grid"] = {{"M", c.grid_M},
               {"grading", c.grading},
               {"q", c.grid_q},
               {"first", c.grid_first},
               {"last", c.grid_last}};
  j["out"] = c.out;
  j["seed"] = c.seed;
  j["threads"] = c.threads;

  const auto& extra = experiment_keys(c.experiment);
  auto put_if = [&](const char* key, auto&& value) {
    if (extra.count(key)) j[key] = value;
  };
  put_if("variant", c.variant);
  put_if("mu", c.mu);
  put_if("N", c.trunc_N);
  put_if("eps", c.eps);
  put_if("tol", c.tol);
  put_if("max_iter", c.max_iter);
  put_if("eps_list", c.eps_list);
  put_if("N_list", c.N_list);
  put_if("rho", c.rho);
  put_if("delta", c.delta);
  put_if("T", c.T);
  put_if("dt", c.dt);
  put_if("u0", c.u0);
  put_if("forcing_value", c.forcing_value);
  put_if("samples", c.samples);
  put_if("dump_grid", c.dump_grid);
  if (c.experiment == "hardy" && !c.hardy_levels.empty()) {
    json lv = json::array();
    for (const auto& [M, cut] : c.hardy_levels) lv.push_back({M, cut});
    j["levels"] = lv;
  }
  return j.dump(2);
}

} // namespace shl
