#include "segrega/config.hpp"

#include <set>
#include <sstream>

#include <fmt/format.h>

#include "segrega/error.hpp"

namespace segrega {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

void only_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, val] : j.items()) {
    if (!allowed.count(key)) bad(fmt::format("unknown key '{}' in {}", key, where));
  }
}

double positive(const Json& j, const char* key) {
  const double v = j.at(key).get<double>();
  if (!(v > 0.0)) bad(fmt::format("'{}' must be positive", key));
  return v;
}

int in_range(const Json& j, const char* key, int lo, int hi) {
  if (!j.at(key).is_number_integer()) bad(fmt::format("'{}' must be an integer", key));
  const long long v = j.at(key).get<long long>();
  if (v < lo || v > hi) bad(fmt::format("'{}' = {} outside [{}, {}]", key, v, lo, hi));
  return static_cast<int>(v);
}

}  // namespace

Json default_config() {
  const ExperimentConfig c;
  Json j = c.to_json();
  j["datum"] = {{"symmetric", {{"k", 6}}}};
  return j;
}

Json ExperimentConfig::to_json() const {
  Json j = {{"datum", datum},
            {"grid", {{"n_r", n_r}, {"n_theta", n_theta}}},
            {"mu_schedule", mu_schedule},
            {"truncation", truncation},
            {"quadrature", quadrature},
            {"max_sweeps", max_sweeps},
            {"tolerances",
             {{"solver", tol.solver},
              {"moment", tol.moment},
              {"order", tol.order},
              {"derivative", tol.derivative},
              {"threshold", tol.threshold},
              {"exponent", tol.exponent},
              {"fit_residual", tol.fit_residual},
              {"reflection_angle", tol.reflection_angle},
              {"reflection_mismatch", tol.reflection_mismatch},
              {"harmonic_factor", tol.harmonic_factor}}},
            {"point", point ? Json::array({point->real(), point->imag()}) : Json()},
            {"out", out},
            {"seed", seed},
            {"threads", threads},
            {"source", source},
            {"model", model},
            {"partition", partition},
            {"grid_dump", grid_dump},
            {"checks", checks},
            {"suite", {{"data", suite_data}, {"points", suite_points}}},
            {"dump_all_steps", dump_all_steps}};
  return j;
}

Json ExperimentConfig::canonical() const {
  Json j = to_json();
  j.erase("out");
  j.erase("threads");
  return j;
}

ExperimentConfig load_config(const Json& file, const Json& flags, const std::filesystem::path& base_dir) {
  if (!file.is_null() && !file.is_object()) bad("config must be a JSON object");
  Json j = default_config();
  // Merge-patch would blend two datum objects, so a datum layer replaces the
  // previous one whole.
  // Paths in the file are relative to the file; flag paths to the working directory.
  const Json file_layer = [&] {
    Json f = file;
    if (!f.is_object()) return f;
    for (const char* key : {"datum", "partition", "grid_dump"}) {
      if (f.contains(key) && f[key].is_string() && !f[key].get<std::string>().empty()) {
        f[key] = (base_dir / f[key].get<std::string>()).string();
      }
    }
    return f;
  }();
  for (const Json* layer : {&file_layer, &flags}) {
    if (layer->is_null()) continue;
    j.merge_patch(*layer);
    if (layer->contains("datum")) j["datum"] = layer->at("datum");
  }
  if (!j.contains("point")) j["point"] = nullptr;
  only_keys(j,
            {"datum", "grid", "mu_schedule", "truncation", "quadrature", "max_sweeps", "tolerances", "point", "out",
             "seed", "threads", "source", "model", "partition", "grid_dump", "checks", "suite", "dump_all_steps"},
            "config");
  ExperimentConfig c;
  try {
    if (j.at("datum").is_string()) {
      c.datum = read_json_file(j.at("datum").get<std::string>());
      // a whole config file may be given in place of a bare datum
      if (c.datum.contains("datum") && c.datum.at("datum").is_object()) c.datum = Json(c.datum.at("datum"));
    } else if (j.at("datum").is_object()) {
      c.datum = j.at("datum");
    } else {
      bad("'datum' must be an object or a file path");
    }
    const Json& g = j.at("grid");
    only_keys(g, {"n_r", "n_theta"}, "grid");
    c.n_r = in_range(g, "n_r", 4, 1 << 14);
    c.n_theta = in_range(g, "n_theta", 8, 1 << 16);
    c.mu_schedule = j.at("mu_schedule").get<std::vector<double>>();
    c.truncation = in_range(j, "truncation", 1, 1 << 14);
    c.quadrature = in_range(j, "quadrature", 8, 1 << 22);
    if (c.quadrature <= 2 * c.truncation) {
      bad(fmt::format("quadrature {} must exceed twice the truncation {}", c.quadrature, c.truncation));
    }
    c.max_sweeps = in_range(j, "max_sweeps", 1, 1 << 30);
    const Json& t = j.at("tolerances");
    only_keys(t,
              {"solver", "moment", "order", "derivative", "threshold", "exponent", "fit_residual", "reflection_angle",
               "reflection_mismatch", "harmonic_factor"},
              "tolerances");
    c.tol.solver = positive(t, "solver");
    c.tol.moment = positive(t, "moment");
    c.tol.order = positive(t, "order");
    c.tol.derivative = positive(t, "derivative");
    c.tol.threshold = positive(t, "threshold");
    if (c.tol.threshold >= 1.0) bad("'threshold' must be below 1");
    c.tol.exponent = positive(t, "exponent");
    c.tol.fit_residual = positive(t, "fit_residual");
    c.tol.reflection_angle = positive(t, "reflection_angle");
    c.tol.reflection_mismatch = positive(t, "reflection_mismatch");
    c.tol.harmonic_factor = positive(t, "harmonic_factor");
    if (!j.at("point").is_null()) {
      const auto v = j.at("point").get<std::vector<double>>();
      if (v.size() != 2) bad("'point' must be [x1, x2]");
      c.point = Complex(v[0], v[1]);
      if (!(std::abs(*c.point) < 1.0)) bad("'point' must lie in the open unit disk");
    }
    c.out = j.at("out").get<std::string>();
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0)) {
      bad("'seed' must be a nonnegative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
    c.threads = static_cast<unsigned>(in_range(j, "threads", 1, 1024));
    c.source = j.at("source").get<std::string>();
    if (c.source != "solve" && c.source != "model" && c.source != "file") {
      bad("'source' must be one of solve, model, file");
    }
    c.model = j.at("model").get<std::string>();
    c.partition = j.at("partition").get<std::string>();
    c.grid_dump = j.at("grid_dump").get<std::string>();
    c.checks = j.at("checks").get<std::vector<std::string>>();
    const std::set<std::string> known = {"identity", "graph",      "classify",      "fit",
                                         "reflection", "membership", "reconstruction"};
    std::set<std::string> seen;
    for (const auto& name : c.checks) {
      if (!known.count(name)) bad("unknown check '" + name + "'");
      if (!seen.insert(name).second) bad("check '" + name + "' listed twice");
    }
    const Json& s = j.at("suite");
    only_keys(s, {"data", "points"}, "suite");
    c.suite_data = in_range(s, "data", 0, 100000);
    c.suite_points = in_range(s, "points", 1, 100000);
    c.dump_all_steps = j.at("dump_all_steps").get<bool>();
  } catch (const Json::exception& e) {
    bad(e.what());
  }
  return c;
}

Json parse_grid_flag(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const int nr = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    const std::string rest = text.substr(x + 1);
    const int nt = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {{"n_r", nr}, {"n_theta", nt}};
  } catch (const std::exception&) {
    bad("--grid expects NRxNT, got '" + text + "'");
  }
}

std::vector<double> parse_list_flag(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      bad("expected a comma-separated list of numbers, got '" + text + "'");
    }
  }
  if (out.empty()) bad("empty list '" + text + "'");
  return out;
}

}  // namespace segrega
