#include "seqvqe/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace seqvqe {

namespace {

using nlohmann::json;

const json* section(const json& root, const char* name) {
  auto it = root.find(name);
  if (it == root.end()) return nullptr;
  if (!it->is_object())
    throw ConfigError(std::string("config: section '") + name +
                      "' must be an object");
  return &*it;
}

template <typename T>
void read(const json* sec, const char* key, T& into) {
  if (!sec) return;
  auto it = sec->find(key);
  if (it == sec->end()) return;
  try {
    into = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace

std::vector<double> RunConfig::sweep_grid() const {
  if (!j_grid.empty()) return j_grid;
  return {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
}

NoiseModel RunConfig::noise_model(double c) const {
  NoiseModel model;
  model.rates = rates;
  model.scale = c;
  model.damping_ratio = damping_ratio;
  model.dephasing_ratio = dephasing_ratio;
  model.durations = durations;
  return model;
}

void RunConfig::validate() const {
  if (spins < 2) throw ConfigError("config: model.spins must be >= 2");
  if (layers != spins - 1)
    throw ConfigError("config: ansatz.layers must equal model.spins - 1");
  if (!std::isfinite(j)) throw ConfigError("config: model.j must be finite");
  for (double v : j_grid)
    if (!std::isfinite(v)) throw ConfigError("config: model.j_grid entries must be finite");

  try {
    rates.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: noise section invalid: ") + e.what());
  }

  if (c_grid.empty()) throw ConfigError("config: noise.c_grid must be non-empty");
  if (!std::is_sorted(c_grid.begin(), c_grid.end()))
    throw ConfigError("config: noise.c_grid must be sorted ascending");
  for (std::size_t i = 1; i < c_grid.size(); ++i)
    if (c_grid[i] == c_grid[i - 1])
      throw ConfigError("config: noise.c_grid must have distinct entries");
  for (double c : c_grid)
    if (c < 0.0) throw ConfigError("config: noise.c_grid entries must be >= 0");
  if (mitigation) {
    if (c_grid.size() < 2)
      throw ConfigError("config: mitigation needs a c_grid with >= 2 points");
    if (std::find(c_grid.begin(), c_grid.end(), 1.0) == c_grid.end())
      throw ConfigError("config: mitigation needs c = 1.0 in the c_grid");
  }

  if (mode == SamplingMode::Shots && shots_total < 2)
    throw ConfigError("config: sampling.shots_total must be >= 2 in shots mode");
  if (z_fraction <= 0.0 || z_fraction >= 1.0)
    throw ConfigError("config: sampling.z_fraction must be in (0, 1)");

  try {
    spsa.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: spsa section invalid: ") + e.what());
  }
  if (restarts < 1) throw ConfigError("config: spsa.restarts must be >= 1");

  if (zne_degree < 1) throw ConfigError("config: mitigation.degree must be >= 1");
  if (static_cast<int>(zne_fit_grid.size()) < zne_degree + 1)
    throw ConfigError("config: mitigation.fit_grid needs degree + 1 points");
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  if (out_dir.empty()) throw ConfigError("config: output.dir must be non-empty");
}

std::string RunConfig::to_json_text() const {
  json root;
  root["model"] = {{"spins", spins}, {"j", j}, {"j_grid", j_grid}};
  root["ansatz"] = {{"layers", layers}};
  root["durations"] = {{"q_rot", durations.q_rot},
                       {"s_gate", durations.s_gate},
                       {"decode", durations.decode},
                       {"measure_reset", durations.measure_reset},
                       {"chi_qs_over_2pi", durations.chi_qs / (2.0 * kPi)}};
  root["noise"] = {{"t1_q", rates.t1_q},
                   {"t2star_q", rates.t2star_q},
                   {"t1_s", rates.t1_s},
                   {"t2star_s", rates.t2star_s},
                   {"thermal_q", rates.thermal_q},
                   {"c_grid", c_grid},
                   {"damping_ratio", damping_ratio},
                   {"dephasing_ratio", dephasing_ratio},
                   {"injection",
                    {{"omega_ef", injection.omega_ef},
                     {"omega_f0g1", injection.omega_f0g1},
                     {"gamma_r", injection.gamma_r}}}};
  root["sampling"] = {
      {"mode", mode == SamplingMode::Exact ? "exact" : "shots"},
      {"shots_total", shots_total},
      {"z_fraction", z_fraction}};
  root["spsa"] = {{"a", spsa.a},          {"c0", spsa.c0},
                  {"A", spsa.big_a},      {"alpha", spsa.alpha},
                  {"gamma", spsa.gamma},  {"iterations", spsa.iterations},
                  {"first_step", spsa.first_step}, {"restarts", restarts}};
  root["mitigation"] = {{"enabled", mitigation},
                        {"degree", zne_degree},
                        {"fit_grid", zne_fit_grid},
                        {"reference_grid", zne_reference_grid}};
  root["rate_check"] = {{"ratios", rate_check_ratios}};
  root["output"] = {{"dir", out_dir}};
  root["seed"] = seed;
  root["workers"] = workers;
  return root.dump(2);
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: parse failure: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  RunConfig cfg;
  bool layers_given = false;

  if (const json* model = section(root, "model")) {
    read(model, "spins", cfg.spins);
    read(model, "j", cfg.j);
    read(model, "j_grid", cfg.j_grid);
  }
  if (const json* ansatz = section(root, "ansatz")) {
    layers_given = ansatz->contains("layers");
    read(ansatz, "layers", cfg.layers);
  }
  if (!layers_given) cfg.layers = cfg.spins - 1;

  if (const json* durations = section(root, "durations")) {
    read(durations, "q_rot", cfg.durations.q_rot);
    read(durations, "s_gate", cfg.durations.s_gate);
    read(durations, "decode", cfg.durations.decode);
    read(durations, "measure_reset", cfg.durations.measure_reset);
    double chi_over_2pi = cfg.durations.chi_qs / (2.0 * kPi);
    read(durations, "chi_qs_over_2pi", chi_over_2pi);
    cfg.durations.chi_qs = 2.0 * kPi * chi_over_2pi;
  }

  if (const json* noise = section(root, "noise")) {
    read(noise, "t1_q", cfg.rates.t1_q);
    read(noise, "t2star_q", cfg.rates.t2star_q);
    read(noise, "t1_s", cfg.rates.t1_s);
    read(noise, "t2star_s", cfg.rates.t2star_s);
    read(noise, "thermal_q", cfg.rates.thermal_q);
    read(noise, "c_grid", cfg.c_grid);
    read(noise, "damping_ratio", cfg.damping_ratio);
    read(noise, "dephasing_ratio", cfg.dephasing_ratio);
    if (const json* injection = section(*noise, "injection")) {
      read(injection, "omega_ef", cfg.injection.omega_ef);
      read(injection, "omega_f0g1", cfg.injection.omega_f0g1);
      read(injection, "gamma_r", cfg.injection.gamma_r);
    }
  }

  if (const json* sampling = section(root, "sampling")) {
    std::string mode = cfg.mode == SamplingMode::Exact ? "exact" : "shots";
    read(sampling, "mode", mode);
    if (mode == "exact") cfg.mode = SamplingMode::Exact;
    else if (mode == "shots") cfg.mode = SamplingMode::Shots;
    else throw ConfigError("config: sampling.mode must be 'exact' or 'shots'");
    read(sampling, "shots_total", cfg.shots_total);
    read(sampling, "z_fraction", cfg.z_fraction);
  }

  if (const json* spsa = section(root, "spsa")) {
    read(spsa, "a", cfg.spsa.a);
    read(spsa, "c0", cfg.spsa.c0);
    read(spsa, "A", cfg.spsa.big_a);
    read(spsa, "alpha", cfg.spsa.alpha);
    read(spsa, "gamma", cfg.spsa.gamma);
    read(spsa, "iterations", cfg.spsa.iterations);
    read(spsa, "first_step", cfg.spsa.first_step);
    read(spsa, "restarts", cfg.restarts);
  }

  if (const json* mitigation = section(root, "mitigation")) {
    read(mitigation, "enabled", cfg.mitigation);
    read(mitigation, "degree", cfg.zne_degree);
    read(mitigation, "fit_grid", cfg.zne_fit_grid);
    read(mitigation, "reference_grid", cfg.zne_reference_grid);
  }

  if (const json* rate_check = section(root, "rate_check")) {
    read(rate_check, "ratios", cfg.rate_check_ratios);
  }

  if (const json* output = section(root, "output")) {
    read(output, "dir", cfg.out_dir);
  }
  read(&root, "seed", cfg.seed);
  read(&root, "workers", cfg.workers);

  cfg.validate();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace seqvqe
