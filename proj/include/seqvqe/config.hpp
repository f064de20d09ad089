#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqvqe/ansatz.hpp"
#include "seqvqe/noise.hpp"
#include "seqvqe/spsa.hpp"

namespace seqvqe {

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SamplingMode { Exact, Shots };

// Resolved run configuration. Field defaults are the device calibration this
// simulator ships with (transmon/storage coherences, cross-Kerr, readout
// decay) plus conventional optimizer settings.
struct RunConfig {
  // model
  int spins = 4;
  double j = 0.5;
  std::vector<double> j_grid;  // sweep grid; falls back to the default grid

  // ansatz + durations
  int layers = 3;
  GateDurations durations{};

  // noise
  DecoherenceRates rates{};
  std::vector<double> c_grid = {1.0, 2.2};
  double damping_ratio = 1.0;
  double dephasing_ratio = 1.0;
  InjectionConfig injection{3.2353e5, 3.2353e6, 1.0 / 68e-9};

  // sampling
  SamplingMode mode = SamplingMode::Exact;
  long shots_total = 20000;
  double z_fraction = 0.5;

  // spsa
  SpsaConfig spsa{};
  int restarts = 20;

  // mitigation
  bool mitigation = true;
  int zne_degree = 2;
  std::vector<double> zne_fit_grid = {1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  std::vector<double> zne_reference_grid = {0.0, 0.2, 0.4, 0.6, 0.8};

  // rate check
  std::vector<double> rate_check_ratios = {0.02, 0.05, 0.1};

  // output
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int workers = 1;

  // Returns the sweep grid, falling back to the default J span.
  std::vector<double> sweep_grid() const;

  NoiseModel noise_model(double c) const;
  void validate() const;

  // Serialized resolved snapshot (JSON text) for the run manifest.
  std::string to_json_text() const;
};

// Parses the sectioned JSON config, applying defaults for absent keys.
// Throws ConfigError with a descriptive message on malformed input.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

}  // namespace seqvqe
