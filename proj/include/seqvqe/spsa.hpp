#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace seqvqe {

// Simultaneous-perturbation gradient descent, two objective evaluations per
// iteration. Gains follow a_k = a/(A+k+1)^alpha, c_k = c0/(k+1)^gamma with
// 0-based k.
struct SpsaConfig {
  double a = 0.0;      // 0: calibrate so the first step moves <= first_step rad
  double c0 = 0.1;
  double big_a = -1.0; // < 0: 10% of the iteration count
  double alpha = 0.602;
  double gamma = 0.101;
  int iterations = 500;
  std::uint64_t seed = 0;
  double first_step = 0.2;
  int calibration_probes = 3;  // gradient probes behind the a calibration

  void validate() const;
  // Fills the derived defaults (big_a); `a` stays 0 until calibration.
  SpsaConfig resolved() const;
};

struct IterationRecord {
  int index = 0;  // 1-based
  std::vector<double> theta;
  double y_plus = 0.0;
  double y_minus = 0.0;
  double a_k = 0.0;
  double c_k = 0.0;
  std::vector<int> delta;  // +-1 entries
  double smoothed = 0.0;   // median of the most recent evaluations
};

struct SpsaResult {
  std::vector<double> theta_best;
  double best_smoothed = 0.0;
  int best_index = 0;
  std::vector<IterationRecord> trace;
};

struct NonFiniteObjectiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Independent Rademacher entries.
std::vector<int> perturbation(int dim, std::mt19937_64& rng);

// One update; cfg must carry resolved gains (a > 0, big_a >= 0). Throws
// NonFiniteObjectiveError when an evaluation is not finite.
std::pair<std::vector<double>, IterationRecord> spsa_step(
    const std::vector<double>& theta, int k, const Objective& objective,
    const SpsaConfig& cfg, std::mt19937_64& rng);

// Full run with optional step-size calibration. theta_best is the iterate
// whose running median of the last 10 recorded evaluations was smallest.
SpsaResult spsa_run(const Objective& objective, std::vector<double> theta0,
                    const SpsaConfig& cfg);

}  // namespace seqvqe
