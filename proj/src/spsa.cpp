#include "seqvqe/spsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seqvqe/rng.hpp"

namespace seqvqe {

void SpsaConfig::validate() const {
  if (c0 <= 0.0) throw std::invalid_argument("SpsaConfig: c0 must be > 0");
  if (a < 0.0) throw std::invalid_argument("SpsaConfig: a must be >= 0");
  if (!(gamma > 0.0 && gamma < alpha && alpha <= 1.0))
    throw std::invalid_argument("SpsaConfig: need 0 < gamma < alpha <= 1");
  if (iterations < 1)
    throw std::invalid_argument("SpsaConfig: iterations must be >= 1");
  if (first_step <= 0.0)
    throw std::invalid_argument("SpsaConfig: first_step must be > 0");
  if (calibration_probes < 1)
    throw std::invalid_argument("SpsaConfig: calibration_probes must be >= 1");
}

SpsaConfig SpsaConfig::resolved() const {
  validate();
  SpsaConfig r = *this;
  if (r.big_a < 0.0) r.big_a = 0.1 * r.iterations;
  return r;
}

std::vector<int> perturbation(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw std::invalid_argument("perturbation: dim must be >= 1");
  std::vector<int> delta(dim);
  for (auto& d : delta) d = (rng() & 1) ? 1 : -1;
  return delta;
}

std::pair<std::vector<double>, IterationRecord> spsa_step(
    const std::vector<double>& theta, int k, const Objective& objective,
    const SpsaConfig& cfg, std::mt19937_64& rng) {
  if (cfg.a <= 0.0 || cfg.big_a < 0.0)
    throw std::invalid_argument("spsa_step: gains not resolved");
  const int dim = static_cast<int>(theta.size());

  IterationRecord record;
  record.index = k + 1;
  record.theta = theta;
  record.a_k = cfg.a / std::pow(cfg.big_a + k + 1, cfg.alpha);
  record.c_k = cfg.c0 / std::pow(k + 1.0, cfg.gamma);
  record.delta = perturbation(dim, rng);

  std::vector<double> plus(theta), minus(theta);
  for (int i = 0; i < dim; ++i) {
    plus[i] += record.c_k * record.delta[i];
    minus[i] -= record.c_k * record.delta[i];
  }
  record.y_plus = objective(plus);
  record.y_minus = objective(minus);
  if (!std::isfinite(record.y_plus) || !std::isfinite(record.y_minus))
    throw NonFiniteObjectiveError("spsa_step: non-finite objective at iteration " +
                                  std::to_string(record.index));

  std::vector<double> next(theta);
  const double diff = record.y_plus - record.y_minus;
  for (int i = 0; i < dim; ++i)
    next[i] -= record.a_k * diff / (2.0 * record.c_k * record.delta[i]);
  return {std::move(next), std::move(record)};
}

SpsaResult spsa_run(const Objective& objective, std::vector<double> theta0,
                    const SpsaConfig& raw_cfg) {
  SpsaConfig cfg = raw_cfg.resolved();
  const int dim = static_cast<int>(theta0.size());
  std::mt19937_64 rng(mix64(cfg.seed, 0x5057aULL));

  if (cfg.a == 0.0) {
    // Median of a few gradient probes at theta0 sizes the first step; a
    // single probe can draw a near-perpendicular direction and blow up a.
    std::vector<double> magnitudes;
    for (int probe = 0; probe < cfg.calibration_probes; ++probe) {
      const auto delta = perturbation(dim, rng);
      std::vector<double> plus(theta0), minus(theta0);
      for (int i = 0; i < dim; ++i) {
        plus[i] += cfg.c0 * delta[i];
        minus[i] -= cfg.c0 * delta[i];
      }
      const double diff = objective(plus) - objective(minus);
      if (!std::isfinite(diff))
        throw NonFiniteObjectiveError("spsa_run: non-finite calibration probe");
      magnitudes.push_back(std::abs(diff) / (2.0 * cfg.c0));
    }
    std::nth_element(magnitudes.begin(),
                     magnitudes.begin() + magnitudes.size() / 2,
                     magnitudes.end());
    const double grad = magnitudes[magnitudes.size() / 2];
    cfg.a = grad > 1e-12
                ? cfg.first_step * std::pow(cfg.big_a + 1.0, cfg.alpha) / grad
                : cfg.first_step;
  }

  SpsaResult result;
  result.trace.reserve(cfg.iterations);
  std::vector<double> evaluations;
  evaluations.reserve(2 * cfg.iterations);
  result.best_smoothed = std::numeric_limits<double>::infinity();

  std::vector<double> theta = std::move(theta0);
  for (int k = 0; k < cfg.iterations; ++k) {
    auto [next, record] = spsa_step(theta, k, objective, cfg, rng);
    evaluations.push_back(record.y_plus);
    evaluations.push_back(record.y_minus);
    const int take = std::min<std::size_t>(10, evaluations.size());
    std::vector<double> window(evaluations.end() - take, evaluations.end());
    std::nth_element(window.begin(), window.begin() + take / 2, window.end());
    record.smoothed = window[take / 2];
    if (record.smoothed < result.best_smoothed) {
      result.best_smoothed = record.smoothed;
      result.best_index = record.index;
      result.theta_best = theta;
    }
    result.trace.push_back(std::move(record));
    theta = std::move(next);
  }
  return result;
}

}  // namespace seqvqe
