#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqvqe/config.hpp"
#include "seqvqe/estimator.hpp"
#include "seqvqe/mitigation.hpp"
#include "seqvqe/spsa.hpp"

namespace seqvqe {

// One objective evaluation: the per-c energies and, when mitigation is in
// the loop, the extrapolation built from them.
struct EvalRecord {
  std::vector<NoisePoint> per_c;
  std::optional<ExtrapolationResult> mitigated;
  double objective = 0.0;
  long shots = 0;
};

struct VqeIterationRecord {
  int index = 0;  // 1-based
  std::vector<double> theta;
  EvalRecord plus;
  EvalRecord minus;
};

struct RestartOutcome {
  int restart = 0;
  std::vector<double> theta_best;
  EvalRecord final_eval;
};

struct VqeOutcome {
  int best_restart = 0;
  std::vector<VqeIterationRecord> curve;  // best restart's learning curve
  EvalRecord final_eval;                  // evaluated at the best parameters
  std::vector<RestartOutcome> restarts;
};

struct ExactRow {
  int spins = 0;
  double j = 0.0;
  double energy = 0.0;
};

struct SweepRow {
  int spins = 0;
  double j = 0.0;
  int restart = 0;  // -1 marks the best-of summary rows
  double c = 0.0;
  double raw_energy = 0.0;
  double mitigated_first = 0.0;
  double noise_free = 0.0;
  double exact = 0.0;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::vector<SweepRow> summary;
};

struct ZnePoint {
  double c = 0.0;
  double energy = 0.0;
  double std_err = 0.0;
};

struct ZneOutcome {
  std::vector<ZnePoint> points;  // ascending c, includes the c = 0 reference
  ExtrapolationResult first_order;
  ExtrapolationResult second_order;
  double reference_zero = 0.0;
};

struct RateCheckRow {
  double ratio = 0.0;
  double fitted_g1 = 0.0;
  double fitted_g2 = 0.0;
  double closed_form = 0.0;
  double rel_err = 0.0;
};

struct CascadeRow {
  double omega_ef = 0.0;
  double omega_f0g1 = 0.0;
  double gamma_r = 0.0;
  double fitted = 0.0;
  double formula = 0.0;
  double rel_err = 0.0;
};

struct RateCheckOutcome {
  std::vector<RateCheckRow> rows;
  CascadeRow cascade;
};

// Pipelines. Each validates the configuration, writes a manifest before any
// numeric work, produces its CSV outputs under cfg.out_dir and finally
// updates the manifest with per-output checksums. Outputs are bit-identical
// for a fixed config + seed, independent of the worker count.
std::vector<ExactRow> run_exact(const RunConfig& cfg);
VqeOutcome run_vqe(const RunConfig& cfg);
SweepOutcome run_sweep(const RunConfig& cfg);
ZneOutcome run_zne_study(const RunConfig& cfg);
RateCheckOutcome run_rate_check(const RunConfig& cfg);

// FNV-1a 64-bit checksum of a file, hex-encoded; used by the manifest.
std::string file_checksum(const std::string& path);

}  // namespace seqvqe
