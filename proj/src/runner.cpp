#include "seqvqe/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "seqvqe/parallel.hpp"
#include "seqvqe/rng.hpp"

namespace seqvqe {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%FT%TZ", std::gmtime(&t));
  return buffer;
}

// Minimal CSV sink; floats carry 17 significant digits for stable
// round-trips.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header) : path_(path) {
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_ << header << "\n";
  }
  void field(const std::string& v) { cells_.push_back(v); }
  void field(double v) { cells_.push_back(format_double(v)); }
  void field(int v) { cells_.push_back(std::to_string(v)); }
  void field(long v) { cells_.push_back(std::to_string(v)); }
  void end_row() {
    for (std::size_t i = 0; i < cells_.size(); ++i)
      out_ << (i ? "," : "") << cells_[i];
    out_ << "\n";
    cells_.clear();
  }
  std::string filename() const { return path_.filename().string(); }

 private:
  fs::path path_;
  std::ofstream out_;
  std::vector<std::string> cells_;
};

// Manifest lifecycle: written before any numeric work, rewritten once at the
// end with the output checksums.
class Manifest {
 public:
  Manifest(const RunConfig& cfg, const std::string& command)
      : dir_(cfg.out_dir) {
    fs::create_directories(dir_);
    body_["command"] = command;
    body_["version"] = kVersion;
    body_["seed"] = cfg.seed;
    body_["started"] = iso_timestamp();
    body_["config"] = json::parse(cfg.to_json_text());
    write();
  }
  void finalize(const std::vector<std::string>& outputs) {
    json sums = json::object();
    for (const auto& name : outputs)
      sums[name] = file_checksum((dir_ / name).string());
    body_["outputs"] = sums;
    body_["finished"] = iso_timestamp();
    write();
  }

 private:
  void write() const {
    std::ofstream out(dir_ / "manifest.json");
    out << body_.dump(2) << "\n";
  }
  fs::path dir_;
  json body_;
};

ExtrapolationResult richardson_over_grid(const std::vector<NoisePoint>& points) {
  if (points.size() == 2) return extrapolate_first_order(points[0], points[1]);
  std::vector<double> nodes;
  nodes.reserve(points.size());
  for (const auto& p : points) nodes.push_back(p.c);
  ExtrapolationResult out;
  out.order = static_cast<int>(points.size()) - 1;
  out.weights = richardson_weights(nodes);
  double e = 0.0, var = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    e += out.weights[i] * points[i].energy;
    var += out.weights[i] * out.weights[i] * points[i].std_err * points[i].std_err;
  }
  out.e_star = e;
  out.std_err = std::sqrt(var);
  return out;
}

// One full SPSA optimization against the configured estimator.
struct OptimizeSpec {
  const RunConfig* cfg = nullptr;
  double j = 0.0;
  std::vector<double> cs;  // noise scales evaluated per objective call
  bool mitigate = false;
  SamplingMode mode = SamplingMode::Exact;
  std::uint64_t stream = 0;  // independent seed stream
  bool record = false;       // keep the per-iteration learning curve
};

struct OptimizeOutcome {
  std::vector<double> theta_best;
  std::vector<VqeIterationRecord> curve;
  EvalRecord final_eval;
};

OptimizeOutcome optimize_once(const OptimizeSpec& spec) {
  const RunConfig& cfg = *spec.cfg;
  const IsingModel ising = build_ring_hamiltonian(cfg.spins, spec.j);
  const AnsatzCircuit circuit = AnsatzCircuit::uniform(cfg.layers, Basis::Z);
  const int dim = 7 * cfg.layers;

  long counter = 0;
  std::vector<EvalRecord> records;
  bool recording = false;

  auto evaluate = [&](const std::vector<double>& x) {
    std::vector<LayerParams> params(cfg.layers);
    for (int l = 0; l < cfg.layers; ++l) {
      std::array<double, 7> raw;
      for (int i = 0; i < 7; ++i) raw[i] = x[7 * l + i];
      params[l] = LayerParams(raw);
    }
    EvalRecord rec;
    for (std::size_t ci = 0; ci < spec.cs.size(); ++ci) {
      const NoiseModel model = cfg.noise_model(spec.cs[ci]);
      EnergyEstimate est;
      if (spec.mode == SamplingMode::Exact) {
        est = estimate_energy_exact(circuit, params, model, ising);
      } else {
        est = estimate_energy_sampled(
            circuit, params, model, ising, cfg.shots_total,
            mix64(spec.stream, 0xE57ULL, static_cast<std::uint64_t>(counter),
                  static_cast<std::uint64_t>(ci)),
            1, cfg.z_fraction);
      }
      rec.per_c.push_back({spec.cs[ci], est.mean, est.std_err});
      rec.shots += est.shots;
    }
    if (spec.mitigate) {
      rec.mitigated = richardson_over_grid(rec.per_c);
      rec.objective = rec.mitigated->e_star;
    } else {
      rec.objective = rec.per_c.front().energy;
    }
    ++counter;
    if (recording) records.push_back(rec);
    return rec;
  };

  Objective objective = [&](const std::vector<double>& x) {
    return evaluate(x).objective;
  };

  std::vector<double> theta0(dim);
  {
    std::mt19937_64 rng(mix64(spec.stream, 0x1217ULL));
    for (auto& v : theta0) v = uniform_angle(rng);
  }

  SpsaConfig spsa_cfg = cfg.spsa;
  spsa_cfg.seed = mix64(spec.stream, 0x50ULL);
  const bool calibrates = spsa_cfg.a == 0.0;

  recording = spec.record;
  const SpsaResult result = spsa_run(objective, theta0, spsa_cfg);
  recording = false;

  OptimizeOutcome out;
  out.theta_best = result.theta_best;
  out.final_eval = evaluate(result.theta_best);
  if (spec.record) {
    // Calibration probes evaluated the objective before the first
    // iteration; drop those records when pairing with the trace.
    std::size_t cursor =
        calibrates ? 2 * static_cast<std::size_t>(spsa_cfg.calibration_probes)
                   : 0;
    out.curve.reserve(result.trace.size());
    for (const auto& it : result.trace) {
      VqeIterationRecord row;
      row.index = it.index;
      row.theta = it.theta;
      row.plus = records.at(cursor++);
      row.minus = records.at(cursor++);
      out.curve.push_back(std::move(row));
    }
  }
  return out;
}

void write_eval_rows(CsvWriter& csv, int iteration, const std::string& branch,
                     const EvalRecord& eval) {
  for (const auto& p : eval.per_c) {
    csv.field(iteration);
    csv.field(branch);
    csv.field(p.c);
    csv.field(p.energy);
    csv.field(p.std_err);
    csv.field(eval.shots / static_cast<long>(eval.per_c.size()));
    csv.field(0);
    csv.end_row();
  }
  if (eval.mitigated) {
    csv.field(iteration);
    csv.field(branch);
    csv.field(0.0);  // extrapolated to the zero-noise point
    csv.field(eval.mitigated->e_star);
    csv.field(eval.mitigated->std_err);
    csv.field(0L);
    csv.field(1);
    csv.end_row();
  }
}

}  // namespace

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checksum: cannot open " + path);
  std::uint64_t hash = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << std::hex << hash;
  return hex.str();
}

std::vector<ExactRow> run_exact(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "exact");
  std::vector<ExactRow> rows;
  for (double j : cfg.sweep_grid()) {
    const auto spectrum = exact_spectrum(build_ring_hamiltonian(cfg.spins, j));
    rows.push_back({cfg.spins, j, spectrum.ground_energy});
  }
  CsvWriter csv(fs::path(cfg.out_dir) / "exact.csv", "M,J,exact_energy");
  for (const auto& r : rows) {
    csv.field(r.spins);
    csv.field(r.j);
    csv.field(r.energy);
    csv.end_row();
  }
  manifest.finalize({"exact.csv"});
  return rows;
}

VqeOutcome run_vqe(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "vqe");

  std::vector<OptimizeOutcome> outcomes(cfg.restarts);
  parallel_for(cfg.restarts, cfg.workers, [&](int r) {
    OptimizeSpec spec;
    spec.cfg = &cfg;
    spec.j = cfg.j;
    spec.cs = cfg.c_grid;
    spec.mitigate = cfg.mitigation;
    spec.mode = cfg.mode;
    spec.stream = mix64(cfg.seed, 0x1ULL, static_cast<std::uint64_t>(r));
    spec.record = true;
    outcomes[r] = optimize_once(spec);
  });

  VqeOutcome out;
  out.best_restart = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    out.restarts.push_back(
        {r, outcomes[r].theta_best, outcomes[r].final_eval});
    if (outcomes[r].final_eval.objective <
        outcomes[out.best_restart].final_eval.objective)
      out.best_restart = r;
  }
  out.curve = outcomes[out.best_restart].curve;
  out.final_eval = outcomes[out.best_restart].final_eval;

  CsvWriter csv(fs::path(cfg.out_dir) / "learning_curve.csv",
                "iteration,branch,c,energy,stderr,shots,mitigated_flag");
  for (const auto& it : out.curve) {
    write_eval_rows(csv, it.index, "plus", it.plus);
    write_eval_rows(csv, it.index, "minus", it.minus);
  }
  const int final_index = static_cast<int>(out.curve.size());
  write_eval_rows(csv, final_index, "final", out.final_eval);

  manifest.finalize({"learning_curve.csv"});
  return out;
}

SweepOutcome run_sweep(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "sweep");

  const std::vector<double> grid = cfg.sweep_grid();
  if (grid.empty()) throw ConfigError("sweep: empty J grid");
  const int points = static_cast<int>(grid.size());

  std::vector<double> exact_energy(points);
  for (int p = 0; p < points; ++p)
    exact_energy[p] =
        exact_spectrum(build_ring_hamiltonian(cfg.spins, grid[p])).ground_energy;

  struct Cell {
    EvalRecord noisy;
    double noise_free = 0.0;
  };
  std::vector<Cell> cells(points * cfg.restarts);
  parallel_for(points * cfg.restarts, cfg.workers, [&](int task) {
    const int p = task / cfg.restarts;
    const int r = task % cfg.restarts;
    OptimizeSpec noisy;
    noisy.cfg = &cfg;
    noisy.j = grid[p];
    noisy.cs = cfg.c_grid;
    noisy.mitigate = cfg.mitigation;
    noisy.mode = cfg.mode;
    noisy.stream = mix64(cfg.seed, static_cast<std::uint64_t>(cfg.spins),
                         static_cast<std::uint64_t>(p),
                         static_cast<std::uint64_t>(r));
    cells[task].noisy = optimize_once(noisy).final_eval;

    OptimizeSpec reference = noisy;
    reference.cs = {0.0};
    reference.mitigate = false;
    reference.mode = SamplingMode::Exact;
    reference.stream = mix64(noisy.stream, 0x0FFULL);
    cells[task].noise_free = optimize_once(reference).final_eval.objective;
  });

  SweepOutcome out;
  for (int p = 0; p < points; ++p) {
    int best = 0;
    double best_noise_free = cells[p * cfg.restarts].noise_free;
    for (int r = 0; r < cfg.restarts; ++r) {
      const auto& cell = cells[p * cfg.restarts + r];
      const double mitigated =
          cell.noisy.mitigated ? cell.noisy.mitigated->e_star : 0.0;
      for (const auto& pc : cell.noisy.per_c) {
        SweepRow row;
        row.spins = cfg.spins;
        row.j = grid[p];
        row.restart = r;
        row.c = pc.c;
        row.raw_energy = pc.energy;
        row.mitigated_first = mitigated;
        row.noise_free = cell.noise_free;
        row.exact = exact_energy[p];
        out.rows.push_back(row);
      }
      if (cell.noisy.objective <
          cells[p * cfg.restarts + best].noisy.objective)
        best = r;
      best_noise_free = std::min(best_noise_free, cell.noise_free);
    }
    const auto& winner = cells[p * cfg.restarts + best];
    for (const auto& pc : winner.noisy.per_c) {
      SweepRow row;
      row.spins = cfg.spins;
      row.j = grid[p];
      row.restart = -1;
      row.c = pc.c;
      row.raw_energy = pc.energy;
      row.mitigated_first =
          winner.noisy.mitigated ? winner.noisy.mitigated->e_star : 0.0;
      row.noise_free = best_noise_free;
      row.exact = exact_energy[p];
      out.summary.push_back(row);
    }
  }

  CsvWriter csv(fs::path(cfg.out_dir) / "sweep.csv",
                "M,J,restart,c,raw_energy,mitigated_first,noise_free,exact");
  for (const auto& r : out.rows) {
    csv.field(r.spins);
    csv.field(r.j);
    csv.field(r.restart);
    csv.field(r.c);
    csv.field(r.raw_energy);
    csv.field(r.mitigated_first);
    csv.field(r.noise_free);
    csv.field(r.exact);
    csv.end_row();
  }
  CsvWriter summary(fs::path(cfg.out_dir) / "sweep_summary.csv",
                    "M,J,restart,c,raw_energy,mitigated_first,noise_free,exact");
  for (const auto& r : out.summary) {
    summary.field(r.spins);
    summary.field(r.j);
    summary.field(r.restart);
    summary.field(r.c);
    summary.field(r.raw_energy);
    summary.field(r.mitigated_first);
    summary.field(r.noise_free);
    summary.field(r.exact);
    summary.end_row();
  }
  manifest.finalize({"sweep.csv", "sweep_summary.csv"});
  return out;
}

ZneOutcome run_zne_study(const RunConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(cfg.zne_fit_grid.size()) < cfg.zne_degree + 1)
    throw ConfigError("zne-study: fit grid smaller than degree + 1");
  Manifest manifest(cfg, "zne-study");

  std::set<double> all_cs(cfg.zne_reference_grid.begin(),
                          cfg.zne_reference_grid.end());
  all_cs.insert(cfg.zne_fit_grid.begin(), cfg.zne_fit_grid.end());
  all_cs.insert(0.0);
  const std::vector<double> cs(all_cs.begin(), all_cs.end());
  const int n = static_cast<int>(cs.size());

  struct Best {
    double energy = 0.0;
    double std_err = 0.0;
  };
  std::vector<EvalRecord> finals(n * cfg.restarts);
  parallel_for(n * cfg.restarts, cfg.workers, [&](int task) {
    const int ci = task / cfg.restarts;
    const int r = task % cfg.restarts;
    OptimizeSpec spec;
    spec.cfg = &cfg;
    spec.j = cfg.j;
    spec.cs = {cs[ci]};
    spec.mitigate = false;
    // The zero-noise reference is always the ideal-model expectation.
    spec.mode = cs[ci] == 0.0 ? SamplingMode::Exact : cfg.mode;
    spec.stream = mix64(cfg.seed, 0x2ULL, static_cast<std::uint64_t>(ci),
                        static_cast<std::uint64_t>(r));
    finals[task] = optimize_once(spec).final_eval;
  });

  ZneOutcome out;
  std::vector<Best> best(n);
  for (int ci = 0; ci < n; ++ci) {
    int pick = 0;
    for (int r = 1; r < cfg.restarts; ++r)
      if (finals[ci * cfg.restarts + r].objective <
          finals[ci * cfg.restarts + pick].objective)
        pick = r;
    const auto& winner = finals[ci * cfg.restarts + pick];
    best[ci] = {winner.per_c.front().energy, winner.per_c.front().std_err};
    out.points.push_back({cs[ci], best[ci].energy, best[ci].std_err});
    if (cs[ci] == 0.0) out.reference_zero = best[ci].energy;
  }

  auto point_at = [&](double c) -> NoisePoint {
    for (int ci = 0; ci < n; ++ci)
      if (cs[ci] == c) return {c, best[ci].energy, best[ci].std_err};
    throw ConfigError("zne-study: missing grid point");
  };
  out.first_order = extrapolate_first_order(point_at(cfg.zne_fit_grid.front()),
                                            point_at(cfg.zne_fit_grid.back()));
  std::vector<NoisePoint> fit_points;
  for (double c : cfg.zne_fit_grid) fit_points.push_back(point_at(c));
  out.second_order = extrapolate_polynomial(fit_points, cfg.zne_degree);

  CsvWriter csv(fs::path(cfg.out_dir) / "zne_study.csv", "c,energy,stderr");
  for (const auto& p : out.points) {
    csv.field(p.c);
    csv.field(p.energy);
    csv.field(p.std_err);
    csv.end_row();
  }
  CsvWriter fits(fs::path(cfg.out_dir) / "zne_fits.csv", "order,e_star,stderr");
  for (const auto* fit : {&out.first_order, &out.second_order}) {
    fits.field(fit->order);
    fits.field(fit->e_star);
    fits.field(fit->std_err);
    fits.end_row();
  }
  manifest.finalize({"zne_study.csv", "zne_fits.csv"});
  return out;
}

RateCheckOutcome run_rate_check(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "rate-check");

  RateCheckOutcome out;
  out.rows.resize(cfg.rate_check_ratios.size());
  parallel_for(static_cast<int>(cfg.rate_check_ratios.size()), cfg.workers,
               [&](int i) {
                 const double ratio = cfg.rate_check_ratios[i];
                 TransientLevelConfig tl;
                 tl.gamma = 1.0;
                 tl.omega = ratio;
                 const TransientRates fitted = simulate_transient_decay(tl);
                 const double closed = 4.0 * ratio * ratio /
                                       (4.0 * ratio * ratio + 1.0);
                 out.rows[i] = {ratio, fitted.gamma1, fitted.gamma2, closed,
                                std::abs(fitted.gamma1 - closed) / closed};
               });

  const double fitted = cascade_damping_rate(cfg.injection);
  const double formula = injected_rate(cfg.injection).rate;
  out.cascade = {cfg.injection.omega_ef, cfg.injection.omega_f0g1,
                 cfg.injection.gamma_r, fitted, formula,
                 std::abs(fitted - formula) / formula};

  CsvWriter csv(fs::path(cfg.out_dir) / "rate_check.csv",
                "ratio,fitted_g1,fitted_g2,closed_form,rel_err");
  for (const auto& r : out.rows) {
    csv.field(r.ratio);
    csv.field(r.fitted_g1);
    csv.field(r.fitted_g2);
    csv.field(r.closed_form);
    csv.field(r.rel_err);
    csv.end_row();
  }
  CsvWriter cascade(fs::path(cfg.out_dir) / "cascade_check.csv",
                    "omega_ef,omega_f0g1,gamma_r,fitted,formula,rel_err");
  cascade.field(out.cascade.omega_ef);
  cascade.field(out.cascade.omega_f0g1);
  cascade.field(out.cascade.gamma_r);
  cascade.field(out.cascade.fitted);
  cascade.field(out.cascade.formula);
  cascade.field(out.cascade.rel_err);
  cascade.end_row();

  manifest.finalize({"rate_check.csv", "cascade_check.csv"});
  return out;
}

}  // namespace seqvqe
