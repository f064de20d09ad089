#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "seqvqe/runner.hpp"

namespace {

void print_extrapolation(const char* label,
                         const seqvqe::ExtrapolationResult& fit) {
  std::printf("%s: e* = %.8f (stderr %.2e, order %d)\n", label, fit.e_star,
              fit.std_err, fit.order);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit sequential VQE simulator for the circular "
               "transverse-field Ising model, with gate-level decoherence, "
               "analog noise injection and zero-noise extrapolation"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<std::string> mode;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "master seed override");
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--workers", workers, "worker thread count override");
  app.add_option("--mode", mode, "sampling mode override: exact|shots")
      ->check(CLI::IsMember({"exact", "shots"}));

  auto* cmd_exact = app.add_subcommand("exact", "exact ground energies over the J grid");
  auto* cmd_vqe = app.add_subcommand("vqe", "single-point VQE learning run");
  auto* cmd_sweep = app.add_subcommand("sweep", "J sweep with raw, mitigated, noise-free and exact series");
  auto* cmd_zne = app.add_subcommand("zne-study", "optimized energies across noise scales plus extrapolations");
  auto* cmd_rate = app.add_subcommand("rate-check", "transient-level and cascade damping-rate verification");

  CLI11_PARSE(app, argc, argv);

  try {
    seqvqe::RunConfig cfg = config_path.empty()
                                ? seqvqe::RunConfig{}
                                : seqvqe::load_config_file(config_path);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (workers) cfg.workers = *workers;
    if (mode)
      cfg.mode = *mode == "exact" ? seqvqe::SamplingMode::Exact
                                  : seqvqe::SamplingMode::Shots;
    cfg.validate();

    if (cmd_exact->parsed()) {
      const auto rows = seqvqe::run_exact(cfg);
      for (const auto& r : rows)
        std::printf("M=%d J=%.4f E0=%.8f\n", r.spins, r.j, r.energy);
    } else if (cmd_vqe->parsed()) {
      const auto out = seqvqe::run_vqe(cfg);
      std::printf("best restart: %d\n", out.best_restart);
      for (const auto& p : out.final_eval.per_c)
        std::printf("E(c=%.2f) = %.8f (stderr %.2e)\n", p.c, p.energy,
                    p.std_err);
      if (out.final_eval.mitigated)
        print_extrapolation("mitigated", *out.final_eval.mitigated);
    } else if (cmd_sweep->parsed()) {
      const auto out = seqvqe::run_sweep(cfg);
      for (const auto& r : out.summary)
        std::printf(
            "M=%d J=%.4f c=%.2f raw=%.6f mitigated=%.6f noise_free=%.6f "
            "exact=%.6f\n",
            r.spins, r.j, r.c, r.raw_energy, r.mitigated_first, r.noise_free,
            r.exact);
    } else if (cmd_zne->parsed()) {
      const auto out = seqvqe::run_zne_study(cfg);
      for (const auto& p : out.points)
        std::printf("c=%.2f E=%.8f (stderr %.2e)\n", p.c, p.energy, p.std_err);
      print_extrapolation("first-order ", out.first_order);
      print_extrapolation("second-order", out.second_order);
      std::printf("reference E(c=0) = %.8f\n", out.reference_zero);
    } else if (cmd_rate->parsed()) {
      const auto out = seqvqe::run_rate_check(cfg);
      for (const auto& r : out.rows)
        std::printf(
            "omega/gamma=%.3f fitted_g1=%.6e fitted_g2=%.6e closed=%.6e "
            "rel_err=%.3f%%\n",
            r.ratio, r.fitted_g1, r.fitted_g2, r.closed_form,
            100.0 * r.rel_err);
      std::printf("cascade: fitted=%.6e formula=%.6e rel_err=%.3f%%\n",
                  out.cascade.fitted, out.cascade.formula,
                  100.0 * out.cascade.rel_err);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
