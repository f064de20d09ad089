#include "seqvqe/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

using namespace seqvqe;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("seqvqe_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_vqe_config(const std::string& tag) {
  RunConfig cfg;
  cfg.spins = 2;
  cfg.layers = 1;
  cfg.j = 0.5;
  cfg.spsa.iterations = 40;
  cfg.restarts = 3;
  cfg.mode = SamplingMode::Shots;
  cfg.shots_total = 1000;
  cfg.out_dir = fresh_dir(tag).string();
  cfg.seed = 31415;
  return cfg;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) lines += c == '\n';
  return lines;
}

}  // namespace

TEST_SUITE_BEGIN("runner");

TEST_CASE("config parsing applies section values and defaults") {
  const std::string text = R"({
    "model": {"spins": 3, "j": 0.25},
    "noise": {"c_grid": [1.0, 2.2], "thermal_q": 0.034},
    "sampling": {"mode": "shots", "shots_total": 5000},
    "spsa": {"iterations": 123, "restarts": 4},
    "output": {"dir": "runs/demo"},
    "seed": 77
  })";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.spins == 3);
  CHECK(cfg.layers == 2);  // derived
  CHECK(cfg.j == 0.25);
  CHECK(cfg.rates.thermal_q == 0.034);
  CHECK(cfg.rates.t1_q == 24e-6);  // default
  CHECK(cfg.mode == SamplingMode::Shots);
  CHECK(cfg.shots_total == 5000);
  CHECK(cfg.spsa.iterations == 123);
  CHECK(cfg.restarts == 4);
  CHECK(cfg.out_dir == "runs/demo");
  CHECK(cfg.seed == 77);
  CHECK(cfg.durations.chi_qs ==
        doctest::Approx(2 * kPi * 0.945e6).epsilon(1e-12));
}

TEST_CASE("config validation errors are descriptive") {
  RunConfig cfg;
  cfg.layers = 5;  // spins = 4 needs 3 layers
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = RunConfig{};
  cfg.c_grid = {2.2, 1.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = RunConfig{};
  cfg.mitigation = true;
  cfg.c_grid = {1.0};  // mitigation needs two points
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = RunConfig{};
  cfg.mode = SamplingMode::Shots;
  cfg.shots_total = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sampling": {"mode": "magic"}})"),
                  ConfigError);
}

TEST_CASE("exact command writes the table") {
  RunConfig cfg;
  cfg.spins = 3;
  cfg.layers = 2;
  cfg.j_grid = {0.0, 0.5};
  cfg.out_dir = fresh_dir("exact").string();
  const auto rows = run_exact(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].energy == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "exact.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "manifest.json"));
  const std::string manifest = slurp(fs::path(cfg.out_dir) / "manifest.json");
  CHECK(manifest.find("outputs") != std::string::npos);
  CHECK(manifest.find("exact.csv") != std::string::npos);
}

TEST_CASE("vqe writes a learning curve with mitigated rows") {
  RunConfig cfg = small_vqe_config("vqe");
  const auto out = run_vqe(cfg);
  CHECK(out.curve.size() == 40);
  REQUIRE(out.final_eval.per_c.size() == 2);
  CHECK(out.final_eval.mitigated.has_value());

  const std::string csv = slurp(fs::path(cfg.out_dir) / "learning_curve.csv");
  // Header + 40 iterations x 2 branches x (2 raw + 1 mitigated) + 3 final.
  CHECK(count_lines(csv) == 1 + 40 * 2 * 3 + 3);
  CHECK(csv.rfind("iteration,branch,c,energy,stderr,shots,mitigated_flag", 0) ==
        0);
  CHECK(csv.find("final") != std::string::npos);
}

TEST_CASE("vqe deterministic across runs and worker counts") {
  RunConfig cfg = small_vqe_config("det1");
  run_vqe(cfg);
  const std::string first = slurp(fs::path(cfg.out_dir) / "learning_curve.csv");

  RunConfig repeat = small_vqe_config("det2");
  repeat.workers = 4;
  run_vqe(repeat);
  const std::string second =
      slurp(fs::path(repeat.out_dir) / "learning_curve.csv");
  CHECK(first == second);
}

TEST_CASE("noise-free vqe reaches the two-spin ground energy") {
  RunConfig cfg;
  cfg.spins = 2;
  cfg.layers = 1;
  cfg.j = 0.5;
  cfg.mode = SamplingMode::Exact;
  cfg.mitigation = false;
  cfg.c_grid = {0.0};
  cfg.spsa.iterations = 300;
  cfg.restarts = 8;
  cfg.seed = 7;
  cfg.out_dir = fresh_dir("nf").string();
  const auto out = run_vqe(cfg);
  CHECK(out.final_eval.objective ==
        doctest::Approx(-std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("sweep emits per-restart rows plus the summary") {
  RunConfig cfg;
  cfg.spins = 2;
  cfg.layers = 1;
  cfg.j_grid = {0.5};
  cfg.spsa.iterations = 30;
  cfg.restarts = 2;
  cfg.mode = SamplingMode::Exact;
  cfg.out_dir = fresh_dir("sweep").string();
  cfg.seed = 11;
  const auto out = run_sweep(cfg);
  CHECK(out.rows.size() == 2 * 2);     // restarts x c grid
  CHECK(out.summary.size() == 2);      // c grid
  for (const auto& row : out.summary) CHECK(row.restart == -1);
  CHECK(out.rows[0].exact == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "sweep.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "sweep_summary.csv"));

  // Second run is byte-identical under a different worker count.
  RunConfig again = cfg;
  again.out_dir = fresh_dir("sweep2").string();
  again.workers = 4;
  run_sweep(again);
  CHECK(slurp(fs::path(cfg.out_dir) / "sweep.csv") ==
        slurp(fs::path(again.out_dir) / "sweep.csv"));
}

TEST_CASE("zne study minimum grid") {
  RunConfig cfg;
  cfg.spins = 2;
  cfg.layers = 1;
  cfg.j = 0.5;
  cfg.mode = SamplingMode::Exact;
  cfg.spsa.iterations = 60;
  cfg.restarts = 2;
  cfg.zne_fit_grid = {1.0, 1.5, 2.0};  // three points, degree 2 boundary
  cfg.zne_reference_grid = {0.0};
  cfg.zne_degree = 2;
  cfg.out_dir = fresh_dir("zne").string();
  cfg.seed = 13;
  const auto out = run_zne_study(cfg);
  CHECK(out.points.size() == 4);
  CHECK(out.first_order.order == 1);
  CHECK(out.second_order.order == 2);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "zne_study.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "zne_fits.csv"));
}

TEST_CASE("rate check table") {
  RunConfig cfg;
  cfg.rate_check_ratios = {0.05};
  cfg.out_dir = fresh_dir("rate").string();
  const auto out = run_rate_check(cfg);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].rel_err < 0.05);
  CHECK(out.cascade.rel_err < 0.10);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "rate_check.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "cascade_check.csv"));
}

TEST_CASE("file checksums are stable") {
  const fs::path dir = fresh_dir("sum");
  {
    std::ofstream out(dir / "a.txt", std::ios::binary);
    out << "payload";
  }
  const std::string a = file_checksum((dir / "a.txt").string());
  CHECK(a == file_checksum((dir / "a.txt").string()));
  {
    std::ofstream out(dir / "b.txt", std::ios::binary);
    out << "payload!";
  }
  CHECK(a != file_checksum((dir / "b.txt").string()));
}

TEST_SUITE_END();
