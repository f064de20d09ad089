#include "seqvqe/noise.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "seqvqe/rng.hpp"

using namespace seqvqe;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = cd(gauss(rng), gauss(rng));
  Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace();
}

GateEvent q_rot_event(double duration) {
  GateEvent e;
  e.kind = GateKind::QRot;
  e.duration = duration;
  return e;
}

}  // namespace

TEST_SUITE_BEGIN("noise");

TEST_CASE("amplitude damping channel") {
  const auto channel = amplitude_damping(24e-6, 24e-6);
  CHECK(channel.completeness_defect() < 1e-12);

  // Decay probability 1 - 1/e at t = T1.
  Eigen::MatrixXcd excited = Eigen::MatrixXcd::Zero(2, 2);
  excited(1, 1) = 1.0;
  const auto after = channel.apply(excited);
  CHECK(after(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(after(0, 0).real() ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

  const auto idle = amplitude_damping(0.0, 24e-6);
  CHECK(idle.operators[0].isApprox(Eigen::MatrixXcd::Identity(2, 2)));
  CHECK(idle.operators[1].cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(amplitude_damping(-1e-9, 24e-6), std::domain_error);
}

TEST_CASE("pure dephasing channel") {
  const double t1 = 24e-6, t2 = 28e-6;
  const double rate = 1.0 / t2 - 0.5 / t1;
  CHECK(rate == doctest::Approx(1.0 / 67.2e-6).epsilon(1e-9));

  std::mt19937_64 rng(5);
  const auto rho = random_density(2, rng);
  const double t = std::log(2.0) / rate;  // off-diagonals halve
  const auto after = pure_dephasing(t, t1, t2).apply(rho);
  CHECK(std::abs(after(0, 1)) ==
        doctest::Approx(0.5 * std::abs(rho(0, 1))).epsilon(1e-12));

  // T2* = 2 T1 is the zero-dephasing boundary.
  const auto boundary = pure_dephasing(1e-6, 24e-6, 48e-6);
  CHECK(boundary.apply(rho).isApprox(rho, 1e-12));

  CHECK_THROWS_AS(pure_dephasing(1e-6, 24e-6, 49e-6), std::invalid_argument);
}

TEST_CASE("gate noise channel composition") {
  NoiseModel model;

  SUBCASE("noise off returns the bare unitary") {
    model.scale = 0.0;
    const auto channel = gate_noise_channel(q_rot_event(40e-9), model);
    REQUIRE(channel.operators.size() == 1);
    CHECK(channel.operators[0].isApprox(Eigen::MatrixXcd::Identity(4, 4)));
  }

  SUBCASE("scaled transmon decay probability") {
    model.scale = 2.2;
    GateEvent e = q_rot_event(1e-6);
    const auto channel = gate_noise_channel(e, model);
    CHECK(channel.completeness_defect() < 1e-12);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(1, 1) = 1.0;  // storage |0>, transmon |e>
    const auto after = channel.apply(rho);
    const double survive = std::exp(-2.2 * 1e-6 / 24e-6);
    CHECK(after(1, 1).real() == doctest::Approx(survive).epsilon(1e-12));
  }

  SUBCASE("kraus completeness for random events") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
      GateEvent e;
      e.kind = GateKind::SPost;
      e.duration = 3e-6;
      e.angles = {uniform_angle(rng), uniform_angle(rng), 0.0};
      model.scale = 1.0 + uniform01(rng);
      const auto channel = gate_noise_channel(e, model);
      CHECK(channel.completeness_defect() < 1e-12);
      const auto rho = random_density(4, rng);
      const auto after = channel.apply(rho);
      CHECK(std::abs(after.trace().real() - 1.0) < 1e-12);
      CHECK((after - after.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(after,
                                                         Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
  }

  SUBCASE("rate-time equivalence on the transmon factors") {
    // Scale c over t must equal scale 1 over c*t for the transmon channel.
    const double t = 0.7e-6, c = 1.9;
    NoiseModel scaled;
    scaled.scale = c;
    NoiseModel stretched;
    stretched.scale = 1.0;
    auto q_factor = [](const NoiseModel& m, double duration) {
      KrausChannel amp = amplitude_damping(m.damping_scale() * duration,
                                           m.rates.t1_q);
      const double rate = m.dephasing_scale() * m.rates.dephasing_rate_q();
      const double q = 1.0 - std::exp(-2.0 * rate * duration);
      Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Identity(2, 2);
      k0(1, 1) = std::sqrt(1.0 - q);
      Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
      k1(1, 1) = std::sqrt(q);
      return compose(KrausChannel{{k0, k1}}, amp);
    };
    const auto ptm_scaled = pauli_transfer_matrix(q_factor(scaled, t));
    const auto ptm_stretched = pauli_transfer_matrix(q_factor(stretched, c * t));
    CHECK((ptm_scaled - ptm_stretched).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("injected rate formula") {
  InjectionConfig cfg{0.1, 1.0, 1.0 / 68e-9};
  const auto result = injected_rate(cfg);
  CHECK(result.rate == doctest::Approx(1.0 / 6.8e-6).epsilon(1e-12));
  CHECK(result.markovian);

  cfg.omega_ef = 0.0;
  CHECK(injected_rate(cfg).rate == 0.0);

  cfg.omega_ef = 1.0;  // hierarchy violated
  CHECK_FALSE(injected_rate(cfg).markovian);
}

TEST_CASE("drive amplitude solving for a target scale") {
  DecoherenceRates rates;
  InjectionConfig cfg{0.0, 2.2059e6, 1.0 / 68e-9};

  // c = 2.2 adds 1.2/T1_q = 1/(20 us).
  const double omega = drive_for_scale(2.2, rates, cfg);
  cfg.omega_ef = omega;
  const auto injected = injected_rate(cfg);
  CHECK(injected.rate == doctest::Approx(1.0 / 20e-6).epsilon(1e-10));

  CHECK(drive_for_scale(1.0, rates, cfg) == 0.0);
  CHECK_THROWS_AS(drive_for_scale(0.9, rates, cfg), std::domain_error);

  // Round trip over a scale grid.
  for (double c : {1.3, 2.2, 4.0}) {
    cfg.omega_ef = drive_for_scale(c, rates, cfg);
    const double back = 1.0 + injected_rate(cfg).rate * rates.t1_q;
    CHECK(back == doctest::Approx(c).epsilon(1e-10));
  }
}

TEST_CASE("transient level elimination rates") {
  TransientLevelConfig cfg;
  cfg.gamma = 1.0;

  cfg.omega = 0.05;
  const auto mid = simulate_transient_decay(cfg);
  const double g1_closed = 4 * 0.05 * 0.05 / (4 * 0.05 * 0.05 + 1.0);
  const double g2_closed = 2 * 0.05 * 0.05;
  CHECK(std::abs(mid.gamma1 - g1_closed) / g1_closed < 0.05);
  CHECK(std::abs(mid.gamma2 - g2_closed) / g2_closed < 0.05);

  cfg.omega = 0.5;  // closed form gives gamma/2 exactly at omega = gamma/2
  const double exact_half = 4 * 0.25 / (4 * 0.25 + 1.0);
  CHECK(exact_half == doctest::Approx(0.5));

  // Error shrinks toward the weak-drive limit.
  cfg.omega = 0.02;
  const auto weak = simulate_transient_decay(cfg);
  const double g1_weak = 4 * 0.02 * 0.02 / (4 * 0.02 * 0.02 + 1.0);
  const double rel_weak = std::abs(weak.gamma1 - g1_weak) / g1_weak;
  cfg.omega = 0.1;
  const auto strong = simulate_transient_decay(cfg);
  const double g1_strong = 4 * 0.1 * 0.1 / (4 * 0.1 * 0.1 + 1.0);
  const double rel_strong = std::abs(strong.gamma1 - g1_strong) / g1_strong;
  CHECK(rel_weak < rel_strong);

  // Coherence decays at half the population rate in the weak-drive limit.
  cfg.omega = 0.02;
  const auto ratio_check = simulate_transient_decay(cfg);
  CHECK(ratio_check.gamma2 / ratio_check.gamma1 ==
        doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("pauli transfer fidelity") {
  // Identity channel against itself.
  const Eigen::MatrixXcd eye2 = Eigen::MatrixXcd::Identity(2, 2);
  CHECK(pauli_transfer_fidelity(unitary_channel(eye2), eye2) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Fully depolarizing single qubit: PTM diag(1,0,0,0), overlap 1/4.
  KrausChannel depolarizing;
  Eigen::MatrixXcd x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cd(0, -1), cd(0, 1), 0;
  z << 1, 0, 0, -1;
  depolarizing.operators = {0.5 * eye2, 0.5 * x, 0.5 * y, 0.5 * z};
  CHECK(pauli_transfer_fidelity(depolarizing, eye2) ==
        doctest::Approx(0.25).epsilon(1e-12));

  // Noisy identity degrades monotonically with the injection scale.
  double previous = 1.0;
  for (double c : {1.0, 1.5, 2.2}) {
    NoiseModel model;
    model.scale = c;
    const auto channel = gate_noise_channel(q_rot_event(40e-9), model);
    const double fidelity =
        pauli_transfer_fidelity(channel, Eigen::MatrixXcd::Identity(4, 4));
    CHECK(fidelity < previous);
    previous = fidelity;
  }

  CHECK_THROWS_AS(pauli_transfer_fidelity(depolarizing,
                                          Eigen::MatrixXcd::Identity(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("decoherence rate validation") {
  DecoherenceRates rates;
  CHECK_NOTHROW(rates.validate());
  rates.t2star_q = 50e-6;  // above 2 T1
  CHECK_THROWS_AS(rates.validate(), std::invalid_argument);
}

TEST_SUITE_END();
