#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "seqvqe/ansatz.hpp"

namespace seqvqe {

// Device coherence parameters. Defaults are the measured transmon/storage
// values this simulator is calibrated around.
struct DecoherenceRates {
  double t1_q = 24e-6;
  double t2star_q = 28e-6;
  double t1_s = 740e-6;
  double t2star_s = 510e-6;
  double thermal_q = 0.0;  // residual excited population after reset

  void validate() const;
  double dephasing_rate_q() const;  // 1/T2* - 1/(2 T1)
  double dephasing_rate_s() const;
};

// Noise scaling model. `scale` is the injection factor c: it multiplies the
// transmon damping and dephasing rates and leaves the storage cavity
// untouched; c = 0 is the noise-off switch that disables every channel,
// storage included. The ratio knobs allow c to act asymmetrically.
struct NoiseModel {
  DecoherenceRates rates{};
  double scale = 1.0;
  double damping_ratio = 1.0;
  double dephasing_ratio = 1.0;
  GateDurations durations{};

  bool noiseless() const { return scale == 0.0; }
  double damping_scale() const { return scale * damping_ratio; }
  double dephasing_scale() const { return scale * dephasing_ratio; }
  void validate() const;
};

// Operator-sum representation of a CPTP map.
struct KrausChannel {
  std::vector<Eigen::MatrixXcd> operators;

  long dim() const { return operators.empty() ? 0 : operators.front().rows(); }
  // || sum K^dag K - I ||_max
  double completeness_defect() const;
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};

KrausChannel unitary_channel(const Eigen::MatrixXcd& u);
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);
KrausChannel tensor(const KrausChannel& s_part, const KrausChannel& q_part);

// Single-qubit amplitude damping over time t, decay probability
// p = 1 - exp(-t/t1). t < 0 is a domain error.
KrausChannel amplitude_damping(double t, double t1);

// Single-qubit phase damping with rate 1/t2star - 1/(2 t1); rejects
// t2star > 2 t1.
KrausChannel pure_dephasing(double t, double t1, double t2star);

// Full channel of one schedule event on S (x) Q: the ideal unitary followed
// by per-subsystem damping and dephasing over the event duration. The
// transmon rates carry the scale factors; storage rates never do. For
// model.noiseless() the channel is the bare unitary.
KrausChannel gate_noise_channel(const GateEvent& event, const NoiseModel& model);

// Engineered relaxation channel parameters: weak e->f drive, strong
// f0-g1 pump, readout decay.
struct InjectionConfig {
  double omega_ef = 0.0;
  double omega_f0g1 = 0.0;
  double gamma_r = 0.0;
};

struct InjectedRate {
  double rate = 0.0;
  bool markovian = false;  // omega_ef << omega_f0g1 << gamma_r hierarchy
};

// (omega_ef / omega_f0g1)^2 * gamma_r plus the hierarchy validity flag.
InjectedRate injected_rate(const InjectionConfig& cfg);

// Solves c = 1 + added_rate * t1_q for the e->f drive amplitude at fixed
// pump and readout rates. c < 1 is a domain error.
double drive_for_scale(double c_target, const DecoherenceRates& rates,
                       const InjectionConfig& cfg);

// Three-level decay model: coherent drive omega between e and a transient
// level that decays to g at rate gamma.
struct TransientLevelConfig {
  double omega = 0.0;
  double gamma = 0.0;
  double dt = 0.0;              // 0: min(1/gamma, 1/omega) / 50
  double window_low = 0.5;      // fit window in units of the expected decay
  double window_high = 3.0;
  double residual_tol = 0.05;   // max RMS log-residual of the fit
};

struct TransientRates {
  double gamma1 = 0.0;  // fitted population decay
  double gamma2 = 0.0;  // fitted coherence decay
};

struct FitQualityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integrates the three-level Lindblad dynamics and fits single exponentials
// to the population and coherence decays. Throws FitQualityError when the
// log-linear fit residual exceeds the threshold.
TransientRates simulate_transient_decay(const TransientLevelConfig& cfg);

// Four-level cascade g0, e0, f0, g1 with both drives and the readout decay;
// returns the fitted e0 population decay rate.
double cascade_damping_rate(const InjectionConfig& cfg);

// Pauli transfer matrix R_ij = Tr(P_i L(P_j)) / d over the n-qubit Pauli
// basis in lexicographic order.
Eigen::MatrixXd pauli_transfer_matrix(const KrausChannel& channel);

// Tr(R_ideal^T R_actual) / d^2.
double pauli_transfer_fidelity(const KrausChannel& actual,
                               const Eigen::MatrixXcd& ideal_unitary);

}  // namespace seqvqe
