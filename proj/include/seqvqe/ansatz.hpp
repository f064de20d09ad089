#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace seqvqe {

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into (-pi, pi].
double canonical_angle(double angle);

// The seven angles of one circuit layer, canonicalized on construction.
// Layout: theta[0..2] transmon rotation Rz(t3)Ry(t2)Rz(t1), theta[3] storage
// pre-phase, theta[4] controlled-phase, theta[5..6] storage post block
// P(t7) H P(t6).
struct LayerParams {
  std::array<double, 7> theta{};

  LayerParams() = default;
  explicit LayerParams(const std::array<double, 7>& raw);
};

enum class Basis : std::uint8_t { Z, X };

// N layers on (storage S, transmon Q) preparing an (N+1)-spin state, plus
// the measurement basis chosen per site. Site i < N is the transmon outcome
// of layer i+1; site N is the decoded storage qubit.
struct AnsatzCircuit {
  int layers = 1;
  std::vector<Basis> bases;  // length layers + 1

  AnsatzCircuit() = default;
  AnsatzCircuit(int n, std::vector<Basis> measurement_bases);
  static AnsatzCircuit uniform(int n, Basis basis);
  int spins() const { return layers + 1; }
};

enum class GateKind { QRot, SPre, CPhase, SPost, BasisH, MeasureReset, Decode };

struct GateEvent {
  GateKind kind = GateKind::QRot;
  double duration = 0.0;           // seconds
  std::array<double, 3> angles{};  // subset used per kind
  int layer = -1;                  // 0-based layer, -1 for the decode tail
  int site = -1;                   // measured site for MeasureReset
};

// Wall-clock durations per gate kind. The s_gate block length applies to the
// storage pre/post blocks and the basis Hadamard; the controlled-phase
// duration follows from its angle and the dispersive coupling chi_qs.
struct GateDurations {
  double q_rot = 40e-9;
  double s_gate = 3e-6;
  double decode = 2e-6;
  double measure_reset = 0.0;
  double chi_qs = 2.0 * kPi * 0.945e6;  // angular frequency

  double cphase(double angle) const;
};

// 2x2 blocks. The joint basis is |s q> with the storage bit first, so a
// 4x4 index reads 2*s + q.
Eigen::Matrix2cd phase_gate(double theta);  // diag(1, e^{i theta})
Eigen::Matrix2cd hadamard();
Eigen::Matrix2cd rot_y(double theta);
Eigen::Matrix2cd rot_z(double theta);
Eigen::Matrix2cd transmon_rotation(double t1, double t2, double t3);
Eigen::Matrix2cd storage_pre(double t4);
Eigen::Matrix2cd storage_post(double t6, double t7);
Eigen::Matrix4cd cphase_gate(double theta);
Eigen::Matrix4cd swap_gate();
Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& s, const Eigen::Matrix2cd& q);

// U(p) = [S_POST(t6,t7) (x) I] . CPHASE(t5) . [S_PRE(t4) (x) K_Q(t1,t2,t3)].
Eigen::Matrix4cd layer_unitary(const LayerParams& p);

// Ideal unitary of a schedule event; identity for MeasureReset.
Eigen::Matrix4cd event_unitary(const GateEvent& e);

// Per layer: QRot, SPre, CPhase, SPost, optional BasisH, MeasureReset; after
// the last layer: Decode, optional BasisH, final MeasureReset.
std::vector<GateEvent> gate_schedule(const AnsatzCircuit& circuit,
                                     const std::vector<LayerParams>& params,
                                     const GateDurations& durations);

// Noise-free deferred-measurement oracle: keeps every transmon copy alive
// instead of measuring it, returning the pure (N+1)-qubit state with site 0
// as the most significant bit. Basis Hadamards are measurement-side and are
// not applied. layers <= 11.
Eigen::VectorXcd statevector_state(const std::vector<LayerParams>& params);

struct FitResult {
  LayerParams params;
  double fidelity = 0.0;
};

// Maximizes |<target| U(p) |0,g>|^2 over one layer by multi-restart
// Nelder-Mead. Deterministic for a given seed; restart searches derive
// independent seeds and are order-independent.
FitResult fit_to_target(const Eigen::Vector4cd& target, int restarts,
                        std::uint64_t seed);

}  // namespace seqvqe
