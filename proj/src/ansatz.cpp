#include "seqvqe/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "seqvqe/nelder_mead.hpp"
#include "seqvqe/rng.hpp"

namespace seqvqe {

namespace {
using cd = std::complex<double>;
}

double canonical_angle(double angle) {
  if (!std::isfinite(angle))
    throw std::invalid_argument("canonical_angle: non-finite angle");
  double a = std::remainder(angle, 2.0 * kPi);  // lands in [-pi, pi]
  if (a <= -kPi) a = kPi;
  return a;
}

LayerParams::LayerParams(const std::array<double, 7>& raw) {
  for (std::size_t i = 0; i < raw.size(); ++i)
    theta[i] = canonical_angle(raw[i]);
}

AnsatzCircuit::AnsatzCircuit(int n, std::vector<Basis> measurement_bases)
    : layers(n), bases(std::move(measurement_bases)) {
  if (layers < 1)
    throw std::invalid_argument("AnsatzCircuit: need at least one layer");
  if (static_cast<int>(bases.size()) != layers + 1)
    throw std::invalid_argument("AnsatzCircuit: bases length must be layers+1");
}

AnsatzCircuit AnsatzCircuit::uniform(int n, Basis basis) {
  return AnsatzCircuit(n, std::vector<Basis>(n + 1, basis));
}

double GateDurations::cphase(double angle) const {
  return std::abs(canonical_angle(angle)) / chi_qs;
}

Eigen::Matrix2cd phase_gate(double theta) {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, std::exp(cd(0, theta));
  return m;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

Eigen::Matrix2cd rot_y(double theta) {
  Eigen::Matrix2cd m;
  m << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2),
      std::cos(theta / 2);
  return m;
}

Eigen::Matrix2cd rot_z(double theta) {
  Eigen::Matrix2cd m;
  m << std::exp(cd(0, -theta / 2)), 0, 0, std::exp(cd(0, theta / 2));
  return m;
}

Eigen::Matrix2cd transmon_rotation(double t1, double t2, double t3) {
  return rot_z(t3) * rot_y(t2) * rot_z(t1);
}

Eigen::Matrix2cd storage_pre(double t4) { return phase_gate(t4) * hadamard(); }

Eigen::Matrix2cd storage_post(double t6, double t7) {
  return phase_gate(t7) * hadamard() * phase_gate(t6);
}

Eigen::Matrix4cd cphase_gate(double theta) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(3, 3) = std::exp(cd(0, theta));
  return m;
}

Eigen::Matrix4cd swap_gate() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(3, 3) = 1;
  m(1, 2) = m(2, 1) = 1;
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& s, const Eigen::Matrix2cd& q) {
  Eigen::Matrix4cd r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.block<2, 2>(2 * i, 2 * j) = s(i, j) * q;
  return r;
}

Eigen::Matrix4cd layer_unitary(const LayerParams& p) {
  const auto& t = p.theta;
  return kron2(storage_post(t[5], t[6]), Eigen::Matrix2cd::Identity()) *
         cphase_gate(t[4]) *
         kron2(storage_pre(t[3]), transmon_rotation(t[0], t[1], t[2]));
}

Eigen::Matrix4cd event_unitary(const GateEvent& e) {
  switch (e.kind) {
    case GateKind::QRot:
      return kron2(Eigen::Matrix2cd::Identity(),
                   transmon_rotation(e.angles[0], e.angles[1], e.angles[2]));
    case GateKind::SPre:
      return kron2(storage_pre(e.angles[0]), Eigen::Matrix2cd::Identity());
    case GateKind::CPhase:
      return cphase_gate(e.angles[0]);
    case GateKind::SPost:
      return kron2(storage_post(e.angles[0], e.angles[1]),
                   Eigen::Matrix2cd::Identity());
    case GateKind::BasisH:
      return kron2(Eigen::Matrix2cd::Identity(), hadamard());
    case GateKind::Decode:
      return swap_gate();
    case GateKind::MeasureReset:
      return Eigen::Matrix4cd::Identity();
  }
  return Eigen::Matrix4cd::Identity();
}

std::vector<GateEvent> gate_schedule(const AnsatzCircuit& circuit,
                                     const std::vector<LayerParams>& params,
                                     const GateDurations& durations) {
  if (static_cast<int>(params.size()) != circuit.layers)
    throw std::invalid_argument("gate_schedule: params length != layers");
  std::vector<GateEvent> events;
  events.reserve(6 * circuit.layers + 3);
  for (int l = 0; l < circuit.layers; ++l) {
    const auto& t = params[l].theta;
    events.push_back(
        {GateKind::QRot, durations.q_rot, {t[0], t[1], t[2]}, l, -1});
    events.push_back({GateKind::SPre, durations.s_gate, {t[3], 0, 0}, l, -1});
    events.push_back(
        {GateKind::CPhase, durations.cphase(t[4]), {t[4], 0, 0}, l, -1});
    events.push_back(
        {GateKind::SPost, durations.s_gate, {t[5], t[6], 0}, l, -1});
    if (circuit.bases[l] == Basis::X)
      events.push_back({GateKind::BasisH, durations.s_gate, {}, l, -1});
    events.push_back(
        {GateKind::MeasureReset, durations.measure_reset, {}, l, l});
  }
  events.push_back({GateKind::Decode, durations.decode, {}, -1, -1});
  if (circuit.bases[circuit.layers] == Basis::X)
    events.push_back({GateKind::BasisH, durations.s_gate, {}, -1, -1});
  events.push_back({GateKind::MeasureReset, durations.measure_reset, {}, -1,
                    circuit.layers});
  return events;
}

Eigen::VectorXcd statevector_state(const std::vector<LayerParams>& params) {
  const int layers = static_cast<int>(params.size());
  if (layers < 1)
    throw std::invalid_argument("statevector_state: need at least one layer");
  if (layers > 11)
    throw std::domain_error("statevector_state: layers > 11 exceeds the cap");

  // Working register [S, q1, ..., qk] with S as the most significant bit;
  // a fresh |0> transmon copy is appended at the least significant end for
  // each layer.
  Eigen::VectorXcd psi(2);
  psi << 1, 0;
  for (int l = 0; l < layers; ++l) {
    const long dim = psi.size();
    Eigen::VectorXcd grown = Eigen::VectorXcd::Zero(2 * dim);
    for (long i = 0; i < dim; ++i) grown(2 * i) = psi(i);
    const long total = 2 * dim;
    const long smask = total / 2;
    const Eigen::Matrix4cd u = layer_unitary(params[l]);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(total);
    for (long idx = 0; idx < total; ++idx) {
      const int s = (idx & smask) ? 1 : 0;
      const int q = static_cast<int>(idx & 1);
      const long rest = idx & ~(smask | 1);
      const int row = 2 * s + q;
      for (int col = 0; col < 4; ++col) {
        const long src = rest | ((col >> 1) ? smask : 0) | (col & 1);
        out(idx) += u(row, col) * grown(src);
      }
    }
    psi = std::move(out);
  }

  // Decode-as-swap relabels S as the last site.
  const long total = psi.size();
  const long smask = total / 2;
  Eigen::VectorXcd out(total);
  for (long idx = 0; idx < total; ++idx) {
    const long s = (idx & smask) ? 1 : 0;
    const long rest = idx & ~smask;
    out(rest * 2 + s) = psi(idx);
  }
  return out;
}

FitResult fit_to_target(const Eigen::Vector4cd& target, int restarts,
                        std::uint64_t seed) {
  if (restarts < 1)
    throw std::invalid_argument("fit_to_target: need at least one restart");
  if (std::abs(target.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("fit_to_target: target must be normalized");

  auto infidelity = [&](const std::vector<double>& x) {
    std::array<double, 7> raw;
    std::copy(x.begin(), x.end(), raw.begin());
    const Eigen::Matrix4cd u = layer_unitary(LayerParams(raw));
    // |0,g> is the first column.
    const cd overlap = target.adjoint() * u.col(0);
    return 1.0 - std::norm(overlap);
  };

  NelderMeadOptions options;
  options.max_iterations = 2500;
  options.target_value = 1e-10;

  FitResult best;
  best.fidelity = -1.0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x0(7, 0.0);
    if (r > 0) {
      std::mt19937_64 rng(mix64(seed, static_cast<std::uint64_t>(r)));
      for (auto& v : x0) v = uniform_angle(rng);
    }
    const auto result = nelder_mead(infidelity, std::move(x0), options);
    const double fidelity = 1.0 - result.value;
    if (fidelity > best.fidelity) {
      std::array<double, 7> raw;
      std::copy(result.x.begin(), result.x.end(), raw.begin());
      best.params = LayerParams(raw);
      best.fidelity = std::clamp(fidelity, 0.0, 1.0);
    }
    if (best.fidelity >= 1.0 - 1e-9) break;
  }
  return best;
}

}  // namespace seqvqe
