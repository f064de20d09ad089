#include "seqvqe/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "seqvqe/parallel.hpp"
#include "seqvqe/rng.hpp"

namespace seqvqe {

namespace {

using cd = std::complex<double>;
using Superop = Eigen::Matrix<cd, 16, 16>;
using Vec16 = Eigen::Matrix<cd, 16, 1>;

constexpr long kShotBlock = 512;

// Column-major vectorization: vec(rho)[c*4+r] = rho(r,c).
Vec16 vectorize(const Eigen::Matrix4cd& rho) {
  Vec16 v;
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) v(c * 4 + r) = rho(r, c);
  return v;
}

Eigen::Matrix4cd unvectorize(const Vec16& v) {
  Eigen::Matrix4cd rho;
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) rho(r, c) = v(c * 4 + r);
  return rho;
}

// vec(K rho K^dag) = (conj(K) (x) K) vec(rho).
Superop channel_superop(const KrausChannel& channel) {
  Superop s = Superop::Zero();
  for (const auto& op : channel.operators) {
    const Eigen::Matrix4cd k = op;
    const Eigen::Matrix4cd kc = op.conjugate();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        s.block<4, 4>(4 * a, 4 * b) += kc(a, b) * k;
  }
  return s;
}

Superop map_superop(const std::function<Eigen::Matrix4cd(const Eigen::Matrix4cd&)>& map) {
  Superop s;
  for (int c = 0; c < 4; ++c) {
    for (int r = 0; r < 4; ++r) {
      Eigen::Matrix4cd basis = Eigen::Matrix4cd::Zero();
      basis(r, c) = 1.0;
      s.col(c * 4 + r) = vectorize(map(basis));
    }
  }
  return s;
}

struct Step {
  bool measure = false;
  Superop op = Superop::Zero();  // gate step
  int site = -1;                 // measure step
  double duration = 0.0;
};

// Schedule compiled to superoperators plus the measurement/reset maps.
struct PreparedCircuit {
  std::vector<Step> steps;
  int spins = 0;
  // Projective-measurement maps: rho -> <o|rho|o>_Q (x) reset_state.
  Superop reset0 = Superop::Zero();
  Superop reset1 = Superop::Zero();
  Superop trace_reset = Superop::Zero();   // reset0 + reset1
  Superop weight_reset = Superop::Zero();  // reset0 - reset1
  Vec16 initial = Vec16::Zero();
};

PreparedCircuit prepare(const AnsatzCircuit& circuit,
                        const std::vector<LayerParams>& params,
                        const NoiseModel& model) {
  PreparedCircuit prepared;
  prepared.spins = circuit.spins();

  const double thermal = model.noiseless() ? 0.0 : model.rates.thermal_q;
  Eigen::Matrix2cd reset_state = Eigen::Matrix2cd::Zero();
  reset_state(0, 0) = 1.0 - thermal;
  reset_state(1, 1) = thermal;

  for (int outcome = 0; outcome < 2; ++outcome) {
    auto map = [&](const Eigen::Matrix4cd& rho) {
      Eigen::Matrix2cd conditional;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          conditional(s1, s2) = rho(2 * s1 + outcome, 2 * s2 + outcome);
      Eigen::Matrix4cd out;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          out.block<2, 2>(2 * s1, 2 * s2) = conditional(s1, s2) * reset_state;
      return out;
    };
    (outcome == 0 ? prepared.reset0 : prepared.reset1) = map_superop(map);
  }
  prepared.trace_reset = prepared.reset0 + prepared.reset1;
  prepared.weight_reset = prepared.reset0 - prepared.reset1;

  Eigen::Matrix4cd rho0 = Eigen::Matrix4cd::Zero();
  rho0.block<2, 2>(0, 0) = reset_state;  // storage in |0>, transmon thermal
  prepared.initial = vectorize(rho0);

  for (const auto& event :
       gate_schedule(circuit, params, model.durations)) {
    Step step;
    if (event.kind == GateKind::MeasureReset) {
      step.measure = true;
      step.site = event.site;
    } else {
      step.op = channel_superop(gate_noise_channel(event, model));
      step.duration = event.duration;
    }
    prepared.steps.push_back(std::move(step));
  }
  return prepared;
}

void check_term_support(const AnsatzCircuit& circuit, const PauliTerm& term) {
  validate_term(term, circuit.spins());
  for (const auto& f : term.factors) {
    if (f.op == Pauli::Y)
      throw std::invalid_argument("contract_expectation: Y basis unsupported");
    const Basis needed = f.op == Pauli::X ? Basis::X : Basis::Z;
    if (circuit.bases[f.site] != needed)
      throw std::invalid_argument(
          "contract_expectation: circuit bases incompatible with term");
  }
}

double trace_of(const Vec16& v) {
  return (v(0) + v(5) + v(10) + v(15)).real();
}

}  // namespace

void JointState::check(double hermitian_tol, double psd_tol) const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol)
    throw std::runtime_error("JointState: not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > hermitian_tol ||
      std::abs(rho.trace().imag()) > hermitian_tol)
    throw std::runtime_error("JointState: trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -psd_tol)
    throw std::runtime_error("JointState: negative eigenvalue");
}

double contract_expectation(const AnsatzCircuit& circuit,
                            const std::vector<LayerParams>& params,
                            const NoiseModel& model, const PauliTerm& term,
                            bool validate_states) {
  check_term_support(circuit, term);
  const auto prepared = prepare(circuit, params, model);

  std::uint32_t support = 0;
  for (const auto& f : term.factors) support |= 1u << f.site;

  Vec16 state = prepared.initial;
  bool weighted = false;  // past the first Z insertion the carrier is signed
  for (const auto& step : prepared.steps) {
    if (step.measure) {
      const bool in_support = (support >> step.site) & 1u;
      state = in_support ? Vec16(prepared.weight_reset * state)
                         : Vec16(prepared.trace_reset * state);
      weighted = weighted || in_support;
    } else {
      const double trace_before = trace_of(state);
      state = step.op * state;
      if (validate_states) {
        if (std::abs(trace_of(state) - trace_before) > 1e-10)
          throw std::runtime_error("contract_expectation: trace drift");
        if (!weighted && std::abs(trace_before - 1.0) < 1e-9) {
          JointState joint{unvectorize(state)};
          joint.check();
        }
      }
    }
  }
  return trace_of(state);
}

EnergyEstimate estimate_energy_exact(const AnsatzCircuit& circuit,
                                     const std::vector<LayerParams>& params,
                                     const NoiseModel& model,
                                     const IsingModel& ising) {
  if (circuit.spins() != ising.spins)
    throw std::invalid_argument("estimate_energy_exact: circuit/model size mismatch");
  const auto all_z = AnsatzCircuit::uniform(circuit.layers, Basis::Z);
  const auto all_x = AnsatzCircuit::uniform(circuit.layers, Basis::X);
  double mean = 0.0;
  for (const auto& term : ising.terms) {
    bool has_x = false;
    for (const auto& f : term.factors) has_x = has_x || f.op == Pauli::X;
    PauliTerm unit = term;
    unit.coefficient = 1.0;
    mean += term.coefficient *
            contract_expectation(has_x ? all_x : all_z, params, model, unit);
  }
  return {mean, 0.0, 0, EstimateMode::Exact};
}

std::vector<std::uint32_t> sample_bitstrings(
    const AnsatzCircuit& circuit, const std::vector<LayerParams>& params,
    const NoiseModel& model, const MeasurementSetting& setting, long shots,
    std::uint64_t seed, int workers) {
  if (shots < 1)
    throw std::invalid_argument("sample_bitstrings: shots must be >= 1");
  if (static_cast<int>(setting.size()) != circuit.spins())
    throw std::invalid_argument("sample_bitstrings: setting length mismatch");

  const AnsatzCircuit measured(circuit.layers, setting);
  const auto prepared = prepare(measured, params, model);

  const long blocks = (shots + kShotBlock - 1) / kShotBlock;
  std::vector<std::uint32_t> outcomes(shots, 0);

  parallel_for(static_cast<int>(blocks), workers, [&](int block) {
    std::mt19937_64 rng(mix64(seed, 0x5b0c5ULL, static_cast<std::uint64_t>(block)));
    const long begin = block * kShotBlock;
    const long end = std::min(shots, begin + kShotBlock);
    for (long shot = begin; shot < end; ++shot) {
      Vec16 state = prepared.initial;
      std::uint32_t bits = 0;
      for (const auto& step : prepared.steps) {
        if (!step.measure) {
          state = step.op * state;
          continue;
        }
        // P(e) from the transmon-diagonal entries (1,1) and (3,3).
        const double p1 = (state(5) + state(15)).real();
        const int outcome = uniform01(rng) < p1 ? 1 : 0;
        state = outcome ? Vec16(prepared.reset1 * state)
                        : Vec16(prepared.reset0 * state);
        const double norm = trace_of(state);
        state /= norm;
        bits |= static_cast<std::uint32_t>(outcome) << step.site;
      }
      outcomes[shot] = bits;
    }
  });
  return outcomes;
}

EnergyEstimate estimate_energy_sampled(const AnsatzCircuit& circuit,
                                       const std::vector<LayerParams>& params,
                                       const NoiseModel& model,
                                       const IsingModel& ising,
                                       long shots_total, std::uint64_t seed,
                                       int workers, double z_fraction) {
  if (shots_total < 2)
    throw std::invalid_argument("estimate_energy_sampled: shots_total must be >= 2");
  if (z_fraction <= 0.0 || z_fraction >= 1.0)
    throw std::invalid_argument("estimate_energy_sampled: z_fraction must be in (0, 1)");
  if (circuit.spins() != ising.spins)
    throw std::invalid_argument("estimate_energy_sampled: size mismatch");

  const long shots_z = std::max(1L, static_cast<long>(shots_total * z_fraction));
  const long shots_x = std::max(1L, shots_total - shots_z);

  struct TermMask {
    double coefficient;
    std::uint32_t mask;
  };
  std::vector<TermMask> z_terms, x_terms;
  for (const auto& term : ising.terms) {
    std::uint32_t mask = 0;
    bool has_x = false, has_z = false;
    for (const auto& f : term.factors) {
      mask |= 1u << f.site;
      has_x = has_x || f.op == Pauli::X;
      has_z = has_z || f.op == Pauli::Z;
      if (f.op == Pauli::Y)
        throw std::invalid_argument("estimate_energy_sampled: Y unsupported");
    }
    if (has_x && has_z)
      throw std::invalid_argument(
          "estimate_energy_sampled: mixed X/Z terms need a dedicated setting");
    (has_x ? x_terms : z_terms).push_back({term.coefficient, mask});
  }

  auto accumulate = [&](const std::vector<TermMask>& terms, Basis basis,
                        long shots, std::uint64_t stream)
      -> std::pair<double, double> {  // mean and variance-of-mean
    if (terms.empty()) return {0.0, 0.0};
    const MeasurementSetting setting(ising.spins, basis);
    const auto bits = sample_bitstrings(circuit, params, model, setting, shots,
                                        mix64(seed, stream), workers);
    double sum = 0.0, sumsq = 0.0;
    for (const auto b : bits) {
      double value = 0.0;
      for (const auto& t : terms) {
        const int parity = std::popcount(b & t.mask) & 1;
        value += t.coefficient * (parity ? -1.0 : 1.0);
      }
      sum += value;
      sumsq += value * value;
    }
    const double n = static_cast<double>(shots);
    const double mean = sum / n;
    double variance = 0.0;
    if (shots > 1) {
      variance = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0)) / n;
    }
    return {mean, variance};
  };

  const auto [mean_z, var_z] = accumulate(z_terms, Basis::Z, shots_z, 1);
  const auto [mean_x, var_x] = accumulate(x_terms, Basis::X, shots_x, 2);
  EnergyEstimate est;
  est.mean = mean_z + mean_x;
  est.std_err = std::sqrt(var_z + var_x);
  est.shots = shots_total;
  est.mode = EstimateMode::Sampled;
  return est;
}

}  // namespace seqvqe
