#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "seqvqe/ansatz.hpp"
#include "seqvqe/model.hpp"
#include "seqvqe/noise.hpp"

namespace seqvqe {

// Joint density matrix of (storage, transmon), basis |s q>.
struct JointState {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();

  // Hermiticity/trace/positivity; throws std::runtime_error on violation.
  void check(double hermitian_tol = 1e-12, double psd_tol = 1e-10) const;
};

using MeasurementSetting = std::vector<Basis>;

enum class EstimateMode { Exact, Sampled };

struct EnergyEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  long shots = 0;
  EstimateMode mode = EstimateMode::Exact;
};

// Exact expectation of the +-1 outcome product for one Pauli term, obtained
// by threading the 4x4 joint state through the schedule and folding a Z
// weight into each measurement on the term's support. The term may contain
// only Z and X factors and its X sites must be scheduled with a basis
// Hadamard. `validate_states` re-checks the JointState invariants after
// every channel application.
double contract_expectation(const AnsatzCircuit& circuit,
                            const std::vector<LayerParams>& params,
                            const NoiseModel& model, const PauliTerm& term,
                            bool validate_states = false);

// Term-wise contraction of the full Hamiltonian: all-Z passes for the Z
// strings, all-X passes for the X terms.
EnergyEstimate estimate_energy_exact(const AnsatzCircuit& circuit,
                                     const std::vector<LayerParams>& params,
                                     const NoiseModel& model,
                                     const IsingModel& ising);

// Monte-Carlo measurement record. Each entry packs one shot, site i at bit
// i, bit value 1 for the |e> outcome. The chosen setting overrides the
// circuit's stored bases. Shots are drawn in fixed 512-shot blocks with
// per-block RNG streams, so results are identical for any worker count.
std::vector<std::uint32_t> sample_bitstrings(
    const AnsatzCircuit& circuit, const std::vector<LayerParams>& params,
    const NoiseModel& model, const MeasurementSetting& setting, long shots,
    std::uint64_t seed, int workers = 1);

// Sampled energy: an all-Z settings block estimates every ZZ term and an
// all-X block every X term; shared-shot covariance enters through the
// per-shot Hamiltonian samples.
EnergyEstimate estimate_energy_sampled(const AnsatzCircuit& circuit,
                                       const std::vector<LayerParams>& params,
                                       const NoiseModel& model,
                                       const IsingModel& ising,
                                       long shots_total, std::uint64_t seed,
                                       int workers = 1,
                                       double z_fraction = 0.5);

}  // namespace seqvqe
