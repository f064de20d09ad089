#pragma once

#include <Eigen/Dense>
#include <vector>

namespace seqvqe {

enum class Pauli { X, Y, Z };

struct PauliFactor {
  int site = 0;
  Pauli op = Pauli::Z;
};

// Weighted Pauli string. Factors carry strictly increasing site indices and
// the list is never empty.
struct PauliTerm {
  double coefficient = 0.0;
  std::vector<PauliFactor> factors;
};

// Circular transverse-field Ising Hamiltonian
//   H = sum_<ij> Z_i Z_j + J sum_i X_i
// on M = spins sites. For M >= 3 the ring has M bonds; for M = 2 the single
// physical bond <0,1> is counted once.
struct IsingModel {
  int spins = 0;
  double field = 0.0;
  std::vector<PauliTerm> terms;  // bonds (0,1)..(M-1,0) first, then X by site
};

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  double ground_energy = 0.0;
  int ground_degeneracy = 0;
};

// Throws std::invalid_argument when the term violates its invariants.
void validate_term(const PauliTerm& term, int spins);

// Throws std::invalid_argument for spins < 2.
IsingModel build_ring_hamiltonian(int spins, double field);

// Ring bond list used by the model builder and the classical oracle:
// (0,1), (1,2), ..., (M-1,0); a single pair for M = 2.
std::vector<std::pair<int, int>> ring_bonds(int spins);

// 2^M x 2^M matrix of a Pauli string, identity on absent sites. Site 0 is
// the most significant bit of the basis index. spins <= 14.
Eigen::MatrixXcd term_matrix(const PauliTerm& term, int spins);

// Real symmetric matrix of an {X,Z}-only model. Y factors are rejected.
Eigen::MatrixXd hamiltonian_matrix(const IsingModel& model);

// Full spectrum by dense symmetric diagonalization, spins <= 14. The model
// commutes with the global spin flip, so the matrix is split into the two
// flip-parity blocks before solving; both blocks stay dense.
Spectrum exact_spectrum(const IsingModel& model);

// Minimum of sum_bonds s_i s_j over all 2^M classical assignments by
// exhaustive enumeration. spins <= 24.
double classical_ground_energy(int spins);

}  // namespace seqvqe
