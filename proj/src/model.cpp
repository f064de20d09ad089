#include "seqvqe/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace seqvqe {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd pauli_matrix(Pauli op) {
  Eigen::Matrix2cd m;
  switch (op) {
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, cd(0, -1), cd(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

void validate_term(const PauliTerm& term, int spins) {
  if (term.factors.empty())
    throw std::invalid_argument("PauliTerm: empty factor list");
  if (!std::isfinite(term.coefficient))
    throw std::invalid_argument("PauliTerm: non-finite coefficient");
  int prev = -1;
  for (const auto& f : term.factors) {
    if (f.site <= prev)
      throw std::invalid_argument("PauliTerm: sites must strictly increase");
    if (f.site >= spins)
      throw std::invalid_argument("PauliTerm: site " + std::to_string(f.site) +
                                  " out of range for " +
                                  std::to_string(spins) + " spins");
    prev = f.site;
  }
}

std::vector<std::pair<int, int>> ring_bonds(int spins) {
  if (spins == 2) return {{0, 1}};
  std::vector<std::pair<int, int>> bonds;
  bonds.reserve(spins);
  for (int i = 0; i < spins; ++i) bonds.emplace_back(i, (i + 1) % spins);
  return bonds;
}

IsingModel build_ring_hamiltonian(int spins, double field) {
  if (spins < 2)
    throw std::invalid_argument("build_ring_hamiltonian: need at least 2 spins");
  if (!std::isfinite(field))
    throw std::invalid_argument("build_ring_hamiltonian: non-finite field");
  IsingModel model;
  model.spins = spins;
  model.field = field;
  for (auto [i, j] : ring_bonds(spins)) {
    PauliTerm t;
    t.coefficient = 1.0;
    int lo = std::min(i, j), hi = std::max(i, j);
    t.factors = {{lo, Pauli::Z}, {hi, Pauli::Z}};
    model.terms.push_back(std::move(t));
  }
  for (int i = 0; i < spins; ++i) {
    PauliTerm t;
    t.coefficient = field;
    t.factors = {{i, Pauli::X}};
    model.terms.push_back(std::move(t));
  }
  for (const auto& t : model.terms) validate_term(t, spins);
  return model;
}

Eigen::MatrixXcd term_matrix(const PauliTerm& term, int spins) {
  if (spins < 1 || spins > 14)
    throw std::domain_error("term_matrix: spins must be in [1, 14]");
  validate_term(term, spins);
  // acc (x) factor keeps earlier sites on the more significant bits.
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  std::size_t next = 0;
  for (int site = 0; site < spins; ++site) {
    Eigen::Matrix2cd factor = Eigen::Matrix2cd::Identity();
    if (next < term.factors.size() && term.factors[next].site == site)
      factor = pauli_matrix(term.factors[next++].op);
    Eigen::MatrixXcd grown(acc.rows() * 2, acc.cols() * 2);
    for (int r = 0; r < acc.rows(); ++r)
      for (int c = 0; c < acc.cols(); ++c)
        grown.block(r * 2, c * 2, 2, 2) = acc(r, c) * factor;
    acc = std::move(grown);
  }
  return term.coefficient * acc;
}

Eigen::MatrixXd hamiltonian_matrix(const IsingModel& model) {
  const int m = model.spins;
  if (m < 1 || m > 14)
    throw std::domain_error("hamiltonian_matrix: spins must be in [1, 14]");
  const long dim = 1L << m;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& term : model.terms) {
    validate_term(term, m);
    long xmask = 0;
    long zmask = 0;
    for (const auto& f : term.factors) {
      long bit = 1L << (m - 1 - f.site);  // site 0 = most significant bit
      if (f.op == Pauli::X) xmask |= bit;
      else if (f.op == Pauli::Z) zmask |= bit;
      else
        throw std::invalid_argument(
            "hamiltonian_matrix: Y factors are not supported");
    }
    for (long b = 0; b < dim; ++b) {
      double sign = (std::popcount(static_cast<unsigned long>(b & zmask)) & 1)
                        ? -1.0
                        : 1.0;
      h(b ^ xmask, b) += term.coefficient * sign;
    }
  }
  return h;
}

Spectrum exact_spectrum(const IsingModel& model) {
  const int m = model.spins;
  if (m > 14)
    throw std::domain_error("exact_spectrum: spins > 14 exceeds the dense cap");
  const long dim = 1L << m;
  Eigen::MatrixXd h = hamiltonian_matrix(model);

  // Flip-parity blocks: representatives are the b < ~b half of each
  // {b, flipped(b)} pair; H(b, c) = H(flip b, flip c) makes both blocks
  // symmetric.
  const long mask = dim - 1;
  const long half = dim / 2;
  std::vector<long> reps;
  reps.reserve(half);
  for (long b = 0; b < dim; ++b)
    if (b < (b ^ mask)) reps.push_back(b);
  Eigen::MatrixXd heven(half, half), hodd(half, half);
  for (long p = 0; p < half; ++p) {
    for (long q = 0; q < half; ++q) {
      double direct = h(reps[p], reps[q]);
      double flipped = h(reps[p], reps[q] ^ mask);
      heven(p, q) = direct + flipped;
      hodd(p, q) = direct - flipped;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> even(heven,
                                                      Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> odd(hodd,
                                                     Eigen::EigenvaluesOnly);

  Spectrum spec;
  spec.eigenvalues.reserve(dim);
  for (long i = 0; i < half; ++i) {
    spec.eigenvalues.push_back(even.eigenvalues()(i));
    spec.eigenvalues.push_back(odd.eigenvalues()(i));
  }
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
  spec.ground_energy = spec.eigenvalues.front();
  const double tol = 1e-8 * std::max(1.0, std::abs(spec.ground_energy));
  spec.ground_degeneracy = 0;
  for (double e : spec.eigenvalues) {
    if (e - spec.ground_energy > tol) break;
    ++spec.ground_degeneracy;
  }
  return spec;
}

double classical_ground_energy(int spins) {
  if (spins < 2 || spins > 24)
    throw std::domain_error("classical_ground_energy: spins must be in [2, 24]");
  const auto bonds = ring_bonds(spins);
  const long count = 1L << spins;
  double best = static_cast<double>(bonds.size());
  for (long b = 0; b < count; ++b) {
    int energy = 0;
    for (auto [i, j] : bonds) {
      int si = (b >> i) & 1;
      int sj = (b >> j) & 1;
      energy += (si == sj) ? 1 : -1;
    }
    best = std::min(best, static_cast<double>(energy));
  }
  return best;
}

}  // namespace seqvqe
