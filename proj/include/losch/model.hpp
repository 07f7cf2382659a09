#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "losch/statevector.hpp"

namespace losch {

// Coefficients are folded into the matrix. Two-site terms use the same
// local basis convention as LocalGate.
struct LocalTerm {
  std::vector<int> sites;
  Eigen::MatrixXcd matrix;
  std::string group;
};

struct TfimParams {
  double J = 1.0;
  double g = 0.5;
};

struct HamiltonianSpec {
  int n_sites = 0;
  std::vector<LocalTerm> terms;
  // Set by tfim(); enables the closed-form imaginary-time plan.
  std::optional<TfimParams> tfim;

  void validate() const;
  bool is_real() const;
};

inline constexpr int kOracleMaxSites = 12;

// H = -J sum S^z S^z + g sum S^x with S = sigma/2, open chain.
HamiltonianSpec tfim(int n_sites, double J, double g);

Eigen::MatrixXcd dense_matrix(const HamiltonianSpec& spec);

// Energy of ψ term by term; works at any N.
double expectation(const HamiltonianSpec& spec, const StateVector& state);
double term_expectation(const LocalTerm& term, const StateVector& state);

// Exact diagonalization of the dense Hamiltonian, reused across calls.
class DenseOracle {
 public:
  explicit DenseOracle(const HamiltonianSpec& spec);

  int n_sites() const noexcept { return n_; }
  const Eigen::VectorXd& energies() const noexcept { return energies_; }
  const Eigen::MatrixXcd& eigenvectors() const noexcept { return vectors_; }
  double ground_energy() const { return energies_(0); }

  // Coefficients of the state in the eigenbasis.
  Eigen::VectorXcd coefficients(const StateVector& state) const;

  // <bra| exp(-i H z) |ket> for complex z = t - i beta.
  cplx amplitude(const StateVector& bra, const StateVector& ket, cplx z) const;

  // exp(-i H z)|ket>, unnormalized for complex z.
  StateVector evolve(const StateVector& ket, cplx z) const;

  // ||exp(beta H)|ket>||.
  double imaginary_norm(const StateVector& ket, double beta) const;

 private:
  int n_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd vectors_;
};

cplx exact_amplitude(const HamiltonianSpec& spec, const StateVector& psi_final,
                     const StateVector& psi_init, cplx z);

}  // namespace losch
