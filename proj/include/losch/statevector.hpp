#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace losch {

using cplx = std::complex<double>;
using SiteState = std::array<cplx, 2>;

// Raised for numerical breakdowns (zero regions, mitigation blow-up, ...).
// Argument/precondition failures use std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense N-qubit state. Qubit q is bit q of the amplitude index, so qubit 0
// is the least significant bit.
class StateVector {
 public:
  explicit StateVector(int n_qubits);
  StateVector(int n_qubits, std::vector<cplx> amplitudes);

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return amp_.size(); }

  const std::vector<cplx>& amplitudes() const noexcept { return amp_; }
  std::vector<cplx>& amplitudes() noexcept { return amp_; }

  cplx operator[](std::size_t i) const { return amp_[i]; }
  cplx& operator[](std::size_t i) { return amp_[i]; }

  double norm() const;
  void scale(cplx factor);
  void normalize();

 private:
  int n_;
  std::vector<cplx> amp_;
};

// Gate on one or two sites. For two sites the local basis index is
// bit(sites[0]) + 2 * bit(sites[1]).
struct LocalGate {
  std::vector<int> sites;
  Eigen::MatrixXcd matrix;
  bool unitary = true;
};

LocalGate make_gate(std::vector<int> sites, Eigen::MatrixXcd matrix);

// Named axis states: up, down, x+, x-, y+, y-.
SiteState site_state(std::string_view name);

StateVector product_state(const std::vector<SiteState>& sites);
StateVector product_state(const std::vector<std::string>& names);
StateVector basis_state(int n_qubits, std::size_t index);

void validate_gate(const LocalGate& gate, int n_qubits);

StateVector apply_gate(const StateVector& state, const LocalGate& gate);
void apply_gate_inplace(StateVector& state, const LocalGate& gate);

// Applies gate only on the part of the state where qubit `control` is 1.
void apply_controlled_gate_inplace(StateVector& state, const LocalGate& gate, int control);

// Single-qubit Pauli by index 0=X, 1=Y, 2=Z, applied in place.
void apply_pauli_inplace(StateVector& state, int qubit, int pauli);

cplx inner_product(const StateVector& bra, const StateVector& ket);

// Dense embedding of a local gate, for oracle comparisons only.
Eigen::MatrixXcd embed_operator(int n_qubits, const std::vector<int>& sites,
                                const Eigen::MatrixXcd& local);

Eigen::VectorXcd to_eigen(const StateVector& state);
StateVector from_eigen(const Eigen::VectorXcd& v);

}  // namespace losch
