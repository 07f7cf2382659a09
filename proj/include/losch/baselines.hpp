#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "losch/model.hpp"
#include "losch/rng.hpp"

namespace losch {

enum class Part { Real, Imag };

struct HadamardResult {
  double estimate = 0.0;  // 2 p0 - 1 (sampled when shots > 0)
  double p0 = 0.0;        // exact ancilla-0 probability of the simulated circuit
};

// (N+1)-qubit Hadamard test with the ancilla on qubit N and every Trotter
// gate applied as a controlled gate. shots = 0 returns the exact estimate.
HadamardResult hadamard_test(const HamiltonianSpec& spec, const StateVector& psi, double t,
                             double tau, int order, Part part, int shots, Rng* rng);

struct InterferometryStep {
  double r_ii = 0.0, r_ij = 0.0, r_jj = 0.0;
  double phi_ij = 0.0;  // cross-term phase (NaN on the fallback branch)
  double phi_jj = 0.0;
  double inv_r_tilde2 = 0.0;
  bool fallback = false;
};

struct InterferometryResult {
  double phi_final = 0.0;
  std::vector<InterferometryStep> steps;
  double i_tilde = 0.0;  // mean of 1 / r~^2 over the steps
};

struct InterferometryOptions {
  std::pair<double, double> thetas{0.0, 1.5707963267948966};
  double fallback_threshold = 1e-3;
  int shots = 0;
  std::uint64_t seed = 0;
};

// Transfers the known phase of <psi_0|U|psi_0> along a chain of product
// states differing by one site each. U is the order-p Trotter circuit.
// The second step uses phi_ji = phi_ij, which needs a real Hamiltonian and
// real states.
InterferometryResult sequential_interferometry(const HamiltonianSpec& spec,
                                               const std::vector<StateVector>& sequence, double t,
                                               double tau, int order, double phi_anchor,
                                               const InterferometryOptions& options = {});

enum class CostMethod { Hadamard, Sequential, ThisWork, Magnitude };

struct CostInput {
  CostMethod method = CostMethod::ThisWork;
  double N = 1.0;
  double t = 1.0;
  double epsilon = 1e-2;
  int p = 2;
  double d = 1.0;
  double r = 1.0;
  double I = 1.0;  // I for this work, I~ for sequential interferometry

  void validate() const;
};

struct CostEstimate {
  double depth = 0.0;
  double measurements = 0.0;
};

// Unit-prefactor scaling laws; comparative only.
CostEstimate resource_cost(const CostInput& input);

std::string to_string(CostMethod m);
CostMethod cost_method_from_string(const std::string& s);

}  // namespace losch
