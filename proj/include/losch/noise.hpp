#pragma once

#include <cstdint>

#include "losch/circuit.hpp"
#include "losch/rng.hpp"
#include "losch/statevector.hpp"

namespace losch {

struct PhaseTrace;

struct NoiseConfig {
  double gamma = 0.0;
  int n_trajectories = 1;
  int shots = 0;  // 0: exact trajectory-averaged probabilities
  std::uint64_t master_seed = 0;

  void validate() const;
};

// With probability gamma per qubit apply X, Y or Z (gamma/3 each).
void apply_noise_layer_inplace(StateVector& state, double gamma, Rng& rng);
StateVector apply_noise_layer(const StateVector& state, double gamma, Rng& rng);

struct NoisyProbability {
  double p_hat = 0.0;
  int depth = 0;  // noisy layers traversed, D
};

// Mean over trajectories of |<psi_final|trajectory>|^2, with a noise layer
// after every circuit layer. Trajectory j uses
// make_stream(seed, {kTagTrajectory, circuit_id, j}).
NoisyProbability run_noisy_probability(const Circuit& circuit, const StateVector& psi_init,
                                       const StateVector& psi_final, const NoiseConfig& noise,
                                       std::uint64_t circuit_id, int threads = 1);

double sample_shots(double p, int shots, Rng& rng);

struct Mitigated {
  double value = 0.0;
  bool clamped = false;
};

Mitigated mitigate_rescale(double p_hat, double gamma, int n_qubits, int depth);

// I * t / (h * sqrt(M)) at the last grid point of the trace.
double statistical_error_model(const PhaseTrace& trace, int shots, double h);

}  // namespace losch
