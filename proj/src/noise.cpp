#include "losch/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "losch/phase.hpp"

namespace losch {

void NoiseConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (n_trajectories < 1) throw std::invalid_argument("n_trajectories must be >= 1");
  if (shots < 0) throw std::invalid_argument("shots must be >= 0");
}

void apply_noise_layer_inplace(StateVector& state, double gamma, Rng& rng) {
  if (gamma == 0.0) return;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int q = 0; q < state.n_qubits(); ++q) {
    double u = u01(rng);
    if (u < gamma) apply_pauli_inplace(state, q, std::min(2, static_cast<int>(3.0 * u / gamma)));
  }
}

StateVector apply_noise_layer(const StateVector& state, double gamma, Rng& rng) {
  StateVector out = state;
  apply_noise_layer_inplace(out, gamma, rng);
  return out;
}

NoisyProbability run_noisy_probability(const Circuit& circuit, const StateVector& psi_init,
                                       const StateVector& psi_final, const NoiseConfig& noise,
                                       std::uint64_t circuit_id, int threads) {
  noise.validate();
  NoisyProbability res;
  res.depth = static_cast<int>(circuit.depth());
  std::vector<double> per(static_cast<std::size_t>(noise.n_trajectories));
  if (noise.gamma == 0.0) {
    StateVector s = run_circuit(psi_init, circuit);
    res.p_hat = std::norm(inner_product(psi_final, s));
    return res;
  }
  parallel_for(per.size(), threads, [&](std::size_t j) {
    Rng rng = make_stream(noise.master_seed, {kTagTrajectory, circuit_id, j});
    StateVector s = psi_init;
    for (const auto& layer : circuit.layers) {
      run_layer_inplace(s, layer);
      apply_noise_layer_inplace(s, noise.gamma, rng);
    }
    per[j] = std::norm(inner_product(psi_final, s));
  });
  double sum = 0.0;
  for (double p : per) sum += p;
  res.p_hat = sum / static_cast<double>(per.size());
  return res;
}

double sample_shots(double p, int shots, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
  if (shots <= 0) return p;
  if (p == 0.0 || p == 1.0) return p;
  std::binomial_distribution<long long> dist(shots, p);
  return static_cast<double>(dist(rng)) / static_cast<double>(shots);
}

Mitigated mitigate_rescale(double p_hat, double gamma, int n_qubits, int depth) {
  if (p_hat < 0.0 || gamma < 0.0 || n_qubits < 0 || depth < 0)
    throw std::invalid_argument("mitigation inputs must be nonnegative");
  const double survive = std::pow(1.0 - gamma, static_cast<double>(n_qubits) * depth);
  if (survive < 1e-12) throw NumericalError("mitigation blow-up: depth too large for rate");
  Mitigated m;
  m.value = gamma == 0.0 ? p_hat : p_hat / survive;
  if (m.value > 1.0) {
    m.value = 1.0;
    m.clamped = true;
  }
  return m;
}

double statistical_error_model(const PhaseTrace& trace, int shots, double h) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  if (trace.size() == 0) throw std::invalid_argument("empty trace");
  for (std::size_t k = 0; k < trace.size(); ++k)
    if (!(trace.p_plus[k] > 0.0) || !(trace.p_minus[k] > 0.0))
      throw NumericalError("zero probability in trace");
  auto i_factor = running_i_factor(trace.p_plus, trace.p_minus, trace.tau, trace.rule);
  const double t = trace.times.back();
  return i_factor.back() * t / (h * std::sqrt(static_cast<double>(shots)));
}

}  // namespace losch
