#pragma once

#include <vector>

#include "losch/statevector.hpp"

namespace losch {

// Gates inside a layer act on pairwise-disjoint supports.
using Layer = std::vector<LocalGate>;

// Ordered layers plus the classically tracked log of the real rescaling
// constant contributed by imaginary-time steps.
struct Circuit {
  std::vector<Layer> layers;
  double log_scale = 0.0;

  std::size_t depth() const noexcept { return layers.size(); }
  void append(const Circuit& other);
};

// Greedy as-soon-as-possible packing of an ordered gate list into layers.
// Respects program order on every qubit.
std::vector<Layer> pack_layers(const std::vector<LocalGate>& gates);

void validate_layer(const Layer& layer, int n_qubits);

void run_layer_inplace(StateVector& state, const Layer& layer);
void run_circuit_inplace(StateVector& state, const Circuit& circuit);
StateVector run_circuit(const StateVector& state, const Circuit& circuit);

// Absorbs every single-site gate into the nearest gate acting on the same
// qubit (next one in time if any, otherwise the previous one) and drops
// layers that become empty. Exact up to rounding.
Circuit fuse_single_site_gates(const Circuit& circuit);

// Adjoint circuit (reversed layer order, each gate daggered).
Circuit adjoint(const Circuit& circuit);

}  // namespace losch
