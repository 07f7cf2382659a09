#include "losch/circuit.hpp"

#include <algorithm>
#include <map>

#include "losch/local_ops.hpp"

namespace losch {

void Circuit::append(const Circuit& other) {
  layers.insert(layers.end(), other.layers.begin(), other.layers.end());
  log_scale += other.log_scale;
}

std::vector<Layer> pack_layers(const std::vector<LocalGate>& gates) {
  std::vector<Layer> layers;
  std::map<int, int> next_free;
  for (const auto& g : gates) {
    int slot = 0;
    for (int q : g.sites) {
      auto it = next_free.find(q);
      if (it != next_free.end()) slot = std::max(slot, it->second);
    }
    if (slot >= static_cast<int>(layers.size())) layers.resize(slot + 1);
    layers[slot].push_back(g);
    for (int q : g.sites) next_free[q] = slot + 1;
  }
  return layers;
}

void validate_layer(const Layer& layer, int n_qubits) {
  std::vector<bool> used(n_qubits, false);
  for (const auto& g : layer) {
    validate_gate(g, n_qubits);
    for (int q : g.sites) {
      if (used[q]) throw std::invalid_argument("layer gates overlap");
      used[q] = true;
    }
  }
}

void run_layer_inplace(StateVector& state, const Layer& layer) {
  for (const auto& g : layer) apply_gate_inplace(state, g);
}

void run_circuit_inplace(StateVector& state, const Circuit& circuit) {
  for (const auto& layer : circuit.layers) run_layer_inplace(state, layer);
}

StateVector run_circuit(const StateVector& state, const Circuit& circuit) {
  StateVector out = state;
  run_circuit_inplace(out, circuit);
  return out;
}

namespace {

Eigen::MatrixXcd lift(const LocalGate& target, int qubit, const Eigen::MatrixXcd& single) {
  if (target.sites.size() == 1) return single;
  auto id = Eigen::MatrixXcd::Identity(2, 2);
  return target.sites[0] == qubit ? local_kron(single, id) : local_kron(id, single);
}

}  // namespace

Circuit fuse_single_site_gates(const Circuit& circuit) {
  Circuit out = circuit;
  struct Ref {
    std::size_t layer, gate;
  };
  std::map<int, std::vector<Ref>> timeline;
  for (std::size_t l = 0; l < out.layers.size(); ++l)
    for (std::size_t g = 0; g < out.layers[l].size(); ++g)
      for (int q : out.layers[l][g].sites) timeline[q].push_back({l, g});
  std::vector<std::vector<char>> alive(out.layers.size());
  for (std::size_t l = 0; l < out.layers.size(); ++l) alive[l].assign(out.layers[l].size(), 1);

  for (std::size_t l = 0; l < out.layers.size(); ++l) {
    for (std::size_t g = 0; g < out.layers[l].size(); ++g) {
      LocalGate& gate = out.layers[l][g];
      if (gate.sites.size() != 1) continue;
      const int q = gate.sites[0];
      const auto& tl = timeline[q];
      auto self = std::find_if(tl.begin(), tl.end(),
                               [&](const Ref& r) { return r.layer == l && r.gate == g; });
      const Ref* next = nullptr;
      for (auto it = self + 1; it != tl.end(); ++it)
        if (alive[it->layer][it->gate]) {
          next = &*it;
          break;
        }
      if (next) {
        LocalGate& tgt = out.layers[next->layer][next->gate];
        tgt.matrix = tgt.matrix * lift(tgt, q, gate.matrix);
        tgt.unitary = tgt.unitary && gate.unitary;
        alive[l][g] = 0;
        continue;
      }
      const Ref* prev = nullptr;
      for (auto it = self; it != tl.begin();) {
        --it;
        if (alive[it->layer][it->gate]) {
          prev = &*it;
          break;
        }
      }
      if (prev) {
        LocalGate& tgt = out.layers[prev->layer][prev->gate];
        tgt.matrix = lift(tgt, q, gate.matrix) * tgt.matrix;
        tgt.unitary = tgt.unitary && gate.unitary;
        alive[l][g] = 0;
      }
    }
  }

  std::vector<Layer> kept;
  for (std::size_t l = 0; l < out.layers.size(); ++l) {
    Layer layer;
    for (std::size_t g = 0; g < out.layers[l].size(); ++g)
      if (alive[l][g]) layer.push_back(std::move(out.layers[l][g]));
    if (!layer.empty()) kept.push_back(std::move(layer));
  }
  out.layers = std::move(kept);
  return out;
}

Circuit adjoint(const Circuit& circuit) {
  Circuit out;
  out.log_scale = circuit.log_scale;
  for (auto it = circuit.layers.rbegin(); it != circuit.layers.rend(); ++it) {
    Layer layer = *it;
    for (auto& g : layer) g.matrix = g.matrix.adjoint().eval();
    out.layers.push_back(std::move(layer));
  }
  return out;
}

}  // namespace losch
