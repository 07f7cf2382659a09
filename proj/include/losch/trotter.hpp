#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "losch/circuit.hpp"
#include "losch/model.hpp"

namespace losch {

// One exponential factor of a Trotter step: exp(-i * fraction * tau * H_group).
struct ScheduleEntry {
  int group = 0;
  double fraction = 1.0;
};

struct PlanOptions {
  // Merge adjacent factors of the same group (across and within steps).
  // Changes the layer count, so meant for noiseless runs only.
  bool merge_half_layers = false;
  // Build the adjoint plan, approximating exp(+iHt).
  bool reverse = false;
};

class TrotterPlan {
 public:
  int order() const noexcept { return order_; }
  double tau() const noexcept { return tau_; }
  int n_steps() const noexcept { return n_steps_; }
  int n_qubits() const noexcept { return n_qubits_; }
  bool merged() const noexcept { return options_.merge_half_layers; }
  bool reversed() const noexcept { return options_.reverse; }
  const std::vector<std::string>& group_labels() const noexcept { return labels_; }

  // Layers of a single unmerged step.
  const std::vector<Layer>& step_layers() const noexcept { return step_layers_; }

  // Factor sequence for `steps` steps (merging applied if enabled).
  std::vector<ScheduleEntry> schedule(int steps) const;

  // Compiled circuit for `steps` steps, without single-site fusion.
  Circuit circuit(int steps) const;
  Circuit circuit() const { return circuit(n_steps_); }

  std::size_t layer_count(int steps) const { return circuit(steps).depth(); }

  // Layers realizing one schedule entry.
  std::vector<Layer> entry_layers(const ScheduleEntry& e) const;

 private:
  friend TrotterPlan build_plan(const HamiltonianSpec&, double, double, int, PlanOptions);

  int order_ = 2;
  double tau_ = 0.0;
  int n_steps_ = 0;
  int n_qubits_ = 0;
  PlanOptions options_;
  std::vector<std::string> labels_;
  std::vector<ScheduleEntry> step_;
  std::vector<Layer> step_layers_;
  // group -> disjoint-support sublayer -> terms
  std::vector<std::vector<std::vector<LocalTerm>>> sublayers_;
  std::map<std::pair<int, double>, std::vector<Layer>> entry_cache_;
};

TrotterPlan build_plan(const HamiltonianSpec& spec, double t, double tau, int order,
                       PlanOptions options = {});

StateVector evolve(const StateVector& state, const TrotterPlan& plan);

// Applies Trotter steps one at a time. With merging enabled the trailing
// factor of the last step is kept pending so that state() always equals
// the merged circuit for the steps taken so far.
class TrotterStepper {
 public:
  TrotterStepper(const TrotterPlan& plan, StateVector initial);

  void advance();
  int steps_taken() const noexcept { return steps_; }
  StateVector state() const;

 private:
  void apply_entry(StateVector& s, const ScheduleEntry& e) const;

  const TrotterPlan* plan_;
  StateVector open_;
  std::optional<ScheduleEntry> pending_;
  int steps_ = 0;
};

}  // namespace losch
