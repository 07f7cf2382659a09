#pragma once

#include <optional>
#include <vector>

#include "losch/circuit.hpp"
#include "losch/model.hpp"

namespace losch {

// exp(sign * h * H)|psi> ~ c_total * (gates)|psi>.
struct ItePlan {
  int sign = 1;
  double h = 0.0;
  std::vector<LocalGate> gates;
  double log_c_total = 0.0;
  // Set for plans whose gates are only valid on one particular state.
  std::optional<StateVector> fingerprint;

  double c_total() const;
  Circuit circuit() const;
  // Normalized gate output; rejects states other than the fingerprint.
  StateVector apply(const StateVector& psi) const;
};

double ite_angle(double h, double g);

// Per-site factors if psi is a product state (global phase put on site 0).
std::optional<std::vector<SiteState>> product_factors(const StateVector& psi, double tol = 1e-10);

ItePlan build_ite_plan_tfim(const HamiltonianSpec& spec, const StateVector& psi, double h, int sign);
ItePlan build_ite_plan_general(const HamiltonianSpec& spec, const StateVector& psi, double h,
                               int sign);

}  // namespace losch
