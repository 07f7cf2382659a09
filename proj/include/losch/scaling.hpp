#pragma once

#include <vector>

#include "losch/phase.hpp"

namespace losch {

enum class SweepKind { H, Tau };

struct ScalingConfig {
  SweepKind sweep = SweepKind::H;
  std::vector<int> n_values;
  std::vector<double> values;  // h values for an h sweep, tau values for a tau sweep
  double fixed = 0.01;         // tau for an h sweep, h for a tau sweep
  int order = 2;
  double t_window = 5.0;
  double J = 1.0;
  double g = 0.5;
  Rule rule = Rule::Simpson;
  int threads = 1;
};

// Phase error |phi - phi_exact| on the grid of one sweep point; the exact
// phase is the unwrapped oracle phase. Initial state is all up.
struct ScalingPoint {
  int n = 0;
  double value = 0.0;
  std::vector<double> times;
  std::vector<double> delta_phi;
  double max_delta_phi = 0.0;
  // max_delta_phi / (N value^q), q = 2 for h and p for tau.
  double collapsed = 0.0;
};

struct ScalingFit {
  int n = 0;
  double exponent = 0.0;
};

struct ScalingSpread {
  double value = 0.0;
  double spread = 0.0;  // (max - min) / mean of `collapsed` across N
};

struct ScalingResult {
  double collapse_power = 2.0;
  std::vector<ScalingPoint> points;  // n-major, then value
  std::vector<ScalingFit> fits;
  std::vector<ScalingSpread> spreads;
};

ScalingResult run_scaling(const ScalingConfig& config);

// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> unwrap_phase(const std::vector<cplx>& g);

}  // namespace losch
