#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "losch/baselines.hpp"
#include "losch/phase.hpp"
#include "losch/scaling.hpp"

namespace losch {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TermSpec {
  std::vector<int> sites;
  Eigen::MatrixXcd matrix;
  std::string group;
};

struct ModelSpec {
  std::string kind = "tfim";  // "tfim" or "terms"
  int n = 2;
  double J = 1.0;
  double g = 0.5;
  std::vector<TermSpec> terms;

  HamiltonianSpec build() const;
};

// Either one axis name per site or a full amplitude vector.
struct StateSpec {
  std::vector<std::string> names;
  std::vector<cplx> amplitudes;

  StateVector build(int n) const;
};

struct OperatorSpec {
  std::vector<int> sites;
  Eigen::MatrixXcd matrix;
};

struct AlgorithmSpec {
  double tau = 0.01;
  double h = 0.01;
  int order = 2;
  double t_max = 1.0;
  Rule rule = Rule::Simpson;
  IteMode ite_mode = IteMode::TfimClosedForm;
  Backend backend = Backend::StatevectorTrotter;
  bool zero_correction = true;
  std::optional<double> zero_threshold;
  int shots = 0;
  bool merge_half_layers = false;
  bool fuse_layers = true;
};

struct NoiseSpec {
  double gamma = 0.0;
  int trajectories = 1;
  int shots = 0;
};

struct SpectralSpec {
  bool hermitian_extend = true;
  // Window centre; <psi|H|psi> when unset.
  std::optional<double> center;
  std::optional<double> taper;
  // Broadening of the dense reference; the bin width eta when unset.
  std::optional<double> reference_width;
};

struct ScalingSpec {
  SweepKind sweep = SweepKind::H;
  std::vector<int> n_values;
  std::vector<double> values;
  double fixed = 0.01;
  double t_window = 5.0;
};

struct BaselineSpec {
  Part part = Part::Real;
  bool both_parts = true;
  int shots = 0;
  std::vector<StateSpec> sequence;
  double theta0 = 0.0;
  double theta1 = 1.5707963267948966;
  double fallback_threshold = 1e-3;
  std::optional<double> phi_anchor;  // oracle phase of the first state when unset
};

struct CostRow {
  std::string method = "all";
  CostInput input;
};

struct OutputSpec {
  std::string dir = ".";
  std::string name;  // file stem; the command name when empty
  bool json = false;
};

struct ExperimentConfig {
  ModelSpec model;
  StateSpec psi;
  std::optional<StateSpec> psi_final;
  std::optional<OperatorSpec> op;
  double t_prime = 0.0;
  bool symmetric_split = true;
  AlgorithmSpec algorithm;
  std::optional<NoiseSpec> noise;
  SpectralSpec spectral;
  std::optional<ScalingSpec> scaling;
  std::optional<BaselineSpec> baseline;
  std::vector<CostRow> cost;
  OutputSpec output;
  std::uint64_t seed = 0;
};

// Strict parse: unknown keys, wrong types and out-of-range values throw
// ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Fully resolved form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

PhaseExperimentConfig make_phase_config(const ExperimentConfig& config, int threads);

}  // namespace losch
