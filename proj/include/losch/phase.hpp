#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "losch/model.hpp"
#include "losch/noise.hpp"
#include "losch/statevector.hpp"

namespace losch {

enum class Rule { Trapezoid, Simpson };
enum class Backend { ExactOracle, StatevectorTrotter, Noisy };
enum class IteMode { TfimClosedForm, GeneralBj };

struct Crossing {
  int index = 0;
  int order = 1;         // estimated zero order n0
  double delta = 0.0;    // residual phase shift across the zero
  bool applied = false;  // false when skipped near a boundary
};

// Extra per-point columns produced by the noisy backend.
struct NoiseColumns {
  std::vector<double> p_plus_raw, p_minus_raw, p_plus_mitigated, p_minus_mitigated;
  std::vector<double> r2_raw, r2_mitigated;
  std::vector<int> clamped;
  std::vector<int> depth_plus, depth_minus, depth_zero;
};

struct PhaseTrace {
  double tau = 0.0;
  double h = 0.0;
  Rule rule = Rule::Simpson;
  double anchor = 0.0;

  std::vector<double> times;
  std::vector<double> r;
  std::vector<double> p_plus, p_minus;
  // log c_± of the imaginary-time plans: ln r(t±ih) = ln(p±)/2 + log_c_±.
  std::vector<double> log_c_plus, log_c_minus;
  std::vector<double> dphi_dt;
  std::vector<double> phi;
  std::vector<cplx> g;
  std::vector<double> i_factor;

  std::vector<Crossing> crossings;
  std::vector<std::string> warnings;
  std::optional<NoiseColumns> noise;

  std::size_t size() const noexcept { return times.size(); }
};

double finite_difference_log(double r_minus, double r_plus, double h);
// Same estimate from ln r(t-ih) and ln r(t+ih).
double finite_difference_from_logs(double log_r_minus, double log_r_plus, double h);

std::vector<double> integrate_phase(const std::vector<double>& derivatives, double tau, Rule rule,
                                    double anchor);

// I(t_k) = (1/t_k) * integral of p+^{-1/2} + p-^{-1/2}; I(0) is the integrand.
std::vector<double> running_i_factor(const std::vector<double>& p_plus,
                                     const std::vector<double>& p_minus, double tau, Rule rule);

double default_zero_threshold(int shots);

std::vector<int> detect_zeros(const PhaseTrace& trace, double threshold);

// Segment-wise re-integration that skips each crossing and matches the
// post-crossing branch to the left one through continuity of the first
// (or second) finite-difference derivative of G. `threshold` is the zero
// threshold used for the n0 = 2 decision.
PhaseTrace correct_phase_jumps(const PhaseTrace& trace, const std::vector<int>& crossings,
                               double threshold);

// Recomputes phi from dphi_dt and g = polar(r, phi).
void assemble_amplitude(PhaseTrace& trace);

struct PhaseExperimentConfig {
  HamiltonianSpec model;
  StateVector psi{1};
  std::optional<StateVector> psi_final;  // defaults to psi
  double tau = 0.01;
  double h = 0.01;
  int order = 2;
  double t_max = 0.0;
  Rule rule = Rule::Simpson;
  IteMode ite_mode = IteMode::TfimClosedForm;
  Backend backend = Backend::StatevectorTrotter;
  bool zero_correction = true;
  std::optional<double> zero_threshold;
  int shots = 0;  // 0: exact probabilities
  std::optional<NoiseConfig> noise;
  std::uint64_t seed = 0;
  double anchor = 0.0;
  bool merge_half_layers = false;
  bool fuse_layers = true;
  int threads = 1;
};

// Number of grid intervals for t_max and tau.
int grid_size(double t_max, double tau);

PhaseTrace run_phase_experiment(const PhaseExperimentConfig& config);

// Channel probabilities before post-processing; exposed for the magnitude
// command and for tests.
struct ChannelData {
  std::vector<double> p0, p_plus, p_minus;
  std::vector<double> log_c_plus, log_c_minus;
  std::optional<NoiseColumns> noise;
};

ChannelData measure_channels(const PhaseExperimentConfig& config);

// Turns channel data into a full trace (derivatives, integration, zeros).
PhaseTrace reconstruct(const ChannelData& data, const PhaseExperimentConfig& config);

// Two-sided amplitude G_A(u) = <psi'| e^{iH(t' - (1-s)u)} A e^{-iH(t' + s u)} |psi>
// with split s = 1/2 (symmetric, default) or s = 1 (ket only); the
// imaginary-time shift is split the same way between the two states.
struct TwoSidedConfig {
  PhaseExperimentConfig base;
  LocalGate op;
  double t_prime = 0.0;
  bool symmetric = true;
  std::optional<double> anchor;  // default: oracle phase at u = 0
};

PhaseTrace run_two_sided_experiment(const TwoSidedConfig& config);

// Exact G_A(u) from the dense oracle.
cplx exact_two_sided(const DenseOracle& oracle, const StateVector& psi_final, const LocalGate& op,
                     const StateVector& psi, double t_prime, double u, bool symmetric);

}  // namespace losch
