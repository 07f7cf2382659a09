#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "losch/phase.hpp"
#include "test_util.hpp"

using namespace losch;

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

StateVector all_up(int n) { return product_state(std::vector<std::string>(n, "up")); }

// Trace of an analytic amplitude sampled at t_k and t_k +- ih with unit
// rescaling constants.
PhaseTrace synthetic_trace(const std::function<cplx(cplx)>& G, double tau, double h, int K, double anchor) {
  PhaseTrace tr;
  tr.tau = tau;
  tr.h = h;
  tr.anchor = anchor;
  for (int k = 0; k <= K; ++k) {
    const double t = k * tau;
    tr.times.push_back(t);
    tr.r.push_back(std::abs(G(t)));
    const double rp = std::abs(G(cplx(t, h))), rm = std::abs(G(cplx(t, -h)));
    tr.p_plus.push_back(rp * rp);
    tr.p_minus.push_back(rm * rm);
    tr.log_c_plus.push_back(0.0);
    tr.log_c_minus.push_back(0.0);
    tr.dphi_dt.push_back(finite_difference_log(rm, rp, h));
  }
  assemble_amplitude(tr);
  return tr;
}

// Oracle dphi/dt = Im(G'/G) with G' = <psi|(-iH) e^{-iHt}|psi>.
double exact_phase_rate(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& psi, double t) {
  Eigen::VectorXcd ev = testutil::expm(cplx(0, -t) * H) * psi;
  cplx G = psi.dot(ev);
  cplx dG = psi.dot(cplx(0, -1) * (H * ev));
  return (dG / G).imag();
}

}  // namespace

TEST(FiniteDifference, SymmetricInputsGiveZero) { EXPECT_EQ(finite_difference_log(0.7, 0.7, 0.1), 0.0); }

TEST(FiniteDifference, SingleMode) {
  // G(z) = exp(-iz): r(t - ih) = e^{-h}, r(t + ih) = e^{h}.
  EXPECT_NEAR(finite_difference_log(std::exp(-0.1), std::exp(0.1), 0.1), -1.0, 1e-15);
}

TEST(FiniteDifference, ZeroMagnitudeRejected) {
  EXPECT_THROW(finite_difference_log(0.0, 0.5, 0.1), NumericalError);
  EXPECT_THROW(finite_difference_log(0.5, 0.5, 0.0), std::invalid_argument);
}

TEST(FiniteDifference, OracleErrorIsSecondOrderInH) {
  const int n = 4;
  auto spec = tfim(n, 1.0, 0.5);
  DenseOracle o(spec);
  Eigen::MatrixXcd H = testutil::tfim_dense(n, 1.0, 0.5);
  const double t = 0.5;
  const double exact = exact_phase_rate(H, testutil::all_up(n), t);
  std::vector<double> hs{0.1, 0.05, 0.025}, err;
  for (double h : hs) {
    double rm = std::abs(o.amplitude(all_up(n), all_up(n), cplx(t, -h)));
    double rp = std::abs(o.amplitude(all_up(n), all_up(n), cplx(t, h)));
    err.push_back(std::abs(finite_difference_log(rm, rp, h) - exact));
  }
  for (int i = 0; i + 1 < 3; ++i) EXPECT_NEAR(std::log2(err[i] / err[i + 1]), 2.0, 0.2);
}

TEST(Integrate, ConstantDerivative) {
  std::vector<double> d(11, 0.3);
  for (Rule rule : {Rule::Trapezoid, Rule::Simpson}) {
    auto phi = integrate_phase(d, 0.1, rule, 0.25);
    for (std::size_t k = 0; k < d.size(); ++k) EXPECT_NEAR(phi[k], 0.25 + 0.3 * 0.1 * k, 1e-14);
  }
}

TEST(Integrate, SimpsonExactOnPolynomials) {
  const double tau = 0.1;
  std::vector<double> d, d3;
  for (int k = 0; k <= 20; ++k) {
    d.push_back(2.0 * k * tau);
    d3.push_back(3.0 * std::pow(k * tau, 2));
  }
  auto phi = integrate_phase(d, tau, Rule::Simpson, 0.0);
  for (int k = 0; k <= 20; ++k) EXPECT_NEAR(phi[k], std::pow(k * tau, 2), 1e-12);
  auto phi3 = integrate_phase(d3, tau, Rule::Simpson, 0.0);
  for (int k = 0; k <= 20; k += 2) EXPECT_NEAR(phi3[k], std::pow(k * tau, 3), 1e-12);
}

TEST(Integrate, RuleGapIsSecondOrder) {
  const int n = 4;
  Eigen::MatrixXcd H = testutil::tfim_dense(n, 1.0, 0.5);
  Eigen::VectorXcd up = testutil::all_up(n);
  std::vector<double> taus{0.1, 0.05, 0.025}, gap;
  for (double tau : taus) {
    const int K = grid_size(2.0, tau);
    std::vector<double> d;
    for (int k = 0; k <= K; ++k) d.push_back(exact_phase_rate(H, up, k * tau));
    gap.push_back(std::abs(integrate_phase(d, tau, Rule::Trapezoid, 0.0).back() -
                           integrate_phase(d, tau, Rule::Simpson, 0.0).back()));
  }
  for (int i = 0; i + 1 < 3; ++i) EXPECT_NEAR(std::log2(gap[i] / gap[i + 1]), 2.0, 0.3);
}

TEST(Integrate, NeedsTwoSamples) {
  EXPECT_THROW(integrate_phase({1.0}, 0.1, Rule::Simpson, 0.0), std::invalid_argument);
}

TEST(IFactor, UnitProbabilities) {
  std::vector<double> ones(21, 1.0);
  auto I = running_i_factor(ones, ones, 0.1, Rule::Simpson);
  for (double v : I) EXPECT_NEAR(v, 2.0, 1e-13);
}

TEST(DetectZeros, FlatMagnitude) {
  PhaseTrace tr;
  tr.r.assign(30, 1.0);
  EXPECT_TRUE(detect_zeros(tr, 1e-3).empty());
}

TEST(DetectZeros, SingleDip) {
  PhaseTrace tr;
  tr.r.assign(30, 0.5);
  tr.r[17] = 1e-6;
  auto z = detect_zeros(tr, 1e-3);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0], 17);
}

TEST(DefaultThreshold, ShotNoiseFloor) {
  EXPECT_EQ(default_zero_threshold(0), 1e-3);
  EXPECT_NEAR(default_zero_threshold(10000), 0.1, 1e-15);
  EXPECT_EQ(default_zero_threshold(1000000000), 1e-3);
}

TEST(CorrectPhase, NoCrossingsLeavesTraceUnchanged) {
  auto tr = synthetic_trace([](cplx z) { return std::exp(cplx(0, -1) * z); }, 0.05, 0.01, 40, 0.0);
  auto out = correct_phase_jumps(tr, {}, 1e-3);
  for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_EQ(out.phi[k], tr.phi[k]);
  EXPECT_TRUE(out.crossings.empty());
}

TEST(CorrectPhase, SimpleZeroSynthetic) {
  auto G = [](cplx z) { return (z - 1.0) * std::exp(cplx(0, -1) * z); };
  const double tau = 0.05;
  auto raw = synthetic_trace(G, tau, 0.01, 60, kPi);
  auto zeros = detect_zeros(raw, 1e-3);
  ASSERT_EQ(zeros.size(), 1u);
  EXPECT_EQ(zeros[0], 20);
  // The raw reconstruction misses the pi jump of the real zero at t = 1.
  for (int k = 22; k <= 60; ++k) EXPECT_GT(std::abs(wrap(raw.phi[k] - std::arg(G(k * tau)))), 3.0);
  auto fixed = correct_phase_jumps(raw, zeros, 1e-3);
  ASSERT_EQ(fixed.crossings.size(), 1u);
  EXPECT_TRUE(fixed.crossings[0].applied);
  EXPECT_EQ(fixed.crossings[0].order, 1);
  for (int k = 0; k <= 60; ++k) {
    if (k == 20) continue;
    EXPECT_LT(std::abs(wrap(fixed.phi[k] - std::arg(G(k * tau)))), 0.05) << "t = " << k * tau;
  }
}

TEST(CorrectPhase, SecondOrderZeroSynthetic) {
  auto G = [](cplx z) { return (z - 1.0) * (z - 1.0) * std::exp(cplx(0, -1) * z); };
  const double tau = 0.05;
  auto raw = synthetic_trace(G, tau, 0.01, 60, 0.0);
  auto zeros = detect_zeros(raw, 1e-3);
  ASSERT_EQ(zeros.size(), 1u);
  auto fixed = correct_phase_jumps(raw, zeros, 0.2);
  ASSERT_EQ(fixed.crossings.size(), 1u);
  EXPECT_EQ(fixed.crossings[0].order, 2);
  for (int k = 0; k <= 60; ++k) {
    if (k == 20) continue;
    EXPECT_LT(std::abs(wrap(fixed.phi[k] - std::arg(G(k * tau)))), 0.05) << "t = " << k * tau;
  }
}

TEST(CorrectPhase, CrossingNearBoundaryIsSkipped) {
  auto G = [](cplx z) { return (z - 0.04) * std::exp(cplx(0, -1) * z); };
  auto raw = synthetic_trace(G, 0.05, 0.01, 40, kPi);
  auto zeros = detect_zeros(raw, 0.02);
  ASSERT_EQ(zeros.size(), 1u);
  auto out = correct_phase_jumps(raw, zeros, 1e-3);
  ASSERT_EQ(out.crossings.size(), 1u);
  EXPECT_FALSE(out.crossings[0].applied);
  EXPECT_FALSE(out.warnings.empty());
}

TEST(RunPhase, SinglePointAtZeroTime) {
  PhaseExperimentConfig cfg;
  cfg.model = tfim(4, 1.0, 0.5);
  cfg.psi = all_up(4);
  cfg.t_max = 0.0;
  auto tr = run_phase_experiment(cfg);
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_NEAR(std::abs(tr.g[0] - cplx(1.0, 0.0)), 0.0, 1e-12);
  EXPECT_EQ(tr.phi[0], 0.0);
}

TEST(RunPhase, InitialRateIsMinusEnergy) {
  for (int n : {4, 6}) {
    PhaseExperimentConfig cfg;
    cfg.model = tfim(n, 1.0, 0.5);
    cfg.psi = all_up(n);
    cfg.t_max = 0.0;
    cfg.h = 0.01;
    auto tr = run_phase_experiment(cfg);
    EXPECT_NEAR(tr.dphi_dt[0], (n - 1) / 4.0, 1e-4);
  }
}

TEST(RunPhase, BackendsAgreeAtSmallN) {
  PhaseExperimentConfig cfg;
  cfg.model = tfim(4, 1.0, 0.5);
  cfg.psi = all_up(4);
  cfg.t_max = 2.0;
  cfg.tau = 0.01;
  cfg.h = 0.01;
  auto sv = run_phase_experiment(cfg);
  cfg.backend = Backend::ExactOracle;
  auto ex = run_phase_experiment(cfg);
  cfg.backend = Backend::StatevectorTrotter;
  cfg.ite_mode = IteMode::GeneralBj;
  auto gen = run_phase_experiment(cfg);
  DenseOracle o(cfg.model);
  for (std::size_t k = 0; k < sv.size(); ++k) {
    cplx ref = o.amplitude(all_up(4), all_up(4), cplx(sv.times[k], 0.0));
    EXPECT_LT(std::abs(sv.g[k] - ref), 2e-3);
    EXPECT_LT(std::abs(ex.g[k] - ref), 2e-3);
    EXPECT_LT(std::abs(gen.g[k] - ref), 2e-3);
  }
}

TEST(RunPhase, ProbabilitiesWithShotsAreDeterministic) {
  PhaseExperimentConfig cfg;
  cfg.model = tfim(4, 1.0, 0.5);
  cfg.psi = all_up(4);
  cfg.t_max = 1.0;
  cfg.tau = 0.1;
  cfg.h = 0.1;
  cfg.shots = 1000;
  cfg.seed = 42;
  auto a = run_phase_experiment(cfg);
  cfg.threads = 4;
  auto b = run_phase_experiment(cfg);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a.phi[k], b.phi[k]);
}

TEST(RunPhase, ValidatesInputs) {
  PhaseExperimentConfig cfg;
  cfg.model = tfim(4, 1.0, 0.5);
  cfg.psi = all_up(3);
  EXPECT_THROW(run_phase_experiment(cfg), std::invalid_argument);
  cfg.psi = all_up(4);
  cfg.h = 0.0;
  EXPECT_THROW(run_phase_experiment(cfg), std::invalid_argument);
  cfg.h = 0.01;
  cfg.tau = -1.0;
  EXPECT_THROW(run_phase_experiment(cfg), std::invalid_argument);
}

TEST(GridSize, FloorWithTolerance) {
  EXPECT_EQ(grid_size(5.0, 0.01), 500);
  EXPECT_EQ(grid_size(6.0, 0.3), 20);
  EXPECT_EQ(grid_size(1.0, 0.3), 3);
  EXPECT_EQ(grid_size(0.0, 0.3), 0);
}

TEST(TwoSided, IdentityReducesToPhase) {
  PhaseExperimentConfig base;
  base.model = tfim(4, 1.0, 0.5);
  base.psi = all_up(4);
  base.t_max = 1.0;
  base.tau = 0.05;
  base.h = 0.01;
  TwoSidedConfig tc;
  tc.base = base;
  tc.op = make_gate({0}, Eigen::MatrixXcd::Identity(2, 2));
  tc.t_prime = 0.0;
  auto a = run_two_sided_experiment(tc);
  auto b = run_phase_experiment(base);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LT(std::abs(a.g[k] - b.g[k]), 1e-3);
}

TEST(TwoSided, DiagonalOperatorAtEqualTimes) {
  PhaseExperimentConfig base;
  base.model = tfim(4, 1.0, 0.5);
  base.psi = all_up(4);
  base.t_max = 0.0;
  base.tau = 0.05;
  TwoSidedConfig tc;
  tc.base = base;
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  tc.op = make_gate({0}, z);
  // At t = t' = 0 the amplitude is <psi|A|psi> = 1; at later t' it is the
  // Heisenberg expectation <A(t')>.
  tc.t_prime = 0.0;
  EXPECT_NEAR(run_two_sided_experiment(tc).r[0], 1.0, 1e-10);
  tc.t_prime = 0.5;
  DenseOracle o(base.model);
  cplx ex = exact_two_sided(o, base.psi, tc.op, base.psi, 0.5, 0.0, true);
  EXPECT_LT(std::abs(ex.imag()), 1e-12);
  EXPECT_NEAR(run_two_sided_experiment(tc).r[0], std::abs(ex), 1e-3);
  EXPECT_LT(std::abs(ex), 0.99);
}

TEST(TwoSided, MatchesExplicitOperatorInsertion) {
  const int n = 4;
  PhaseExperimentConfig base;
  base.model = tfim(n, 1.0, 0.5);
  base.psi = all_up(n);
  base.t_max = 1.5;
  base.tau = 0.01;
  base.h = 0.01;
  TwoSidedConfig tc;
  tc.base = base;
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  tc.op = make_gate({0}, x);
  tc.t_prime = 0.5;
  auto tr = run_two_sided_experiment(tc);
  Eigen::MatrixXcd H = testutil::tfim_dense(n, 1.0, 0.5);
  Eigen::MatrixXcd A = testutil::pauli_string(n, {{0, 'x'}});
  Eigen::VectorXcd up = testutil::all_up(n);
  for (std::size_t k = 0; k < tr.size(); k += 10) {
    const double u = tr.times[k];
    // <psi| e^{iH(t' - u/2)} A e^{-iH(t' + u/2)} |psi>
    Eigen::VectorXcd ket = testutil::expm(cplx(0, -(tc.t_prime + u / 2)) * H) * up;
    Eigen::VectorXcd bra = testutil::expm(cplx(0, -(tc.t_prime - u / 2)) * H) * up;
    cplx ref = bra.dot(A * ket);
    EXPECT_LT(std::abs(tr.g[k] - ref), 5e-3) << "u = " << u;
  }
}

TEST(TwoSided, RejectsEntangledStates) {
  PhaseExperimentConfig base;
  base.model = tfim(3, 1.0, 0.5);
  std::mt19937_64 rng(5);
  base.psi = testutil::random_state(3, rng);
  base.t_max = 0.5;
  base.tau = 0.05;
  TwoSidedConfig tc;
  tc.base = base;
  tc.op = make_gate({0}, Eigen::MatrixXcd::Identity(2, 2));
  EXPECT_THROW(run_two_sided_experiment(tc), std::invalid_argument);
}
