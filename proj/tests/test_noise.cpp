#include <gtest/gtest.h>

#include <cmath>

#include "losch/circuit.hpp"
#include "losch/noise.hpp"
#include "losch/phase.hpp"
#include "losch/trotter.hpp"
#include "test_util.hpp"

using namespace losch;

namespace {

StateVector all_up(int n) { return product_state(std::vector<std::string>(n, "up")); }

Circuit identity_circuit(int layers) {
  Circuit c;
  for (int i = 0; i < layers; ++i) c.layers.push_back({make_gate({0}, Eigen::MatrixXcd::Identity(2, 2))});
  return c;
}

}  // namespace

TEST(NoiseLayer, ZeroRateLeavesState) {
  std::mt19937_64 g(1);
  auto s = testutil::random_state(3, g);
  Rng rng(7);
  auto out = apply_noise_layer(s, 0.0, rng);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(out[i], s[i]);
}

TEST(NoiseLayer, DepolarizesSigmaZ) {
  for (double gamma : {0.3, 0.75}) {
    Rng rng(11);
    const int n = 100000;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      auto s = all_up(1);
      apply_noise_layer_inplace(s, gamma, rng);
      sum += std::norm(s[0]) - std::norm(s[1]);
    }
    const double mean = sum / n;
    const double expected = 1.0 - 4.0 * gamma / 3.0;
    const double sigma = std::sqrt((1.0 - expected * expected) / n);
    EXPECT_NEAR(mean, expected, 3.0 * sigma) << "gamma = " << gamma;
  }
}

TEST(NoisyProbability, NoiselessIsExact) {
  auto plan = build_plan(tfim(4, 1.0, 0.5), 1.0, 0.1, 2);
  NoiseConfig nc;
  nc.gamma = 0.0;
  nc.n_trajectories = 7;
  auto res = run_noisy_probability(plan.circuit(), all_up(4), all_up(4), nc, 0);
  const double exact = std::norm(inner_product(all_up(4), evolve(all_up(4), plan)));
  EXPECT_EQ(res.p_hat, exact);
  EXPECT_EQ(res.depth, static_cast<int>(plan.circuit().depth()));
}

TEST(NoisyProbability, SingleLayerSurvival) {
  NoiseConfig nc;
  nc.gamma = 0.3;
  nc.n_trajectories = 100000;
  nc.master_seed = 3;
  auto res = run_noisy_probability(identity_circuit(1), all_up(1), all_up(1), nc, 0, 4);
  EXPECT_EQ(res.depth, 1);
  const double sigma = std::sqrt(0.8 * 0.2 / nc.n_trajectories);
  EXPECT_NEAR(res.p_hat, 0.8, 3.0 * sigma);
}

TEST(NoisyProbability, ThreadCountDoesNotChangeResult) {
  auto plan = build_plan(tfim(5, 1.0, 0.5), 1.2, 0.3, 2);
  NoiseConfig nc;
  nc.gamma = 0.01;
  nc.n_trajectories = 64;
  nc.master_seed = 99;
  auto a = run_noisy_probability(plan.circuit(), all_up(5), all_up(5), nc, 5, 1);
  auto b = run_noisy_probability(plan.circuit(), all_up(5), all_up(5), nc, 5, 3);
  auto c = run_noisy_probability(plan.circuit(), all_up(5), all_up(5), nc, 5, 8);
  EXPECT_EQ(a.p_hat, b.p_hat);
  EXPECT_EQ(a.p_hat, c.p_hat);
  auto d = run_noisy_probability(plan.circuit(), all_up(5), all_up(5), nc, 6, 1);
  EXPECT_NE(a.p_hat, d.p_hat);
}

TEST(NoisyProbability, RejectsBadConfig) {
  NoiseConfig nc;
  nc.gamma = 1.5;
  EXPECT_THROW(run_noisy_probability(identity_circuit(1), all_up(1), all_up(1), nc, 0), std::invalid_argument);
  nc.gamma = 0.1;
  nc.n_trajectories = 0;
  EXPECT_THROW(run_noisy_probability(identity_circuit(1), all_up(1), all_up(1), nc, 0), std::invalid_argument);
}

TEST(Shots, EdgeProbabilities) {
  Rng rng(1);
  EXPECT_EQ(sample_shots(1.0, 17, rng), 1.0);
  EXPECT_EQ(sample_shots(0.0, 17, rng), 0.0);
  EXPECT_EQ(sample_shots(0.4, 0, rng), 0.4);
  EXPECT_THROW(sample_shots(1.2, 10, rng), std::invalid_argument);
}

TEST(Shots, BinomialSpread) {
  Rng rng(5);
  const int shots = 1000, n = 4000;
  const double p = 0.3;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = sample_shots(p, shots, rng);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double sd = std::sqrt(s2 / n - mean * mean);
  EXPECT_NEAR(sd / std::sqrt(p * (1 - p) / shots), 1.0, 0.15);
}

TEST(Mitigation, ZeroRateUnchanged) {
  auto m = mitigate_rescale(0.37, 0.0, 12, 10);
  EXPECT_EQ(m.value, 0.37);
  EXPECT_FALSE(m.clamped);
}

TEST(Mitigation, RescaleValue) {
  // 0.5 / 0.997^120 evaluated at 30 digits.
  auto m = mitigate_rescale(0.5, 3e-3, 12, 10);
  EXPECT_NEAR(m.value, 0.717052586893630320, 1e-14);
  EXPECT_FALSE(m.clamped);
}

TEST(Mitigation, ClampAndBlowUp) {
  auto m = mitigate_rescale(0.99, 0.05, 4, 10);
  EXPECT_EQ(m.value, 1.0);
  EXPECT_TRUE(m.clamped);
  EXPECT_THROW(mitigate_rescale(0.5, 0.5, 10, 10), NumericalError);
  EXPECT_THROW(mitigate_rescale(-0.1, 0.1, 1, 1), std::invalid_argument);
}

TEST(StatisticalModel, UnitProbabilities) {
  PhaseTrace tr;
  tr.tau = 0.1;
  for (int k = 0; k <= 20; ++k) tr.times.push_back(k * 0.1);
  tr.p_plus.assign(21, 1.0);
  tr.p_minus.assign(21, 1.0);
  EXPECT_NEAR(statistical_error_model(tr, 10000, 0.05), 2.0 * 2.0 / (0.05 * 100.0), 1e-12);
  tr.p_minus[4] = 0.0;
  EXPECT_THROW(statistical_error_model(tr, 10000, 0.05), NumericalError);
}

TEST(NoisyBackend, MitigatedCloseToNoiseless) {
  PhaseExperimentConfig cfg;
  cfg.model = tfim(4, 1.0, 0.5);
  cfg.psi = all_up(4);
  cfg.t_max = 1.2;
  cfg.tau = 0.3;
  cfg.h = 0.3;
  cfg.order = 1;
  cfg.backend = Backend::Noisy;
  NoiseConfig nc;
  nc.gamma = 3e-3;
  nc.n_trajectories = 200;
  nc.master_seed = 1;
  cfg.noise = nc;
  auto noisy = run_phase_experiment(cfg);
  ASSERT_TRUE(noisy.noise.has_value());
  cfg.backend = Backend::StatevectorTrotter;
  cfg.noise.reset();
  auto clean = run_phase_experiment(cfg);
  for (std::size_t k = 0; k < clean.size(); ++k) {
    EXPECT_LT(std::abs(noisy.noise->r2_mitigated[k] - clean.r[k] * clean.r[k]), 0.05);
    EXPECT_LE(noisy.noise->r2_raw[k], noisy.noise->r2_mitigated[k]);
  }
}
