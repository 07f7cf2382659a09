#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "losch/circuit.hpp"
#include "losch/local_ops.hpp"
#include "losch/trotter.hpp"
#include "test_util.hpp"

using namespace losch;

namespace {

// Dense matrix of a circuit, column by column.
Eigen::MatrixXcd circuit_matrix(const Circuit& c, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) m.col(j) = to_eigen(run_circuit(basis_state(n, j), c));
  return m;
}

double op_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

TEST(BuildPlan, ZeroTimeHasNoSteps) {
  auto plan = build_plan(tfim(4, 1.0, 0.5), 0.0, 0.1, 2);
  EXPECT_EQ(plan.n_steps(), 0);
  EXPECT_EQ(plan.circuit().depth(), 0u);
  std::mt19937_64 rng(1);
  auto s = testutil::random_state(4, rng);
  auto out = evolve(s, plan);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(out[i], s[i]);
}

TEST(BuildPlan, SingleGroupIsExact) {
  auto spec = tfim(2, 1.0, 0.0);
  for (double tau : {0.1, 0.37}) {
    auto plan = build_plan(spec, tau, tau, 2);
    EXPECT_EQ(plan.group_labels().size(), 1u);
    EXPECT_EQ(plan.circuit().depth(), 1u);
    Eigen::MatrixXcd ref = testutil::expm(cplx(0, -tau) * testutil::tfim_dense(2, 1.0, 0.0));
    EXPECT_LT((circuit_matrix(plan.circuit(), 2) - ref).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BuildPlan, OneStepErrorOrder) {
  auto spec = tfim(4, 1.0, 0.5);
  Eigen::MatrixXcd h = testutil::tfim_dense(4, 1.0, 0.5);
  for (int p : {1, 2}) {
    std::vector<double> taus{0.1, 0.05, 0.025}, err;
    for (double tau : taus) {
      auto plan = build_plan(spec, tau, tau, p);
      err.push_back(op_norm(circuit_matrix(plan.circuit(), 4) - testutil::expm(cplx(0, -tau) * h)));
    }
    for (int i = 0; i + 1 < 3; ++i) {
      double slope = std::log(err[i] / err[i + 1]) / std::log(2.0);
      EXPECT_NEAR(slope, p + 1, 0.3) << "order " << p;
    }
  }
}

TEST(BuildPlan, FourthOrderIsMoreAccurate) {
  auto spec = tfim(4, 1.0, 0.5);
  Eigen::MatrixXcd ref = testutil::expm(cplx(0, -1.0) * testutil::tfim_dense(4, 1.0, 0.5));
  double e2 = op_norm(circuit_matrix(build_plan(spec, 1.0, 0.1, 2).circuit(), 4) - ref);
  double e4 = op_norm(circuit_matrix(build_plan(spec, 1.0, 0.1, 4).circuit(), 4) - ref);
  EXPECT_LT(e4, e2 / 20.0);
}

TEST(BuildPlan, Errors) {
  auto spec = tfim(3, 1.0, 0.5);
  EXPECT_THROW(build_plan(spec, 1.0, 0.1, 3), std::invalid_argument);
  EXPECT_THROW(build_plan(spec, 1.0, 0.3, 2), std::invalid_argument);
  EXPECT_THROW(build_plan(spec, 1.0, 0.0, 2), std::invalid_argument);
  HamiltonianSpec bad;
  bad.n_sites = 2;
  bad.terms.push_back({{0}, pauli_matrix('x'), "mix"});
  bad.terms.push_back({{0}, pauli_matrix('z'), "mix"});
  EXPECT_THROW(build_plan(bad, 1.0, 0.1, 2), std::invalid_argument);
}

TEST(BuildPlan, LayersHaveDisjointSupports) {
  auto plan = build_plan(tfim(7, 1.0, 0.5), 0.5, 0.1, 2);
  for (const auto& layer : plan.circuit().layers) EXPECT_NO_THROW(validate_layer(layer, 7));
}

TEST(Evolve, ZeroStepsUnchanged) {
  auto plan = build_plan(tfim(3, 1.0, 0.5), 0.0, 0.05, 1);
  auto s = product_state(std::vector<std::string>{"up", "x+", "down"});
  auto out = evolve(s, plan);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(out[i], s[i]);
}

TEST(Evolve, ReverseRoundTrip) {
  auto spec = tfim(5, 1.0, 0.5);
  std::mt19937_64 rng(2);
  auto s = testutil::random_state(5, rng);
  for (int p : {1, 2, 4}) {
    auto fwd = build_plan(spec, 0.6, 0.05, p);
    PlanOptions rev;
    rev.reverse = true;
    auto bwd = build_plan(spec, 0.6, 0.05, p, rev);
    auto back = evolve(evolve(s, fwd), bwd);
    double err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, std::abs(back[i] - s[i]));
    EXPECT_LT(err, fwd.n_steps() * 1e-10);
  }
}

TEST(Evolve, MatchesDenseOracle) {
  const int n = 6;
  auto spec = tfim(n, 1.0, 0.5);
  auto up = product_state(std::vector<std::string>(n, "up"));
  auto plan = build_plan(spec, 1.0, 0.01, 2);
  Eigen::VectorXcd ref = testutil::expm(cplx(0, -1.0) * testutil::tfim_dense(n, 1.0, 0.5)) * testutil::all_up(n);
  double overlap = std::abs(ref.dot(to_eigen(evolve(up, plan))));
  EXPECT_GE(overlap, 1.0 - 1e-6);
}

TEST(Stepper, MergedPlanMatchesUnmerged) {
  auto spec = tfim(4, 1.0, 0.5);
  std::mt19937_64 rng(3);
  auto s = testutil::random_state(4, rng);
  PlanOptions merge;
  merge.merge_half_layers = true;
  auto a = build_plan(spec, 0.5, 0.05, 2);
  auto b = build_plan(spec, 0.5, 0.05, 2, merge);
  EXPECT_LT(b.circuit().depth(), a.circuit().depth());
  TrotterStepper sa(a, s), sb(b, s);
  for (int k = 0; k < a.n_steps(); ++k) {
    sa.advance();
    sb.advance();
    auto x = sa.state(), y = sb.state();
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_LT(std::abs(x[i] - y[i]), 1e-12);
  }
}

TEST(Fusion, PreservesCircuitAndShrinksDepth) {
  auto spec = tfim(5, 1.0, 0.5);
  auto plan = build_plan(spec, 0.4, 0.1, 1);
  Circuit c = plan.circuit();
  Circuit f = fuse_single_site_gates(c);
  EXPECT_EQ(f.depth(), 2u * plan.n_steps());
  EXPECT_LT((circuit_matrix(c, 5) - circuit_matrix(f, 5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Circuit, AdjointInverts) {
  auto plan = build_plan(tfim(4, 1.0, 0.5), 0.3, 0.1, 2);
  Circuit c = plan.circuit();
  Eigen::MatrixXcd m = circuit_matrix(c, 4) * circuit_matrix(adjoint(c), 4);
  EXPECT_LT((m - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Expm, ClosedFormAndEigenPathsAgree) {
  std::mt19937_64 rng(4);
  Eigen::MatrixXcd h = testutil::random_hermitian(4, rng);
  for (cplx c : {cplx(0, -0.3), cplx(0.2, 0.0), cplx(0.1, -0.4)}) {
    EXPECT_LT((expm_hermitian(h, c) - testutil::expm(c * h)).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::MatrixXcd x = pauli_matrix('x');
    EXPECT_LT((expm_hermitian(x, c) - testutil::expm(c * x)).cwiseAbs().maxCoeff(), 1e-13);
  }
}
