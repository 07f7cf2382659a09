#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "losch/local_ops.hpp"
#include "losch/model.hpp"
#include "test_util.hpp"

using namespace losch;

namespace {

HamiltonianSpec single_spin_x(double g) {
  HamiltonianSpec s;
  s.n_sites = 1;
  s.terms.push_back({{0}, 0.5 * g * pauli_matrix('x'), "x"});
  return s;
}

StateVector all_up(int n) { return product_state(std::vector<std::string>(n, "up")); }

}  // namespace

TEST(Tfim, PureIsingGroundEnergy) {
  DenseOracle o(tfim(2, 1.0, 0.0));
  EXPECT_NEAR(o.ground_energy(), -0.25, 1e-14);
}

TEST(Tfim, FreeSpinSpectrum) {
  DenseOracle o(tfim(2, 0.0, 1.0));
  const double expected[4] = {-1.0, 0.0, 0.0, 1.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(o.energies()(i), expected[i], 1e-14);
}

TEST(Tfim, RejectsSingleSite) { EXPECT_THROW(tfim(1, 1.0, 0.5), std::invalid_argument); }

TEST(Tfim, TermsAreTaggedBondsFirst) {
  auto s = tfim(4, 1.0, 0.5);
  ASSERT_EQ(s.terms.size(), 7u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s.terms[i].group, "zz");
  for (int i = 3; i < 7; ++i) EXPECT_EQ(s.terms[i].group, "x");
}

TEST(DenseMatrix, PureIsingIsDiagonal) {
  Eigen::MatrixXcd h = dense_matrix(tfim(2, 1.0, 0.0));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected.diagonal() << -0.25, 0.25, 0.25, -0.25;
  EXPECT_LT((h - expected).norm(), 1e-15);
}

TEST(DenseMatrix, EmptySpecIsZero) {
  HamiltonianSpec s;
  s.n_sites = 3;
  EXPECT_EQ(dense_matrix(s).norm(), 0.0);
}

TEST(DenseMatrix, MatchesKroneckerConstruction) {
  for (int n = 2; n <= 6; ++n) {
    Eigen::MatrixXcd h = dense_matrix(tfim(n, 1.0, 0.5));
    EXPECT_LT((h - testutil::tfim_dense(n, 1.0, 0.5)).norm(), 1e-12) << "n = " << n;
  }
}

TEST(DenseMatrix, RandomLocalTermsAreHermitian) {
  std::mt19937_64 rng(11);
  HamiltonianSpec s;
  s.n_sites = 4;
  for (int q = 0; q < 3; ++q) s.terms.push_back({{q, q + 1}, testutil::random_hermitian(4, rng), "b"});
  for (int q = 0; q < 4; ++q) s.terms.push_back({{q}, testutil::random_hermitian(2, rng), "s"});
  s.validate();
  Eigen::MatrixXcd h = dense_matrix(s);
  EXPECT_LT((h - h.adjoint()).norm(), 1e-12);
}

TEST(DenseMatrix, EnforcesSizeLimit) {
  EXPECT_THROW(dense_matrix(tfim(kOracleMaxSites + 1, 1.0, 0.5)), std::invalid_argument);
}

TEST(SpecValidation, RejectsBadTerms) {
  HamiltonianSpec s;
  s.n_sites = 3;
  s.terms.push_back({{0, 2}, Eigen::MatrixXcd::Identity(4, 4), "far"});
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.terms = {{{0}, Eigen::MatrixXcd::Identity(2, 2) * cplx(0, 1), "anti"}};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.terms = {{{3}, Eigen::MatrixXcd::Identity(2, 2), "out"}};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(ExactAmplitude, ZeroTimeIsOverlap) {
  std::mt19937_64 rng(12);
  auto spec = tfim(4, 1.0, 0.5);
  auto a = testutil::random_state(4, rng), b = testutil::random_state(4, rng);
  EXPECT_LT(std::abs(exact_amplitude(spec, a, b, 0.0) - inner_product(a, b)), 1e-12);
}

TEST(ExactAmplitude, SingleSpinRealTime) {
  const double g = 0.7;
  auto spec = single_spin_x(g);
  auto up = all_up(1);
  for (double t : {0.3, 1.0, 4.2}) {
    cplx v = exact_amplitude(spec, up, up, t);
    EXPECT_NEAR(v.real(), std::cos(g * t / 2.0), 1e-13);
    EXPECT_NEAR(v.imag(), 0.0, 1e-13);
  }
}

TEST(ExactAmplitude, SingleSpinImaginaryTime) {
  const double g = 0.7, h = 0.3;
  auto spec = single_spin_x(g);
  auto up = all_up(1);
  cplx v = exact_amplitude(spec, up, up, cplx(0.0, -h));
  EXPECT_NEAR(v.real(), std::cosh(h * g / 2.0), 1e-13);
  EXPECT_NEAR(v.imag(), 0.0, 1e-13);
}

TEST(ExactAmplitude, MatchesPadeExponential) {
  const int n = 5;
  auto spec = tfim(n, 1.0, 0.5);
  Eigen::MatrixXcd h = testutil::tfim_dense(n, 1.0, 0.5);
  Eigen::VectorXcd up = testutil::all_up(n);
  DenseOracle o(spec);
  for (cplx z : {cplx(0.7, 0.0), cplx(2.0, 0.1), cplx(1.3, -0.2)}) {
    cplx ref = up.dot(testutil::expm(cplx(0, -1) * z * h) * up);
    EXPECT_LT(std::abs(o.amplitude(all_up(n), all_up(n), z) - ref), 1e-11);
  }
}

TEST(Expectation, AllUpIsingEnergy) {
  for (int n : {2, 5, 9, 16}) EXPECT_NEAR(expectation(tfim(n, 1.0, 0.5), all_up(n)), -(n - 1) / 4.0, 1e-14);
}

TEST(Expectation, ZeroHamiltonian) {
  HamiltonianSpec s;
  s.n_sites = 2;
  EXPECT_EQ(expectation(s, all_up(2)), 0.0);
}

TEST(Expectation, EigenstateGivesEigenvalue) {
  auto spec = tfim(6, 1.0, 0.5);
  DenseOracle o(spec);
  for (int k : {0, 7, 31}) {
    StateVector v = from_eigen(o.eigenvectors().col(k));
    EXPECT_NEAR(expectation(spec, v), o.energies()(k), 1e-10);
  }
}

TEST(DenseOracle, ImaginaryNorm) {
  auto spec = tfim(4, 1.0, 0.5);
  DenseOracle o(spec);
  Eigen::MatrixXcd h = testutil::tfim_dense(4, 1.0, 0.5);
  Eigen::VectorXcd v = testutil::expm(0.2 * h) * testutil::all_up(4);
  EXPECT_NEAR(o.imaginary_norm(all_up(4), 0.2), v.norm(), 1e-12);
}
