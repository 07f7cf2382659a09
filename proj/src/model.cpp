#include "losch/model.hpp"

#include <cmath>
#include <stdexcept>

#include "losch/local_ops.hpp"

namespace losch {

void HamiltonianSpec::validate() const {
  if (n_sites < 1) throw std::invalid_argument("Hamiltonian needs at least one site");
  for (const auto& t : terms) {
    if (t.sites.empty() || t.sites.size() > 2)
      throw std::invalid_argument("term support must be 1 or 2 sites");
    for (int q : t.sites)
      if (q < 0 || q >= n_sites) throw std::invalid_argument("term site out of range");
    if (t.sites.size() == 2 && std::abs(t.sites[0] - t.sites[1]) != 1)
      throw std::invalid_argument("two-site terms must act on adjacent sites");
    auto dim = static_cast<Eigen::Index>(1) << t.sites.size();
    if (t.matrix.rows() != dim || t.matrix.cols() != dim)
      throw std::invalid_argument("term matrix dimension does not match support");
    if (!is_hermitian(t.matrix, 1e-12)) throw std::invalid_argument("term matrix is not Hermitian");
  }
}

bool HamiltonianSpec::is_real() const {
  for (const auto& t : terms)
    if (t.matrix.imag().cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

HamiltonianSpec tfim(int n_sites, double J, double g) {
  if (n_sites < 2) throw std::invalid_argument("tfim requires n_sites >= 2");
  HamiltonianSpec spec;
  spec.n_sites = n_sites;
  spec.tfim = TfimParams{J, g};
  Eigen::MatrixXcd zz = local_kron(pauli_matrix('z'), pauli_matrix('z')) * (-J / 4.0);
  for (int i = 0; i + 1 < n_sites; ++i) spec.terms.push_back({{i, i + 1}, zz, "zz"});
  Eigen::MatrixXcd x = pauli_matrix('x') * (g / 2.0);
  for (int i = 0; i < n_sites; ++i) spec.terms.push_back({{i}, x, "x"});
  return spec;
}

Eigen::MatrixXcd dense_matrix(const HamiltonianSpec& spec) {
  if (spec.n_sites > kOracleMaxSites) throw std::invalid_argument("oracle size limit");
  spec.validate();
  const Eigen::Index dim = Eigen::Index{1} << spec.n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : spec.terms) h += embed_operator(spec.n_sites, t.sites, t.matrix);
  return h;
}

double term_expectation(const LocalTerm& term, const StateVector& state) {
  LocalGate op;
  op.sites = term.sites;
  op.matrix = term.matrix;
  op.unitary = false;
  cplx e = inner_product(state, apply_gate(state, op));
  if (std::abs(e.imag()) > 1e-10) throw NumericalError("expectation has an imaginary part");
  return e.real();
}

double expectation(const HamiltonianSpec& spec, const StateVector& state) {
  if (state.n_qubits() != spec.n_sites) throw std::invalid_argument("state size mismatch");
  double e = 0.0;
  for (const auto& t : spec.terms) e += term_expectation(t, state);
  return e;
}

DenseOracle::DenseOracle(const HamiltonianSpec& spec) : n_(spec.n_sites) {
  Eigen::MatrixXcd h = dense_matrix(spec);
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real());
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }
}

Eigen::VectorXcd DenseOracle::coefficients(const StateVector& state) const {
  if (state.n_qubits() != n_) throw std::invalid_argument("state size mismatch");
  return vectors_.adjoint() * to_eigen(state);
}

cplx DenseOracle::amplitude(const StateVector& bra, const StateVector& ket, cplx z) const {
  Eigen::VectorXcd cb = coefficients(bra);
  Eigen::VectorXcd ck = coefficients(ket);
  const cplx mi{0.0, -1.0};
  cplx s{0.0, 0.0};
  for (Eigen::Index k = 0; k < energies_.size(); ++k)
    s += std::conj(cb(k)) * ck(k) * std::exp(mi * energies_(k) * z);
  return s;
}

StateVector DenseOracle::evolve(const StateVector& ket, cplx z) const {
  Eigen::VectorXcd c = coefficients(ket);
  const cplx mi{0.0, -1.0};
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(mi * energies_(k) * z);
  return from_eigen(vectors_ * c);
}

double DenseOracle::imaginary_norm(const StateVector& ket, double beta) const {
  Eigen::VectorXcd c = coefficients(ket);
  double s = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) s += std::norm(c(k)) * std::exp(2.0 * beta * energies_(k));
  return std::sqrt(s);
}

cplx exact_amplitude(const HamiltonianSpec& spec, const StateVector& psi_final,
                     const StateVector& psi_init, cplx z) {
  return DenseOracle(spec).amplitude(psi_final, psi_init, z);
}

}  // namespace losch
