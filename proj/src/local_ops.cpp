#include "losch/local_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace losch {

using cplx = std::complex<double>;

Eigen::MatrixXcd pauli_matrix(char axis) {
  Eigen::MatrixXcd m(2, 2);
  switch (axis) {
    case 'i':
      m << 1, 0, 0, 1;
      break;
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << 0, cplx(0, -1), cplx(0, 1), 0;
      break;
    case 'z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument("unknown Pauli axis");
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd local_kron(const Eigen::MatrixXcd& on_site0, const Eigen::MatrixXcd& on_site1) {
  return kron(on_site1, on_site0);
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  auto id = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, cplx c) {
  const Eigen::Index d = h.rows();
  if (h.cols() != d) throw std::invalid_argument("expm_hermitian: matrix not square");
  auto id = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd h2 = h * h;
  double s2 = (h2.trace() / static_cast<double>(d)).real();
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h2 - s2 * id).cwiseAbs().maxCoeff() <= 1e-14 * scale * scale) {
    double s = std::sqrt(std::max(s2, 0.0));
    if (s == 0.0) return id;
    return std::cosh(c * s) * id + (std::sinh(c * s) / s) * h;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd ev(d);
  for (Eigen::Index k = 0; k < d; ++k) ev(k) = std::exp(c * es.eigenvalues()(k));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace losch
