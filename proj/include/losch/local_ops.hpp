#pragma once

#include <complex>

#include <Eigen/Dense>

namespace losch {

Eigen::MatrixXcd pauli_matrix(char axis);  // 'i', 'x', 'y', 'z'
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// kron in the local-index convention: idx = bit(site0) + 2 * bit(site1),
// so the operator on site0 is the fast factor.
Eigen::MatrixXcd local_kron(const Eigen::MatrixXcd& on_site0, const Eigen::MatrixXcd& on_site1);

bool is_hermitian(const Eigen::MatrixXcd& m, double tol);
bool is_unitary(const Eigen::MatrixXcd& m, double tol);

// exp(c * H) for Hermitian H and complex scalar c. Uses the closed form
// cosh/sinh when H^2 is proportional to the identity, otherwise the
// Hermitian eigendecomposition.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, std::complex<double> c);

}  // namespace losch
