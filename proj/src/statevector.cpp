#include "losch/statevector.hpp"

#include <algorithm>
#include <cmath>

namespace losch {

namespace {

constexpr int kMaxQubits = 30;

cplx pairwise_dot(const cplx* a, const cplx* b, std::size_t n) {
  if (n <= 32) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_dot(a, b, half) + pairwise_dot(a + half, b + half, n - half);
}

double pairwise_norm2(const cplx* a, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_norm2(a, half) + pairwise_norm2(a + half, n - half);
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("zero qubits");
  if (n_qubits > kMaxQubits) throw std::invalid_argument("too many qubits");
  amp_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  amp_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_(n_qubits), amp_(std::move(amplitudes)) {
  if (n_qubits < 1) throw std::invalid_argument("zero qubits");
  if (n_qubits > kMaxQubits) throw std::invalid_argument("too many qubits");
  if (amp_.size() != (std::size_t{1} << n_qubits))
    throw std::invalid_argument("amplitude count does not match 2^n_qubits");
}

double StateVector::norm() const { return std::sqrt(pairwise_norm2(amp_.data(), amp_.size())); }

void StateVector::scale(cplx factor) {
  for (auto& a : amp_) a *= factor;
}

void StateVector::normalize() {
  double nrm = norm();
  if (nrm == 0.0) throw NumericalError("cannot normalize zero state");
  scale(1.0 / nrm);
}

LocalGate make_gate(std::vector<int> sites, Eigen::MatrixXcd matrix) {
  LocalGate g;
  g.sites = std::move(sites);
  g.matrix = std::move(matrix);
  auto dim = static_cast<Eigen::Index>(1) << g.sites.size();
  if (g.sites.empty() || g.sites.size() > 2 || g.matrix.rows() != dim || g.matrix.cols() != dim)
    throw std::invalid_argument("gate support must be 1 or 2 sites with a matching matrix");
  g.unitary = (g.matrix.adjoint() * g.matrix - Eigen::MatrixXcd::Identity(dim, dim))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10;
  return g;
}

SiteState site_state(std::string_view name) {
  const double s = 1.0 / std::sqrt(2.0);
  if (name == "up" || name == "z+" || name == "0") return {cplx{1, 0}, cplx{0, 0}};
  if (name == "down" || name == "z-" || name == "1") return {cplx{0, 0}, cplx{1, 0}};
  if (name == "x+" || name == "+") return {cplx{s, 0}, cplx{s, 0}};
  if (name == "x-" || name == "-") return {cplx{s, 0}, cplx{-s, 0}};
  if (name == "y+") return {cplx{s, 0}, cplx{0, s}};
  if (name == "y-") return {cplx{s, 0}, cplx{0, -s}};
  throw std::invalid_argument("unknown site state '" + std::string(name) + "'");
}

StateVector product_state(const std::vector<SiteState>& sites) {
  if (sites.empty()) throw std::invalid_argument("zero qubits");
  for (const auto& s : sites) {
    double n2 = std::norm(s[0]) + std::norm(s[1]);
    if (std::abs(n2 - 1.0) > 1e-10) throw std::invalid_argument("site state is not normalized");
  }
  const int n = static_cast<int>(sites.size());
  std::vector<cplx> amp(std::size_t{1} << n);
  for (std::size_t i = 0; i < amp.size(); ++i) {
    cplx a{1.0, 0.0};
    for (int q = 0; q < n; ++q) a *= sites[q][(i >> q) & 1u];
    amp[i] = a;
  }
  return StateVector(n, std::move(amp));
}

StateVector product_state(const std::vector<std::string>& names) {
  std::vector<SiteState> s;
  s.reserve(names.size());
  for (const auto& n : names) s.push_back(site_state(n));
  return product_state(s);
}

StateVector basis_state(int n_qubits, std::size_t index) {
  StateVector s(n_qubits);
  if (index >= s.size()) throw std::invalid_argument("basis index out of range");
  s[0] = 0.0;
  s[index] = 1.0;
  return s;
}

void validate_gate(const LocalGate& gate, int n_qubits) {
  if (gate.sites.empty() || gate.sites.size() > 2)
    throw std::invalid_argument("gate support must be 1 or 2 sites");
  for (int q : gate.sites)
    if (q < 0 || q >= n_qubits) throw std::invalid_argument("gate site out of range");
  if (gate.sites.size() == 2 && gate.sites[0] == gate.sites[1])
    throw std::invalid_argument("duplicate gate sites");
  auto dim = static_cast<Eigen::Index>(1) << gate.sites.size();
  if (gate.matrix.rows() != dim || gate.matrix.cols() != dim)
    throw std::invalid_argument("gate matrix dimension does not match support");
}

void apply_gate_inplace(StateVector& state, const LocalGate& gate) {
  validate_gate(gate, state.n_qubits());
  auto& a = state.amplitudes();
  const std::size_t dim = a.size();
  const auto& m = gate.matrix;
  if (gate.sites.size() == 1) {
    const std::size_t mask = std::size_t{1} << gate.sites[0];
    const cplx m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    const std::size_t lo = mask - 1;
    for (std::size_t j = 0; j < dim / 2; ++j) {
      std::size_t i0 = ((j & ~lo) << 1) | (j & lo);
      std::size_t i1 = i0 | mask;
      cplx x0 = a[i0], x1 = a[i1];
      a[i0] = m00 * x0 + m01 * x1;
      a[i1] = m10 * x0 + m11 * x1;
    }
    return;
  }
  const int qa = gate.sites[0], qb = gate.sites[1];
  const std::size_t ma = std::size_t{1} << qa, mb = std::size_t{1} << qb;
  const int qlo = std::min(qa, qb), qhi = std::max(qa, qb);
  const std::size_t lo_mask = (std::size_t{1} << qlo) - 1;
  const std::size_t mid_mask = ((std::size_t{1} << (qhi - 1)) - 1) & ~lo_mask;
  cplx mm[4][4];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) mm[r][c] = m(r, c);
  for (std::size_t j = 0; j < dim / 4; ++j) {
    std::size_t base = (j & lo_mask) | ((j & mid_mask) << 1) | ((j & ~(lo_mask | mid_mask)) << 2);
    const std::size_t idx[4] = {base, base | ma, base | mb, base | ma | mb};
    const cplx x[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
    for (int r = 0; r < 4; ++r)
      a[idx[r]] = mm[r][0] * x[0] + mm[r][1] * x[1] + mm[r][2] * x[2] + mm[r][3] * x[3];
  }
}

StateVector apply_gate(const StateVector& state, const LocalGate& gate) {
  StateVector out = state;
  apply_gate_inplace(out, gate);
  return out;
}

void apply_controlled_gate_inplace(StateVector& state, const LocalGate& gate, int control) {
  validate_gate(gate, state.n_qubits());
  if (control < 0 || control >= state.n_qubits())
    throw std::invalid_argument("control qubit out of range");
  for (int q : gate.sites)
    if (q == control) throw std::invalid_argument("control overlaps gate support");
  const std::size_t cmask = std::size_t{1} << control;
  auto& a = state.amplitudes();
  const auto& m = gate.matrix;
  if (gate.sites.size() == 1) {
    const std::size_t mask = std::size_t{1} << gate.sites[0];
    for (std::size_t i0 = 0; i0 < a.size(); ++i0) {
      if ((i0 & mask) || !(i0 & cmask)) continue;
      std::size_t i1 = i0 | mask;
      cplx x0 = a[i0], x1 = a[i1];
      a[i0] = m(0, 0) * x0 + m(0, 1) * x1;
      a[i1] = m(1, 0) * x0 + m(1, 1) * x1;
    }
    return;
  }
  const std::size_t ma = std::size_t{1} << gate.sites[0], mb = std::size_t{1} << gate.sites[1];
  for (std::size_t base = 0; base < a.size(); ++base) {
    if ((base & ma) || (base & mb) || !(base & cmask)) continue;
    const std::size_t idx[4] = {base, base | ma, base | mb, base | ma | mb};
    const cplx x[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
    for (int r = 0; r < 4; ++r)
      a[idx[r]] = m(r, 0) * x[0] + m(r, 1) * x[1] + m(r, 2) * x[2] + m(r, 3) * x[3];
  }
}

void apply_pauli_inplace(StateVector& state, int qubit, int pauli) {
  auto& a = state.amplitudes();
  const std::size_t mask = std::size_t{1} << qubit;
  const cplx i1{0.0, 1.0};
  for (std::size_t i0 = 0; i0 < a.size(); ++i0) {
    if (i0 & mask) continue;
    std::size_t j = i0 | mask;
    switch (pauli) {
      case 0:
        std::swap(a[i0], a[j]);
        break;
      case 1: {
        cplx x0 = a[i0], x1 = a[j];
        a[i0] = -i1 * x1;
        a[j] = i1 * x0;
        break;
      }
      default:
        a[j] = -a[j];
    }
  }
}

cplx inner_product(const StateVector& bra, const StateVector& ket) {
  if (bra.n_qubits() != ket.n_qubits()) throw std::invalid_argument("state size mismatch");
  return pairwise_dot(bra.amplitudes().data(), ket.amplitudes().data(), bra.size());
}

Eigen::MatrixXcd embed_operator(int n_qubits, const std::vector<int>& sites,
                                const Eigen::MatrixXcd& local) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  const int k = static_cast<int>(sites.size());
  std::size_t support_mask = 0;
  for (int q : sites) support_mask |= std::size_t{1} << q;
  for (Eigen::Index col = 0; col < dim; ++col) {
    std::size_t c = static_cast<std::size_t>(col);
    int lc = 0;
    for (int j = 0; j < k; ++j) lc |= static_cast<int>((c >> sites[j]) & 1u) << j;
    for (int lr = 0; lr < (1 << k); ++lr) {
      std::size_t r = c & ~support_mask;
      for (int j = 0; j < k; ++j) r |= static_cast<std::size_t>((lr >> j) & 1) << sites[j];
      out(static_cast<Eigen::Index>(r), col) += local(lr, lc);
    }
  }
  return out;
}

Eigen::VectorXcd to_eigen(const StateVector& state) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(state.size()));
  for (std::size_t i = 0; i < state.size(); ++i) v(static_cast<Eigen::Index>(i)) = state[i];
  return v;
}

StateVector from_eigen(const Eigen::VectorXcd& v) {
  int n = 0;
  while ((Eigen::Index{1} << n) < v.size()) ++n;
  std::vector<cplx> amp(v.data(), v.data() + v.size());
  return StateVector(n, std::move(amp));
}

}  // namespace losch
