#include "losch/ite.hpp"

#include <cmath>
#include <stdexcept>

#include "losch/local_ops.hpp"

namespace losch {

double ItePlan::c_total() const { return std::exp(log_c_total); }

Circuit ItePlan::circuit() const {
  Circuit c;
  c.layers = pack_layers(gates);
  c.log_scale = log_c_total;
  return c;
}

StateVector ItePlan::apply(const StateVector& psi) const {
  if (fingerprint) {
    const auto& ref = fingerprint->amplitudes();
    const auto& a = psi.amplitudes();
    bool same = ref.size() == a.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = std::abs(ref[i] - a[i]) <= 1e-12;
    if (!same) throw std::invalid_argument("imaginary-time plan was built for a different state");
  }
  StateVector out = psi;
  for (const auto& g : gates) apply_gate_inplace(out, g);
  return out;
}

double ite_angle(double h, double g) { return std::atan(std::tanh(h * g / 2.0)); }

std::optional<std::vector<SiteState>> product_factors(const StateVector& psi, double tol) {
  const auto& a = psi.amplitudes();
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (std::abs(a[i]) > std::abs(a[best])) best = i;
  if (std::abs(a[best]) == 0.0) return std::nullopt;
  const int n = psi.n_qubits();
  std::vector<SiteState> f(n);
  for (int q = 0; q < n; ++q) {
    std::size_t m = std::size_t{1} << q;
    cplx x0 = a[best & ~m], x1 = a[best | m];
    double nrm = std::sqrt(std::norm(x0) + std::norm(x1));
    f[q] = {x0 / nrm, x1 / nrm};
  }
  // Fix the global phase so the reconstruction matches at `best`.
  cplx rec{1.0, 0.0};
  for (int q = 0; q < n; ++q) rec *= f[q][(best >> q) & 1u];
  cplx alpha = a[best] / rec;
  f[0][0] *= alpha;
  f[0][1] *= alpha;
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cplx r{1.0, 0.0};
    for (int q = 0; q < n; ++q) r *= f[q][(i >> q) & 1u];
    err = std::max(err, std::abs(r - a[i]));
  }
  if (err > tol) return std::nullopt;
  return f;
}

ItePlan build_ite_plan_tfim(const HamiltonianSpec& spec, const StateVector& psi, double h, int sign) {
  if (!spec.tfim) throw std::invalid_argument("closed-form imaginary-time plan requires a TFIM spec");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (psi.n_qubits() != spec.n_sites) throw std::invalid_argument("state size mismatch");
  const auto& a = psi.amplitudes();
  std::size_t idx = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) > 1e-12) {
      if (idx != a.size()) throw std::invalid_argument("requires computational-basis product state");
      idx = i;
    }
  }
  if (idx == a.size() || std::abs(std::abs(a[idx]) - 1.0) > 1e-10)
    throw std::invalid_argument("requires computational-basis product state");

  const double g = spec.tfim->g;
  const double theta = ite_angle(h, g);
  ItePlan plan;
  plan.sign = sign;
  plan.h = h;
  plan.fingerprint = psi;
  double e_zz = 0.0;
  for (const auto& t : spec.terms)
    if (t.sites.size() == 2) e_zz += term_expectation(t, psi);
  plan.log_c_total = sign * h * e_zz + 0.5 * spec.n_sites * std::log(std::cosh(h * g));
  for (int q = 0; q < spec.n_sites; ++q) {
    bool down = (idx >> q) & 1u;
    double alpha = (down ? -1.0 : 1.0) * sign * theta;
    Eigen::MatrixXcd r(2, 2);
    r << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
    LocalGate gate;
    gate.sites = {q};
    gate.matrix = r;
    plan.gates.push_back(std::move(gate));
  }
  return plan;
}

ItePlan build_ite_plan_general(const HamiltonianSpec& spec, const StateVector& psi, double h,
                               int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (psi.n_qubits() != spec.n_sites) throw std::invalid_argument("state size mismatch");
  auto factors = product_factors(psi);
  if (!factors) throw std::invalid_argument("imaginary-time construction requires a product state");
  ItePlan plan;
  plan.sign = sign;
  plan.h = h;
  plan.fingerprint = psi;
  for (const auto& term : spec.terms) {
    if (term.sites.size() > 2) throw std::invalid_argument("term support larger than 2 sites");
    const Eigen::Index d = term.matrix.rows();
    Eigen::VectorXcd loc(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      cplx x{1.0, 0.0};
      for (std::size_t j = 0; j < term.sites.size(); ++j) x *= (*factors)[term.sites[j]][(i >> j) & 1];
      loc(i) = x;
    }
    loc.normalize();
    const double e = (loc.adjoint() * term.matrix * loc)(0, 0).real();
    double cj2 = (loc.adjoint() * expm_hermitian(term.matrix, 2.0 * sign * h) * loc)(0, 0).real();
    plan.log_c_total += 0.5 * std::log(cj2);
    Eigen::VectorXcd v = cplx{0.0, 1.0} * (term.matrix * loc - e * loc);
    if (v.norm() < 1e-15) continue;
    Eigen::MatrixXcd b = v * loc.adjoint() + loc * v.adjoint();
    LocalGate gate;
    gate.sites = term.sites;
    gate.matrix = expm_hermitian(b, cplx{0.0, -sign * h});
    plan.gates.push_back(std::move(gate));
  }
  return plan;
}

}  // namespace losch
