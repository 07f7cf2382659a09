#include "losch/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "losch/circuit.hpp"
#include "losch/ite.hpp"
#include "losch/local_ops.hpp"
#include "losch/noise.hpp"
#include "losch/trotter.hpp"

namespace losch {

HadamardResult hadamard_test(const HamiltonianSpec& spec, const StateVector& psi, double t,
                             double tau, int order, Part part, int shots, Rng* rng) {
  if (psi.n_qubits() != spec.n_sites) throw std::invalid_argument("state size mismatch");
  const int n = spec.n_sites;
  const TrotterPlan plan = build_plan(spec, t, tau, order);
  std::vector<cplx> amp(std::size_t{1} << (n + 1), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < psi.size(); ++i) amp[i] = psi[i];
  StateVector s(n + 1, std::move(amp));

  const double r2 = 1.0 / std::sqrt(2.0);
  LocalGate had;
  had.sites = {n};
  had.matrix = Eigen::MatrixXcd(2, 2);
  had.matrix << r2, r2, r2, -r2;
  apply_gate_inplace(s, had);
  if (part == Part::Imag) {
    LocalGate sdg;
    sdg.sites = {n};
    sdg.matrix = Eigen::MatrixXcd(2, 2);
    sdg.matrix << 1, 0, 0, cplx(0, -1);
    apply_gate_inplace(s, sdg);
  }
  for (const auto& layer : plan.circuit().layers)
    for (const auto& g : layer) apply_controlled_gate_inplace(s, g, n);
  apply_gate_inplace(s, had);

  HadamardResult res;
  const std::size_t half = std::size_t{1} << n;
  for (std::size_t i = 0; i < half; ++i) res.p0 += std::norm(s[i]);
  res.p0 = std::min(1.0, res.p0);
  double p = res.p0;
  if (shots > 0) {
    if (!rng) throw std::invalid_argument("sampling requires a random stream");
    p = sample_shots(p, shots, *rng);
  }
  res.estimate = 2.0 * p - 1.0;
  return res;
}

namespace {

bool differ_by_one_site(const StateVector& a, const StateVector& b) {
  auto fa = product_factors(a), fb = product_factors(b);
  if (!fa || !fb) return false;
  int diff = 0;
  for (std::size_t q = 0; q < fa->size(); ++q) {
    cplx ov = std::conj((*fa)[q][0]) * (*fb)[q][0] + std::conj((*fa)[q][1]) * (*fb)[q][1];
    if (std::abs(std::abs(ov) - 1.0) > 1e-9) ++diff;
  }
  return diff == 1;
}

bool is_real_state(const StateVector& s) {
  for (const auto& a : s.amplitudes())
    if (a.imag() != 0.0) return false;
  return true;
}

StateVector superpose(const StateVector& a, const StateVector& b, double theta) {
  StateVector s = a;
  const cplx ph = std::polar(1.0, theta);
  const double w = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = w * (a[i] + ph * b[i]);
  return s;
}

}  // namespace

InterferometryResult sequential_interferometry(const HamiltonianSpec& spec,
                                               const std::vector<StateVector>& seq, double t,
                                               double tau, int order, double phi_anchor,
                                               const InterferometryOptions& opt) {
  if (seq.empty()) throw std::invalid_argument("state sequence is empty");
  if (!spec.is_real()) throw std::invalid_argument("interferometry chain requires a real Hamiltonian");
  for (const auto& s : seq) {
    if (s.n_qubits() != spec.n_sites) throw std::invalid_argument("state size mismatch");
    if (!is_real_state(s)) throw std::invalid_argument("interferometry chain requires real product states");
  }
  for (std::size_t j = 1; j < seq.size(); ++j)
    if (!differ_by_one_site(seq[j - 1], seq[j]))
      throw std::invalid_argument("consecutive states must be product states differing on one site");

  const TrotterPlan plan = build_plan(spec, t, tau, order);
  auto U = [&](const StateVector& s) { return evolve(s, plan); };
  std::uint64_t mcount = 0;
  auto measure = [&](std::size_t step, double p) {
    p = std::min(1.0, std::max(0.0, p));
    if (opt.shots <= 0) return p;
    Rng rng = make_stream(opt.seed, {kTagInterferometry, step, mcount++});
    return sample_shots(p, opt.shots, rng);
  };

  InterferometryResult res;
  double phi = phi_anchor;
  const auto [th0, th1] = opt.thetas;
  // Solves r1^2 + r2^2 + 2 r1 r2 cos(x + theta) = scale * P for x at two angles.
  auto solve = [&](double pa, double pb, double scale, double r1, double r2) {
    double ca = (scale * pa - r1 * r1 - r2 * r2) / (2.0 * r1 * r2);
    double cb = (scale * pb - r1 * r1 - r2 * r2) / (2.0 * r1 * r2);
    // ca = cos(x + th0), cb = cos(x + th1)  =>  linear system in cos x, sin x.
    double a11 = std::cos(th0), a12 = -std::sin(th0), a21 = std::cos(th1), a22 = -std::sin(th1);
    double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-12) throw std::invalid_argument("interferometry angles must differ");
    double cx = (ca * a22 - a12 * cb) / det;
    double sx = (a11 * cb - a21 * ca) / det;
    return std::atan2(sx, cx);
  };

  for (std::size_t j = 1; j < seq.size(); ++j) {
    const StateVector& a = seq[j - 1];
    const StateVector& b = seq[j];
    const StateVector ua = U(a), ub = U(b);
    InterferometryStep st;
    st.r_ii = std::sqrt(measure(j, std::norm(inner_product(a, ua))));
    st.r_ij = std::sqrt(measure(j, std::norm(inner_product(a, ub))));
    st.r_jj = std::sqrt(measure(j, std::norm(inner_product(b, ub))));
    if (st.r_ij >= opt.fallback_threshold && st.r_ii > 0.0 && st.r_jj > 0.0) {
      StateVector u0 = U(superpose(a, b, th0)), u1 = U(superpose(a, b, th1));
      double p1a = measure(j, std::norm(inner_product(a, u0)));
      double p1b = measure(j, std::norm(inner_product(a, u1)));
      st.phi_ij = phi + solve(p1a, p1b, 2.0, st.r_ii, st.r_ij);
      double p2a = measure(j, std::norm(inner_product(b, u0)));
      double p2b = measure(j, std::norm(inner_product(b, u1)));
      st.phi_jj = st.phi_ij + solve(p2a, p2b, 2.0, st.r_jj, st.r_ij);
      st.inv_r_tilde2 = 1.0 / (st.r_ii * st.r_ij) + 1.0 / (st.r_ij * st.r_jj);
    } else {
      if (st.r_ii * st.r_jj < opt.fallback_threshold * opt.fallback_threshold)
        throw NumericalError("unresolvable step");
      st.fallback = true;
      st.phi_ij = std::nan("");
      const StateVector ref = superpose(a, b, 0.0);
      double pa = measure(j, std::norm(inner_product(ref, U(superpose(a, b, th0)))));
      double pb = measure(j, std::norm(inner_product(ref, U(superpose(a, b, th1)))));
      st.phi_jj = phi + solve(pa, pb, 4.0, st.r_ii, st.r_jj);
      st.inv_r_tilde2 = 1.0 / (st.r_ii * st.r_jj);
    }
    phi = st.phi_jj;
    res.steps.push_back(st);
  }
  res.phi_final = phi;
  if (!res.steps.empty()) {
    double s = 0.0;
    for (const auto& st : res.steps) s += st.inv_r_tilde2;
    res.i_tilde = s / static_cast<double>(res.steps.size());
  }
  return res;
}

void CostInput::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (p != 1 && p != 2 && p != 4) throw std::invalid_argument("p must be 1, 2 or 4");
  if (!(d >= 1.0)) throw std::invalid_argument("d must be >= 1");
  if (!(N >= 1.0)) throw std::invalid_argument("N must be >= 1");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (!(I > 0.0)) throw std::invalid_argument("I must be positive");
}

CostEstimate resource_cost(const CostInput& in) {
  in.validate();
  const double ip = 1.0 / in.p;
  const double e_depth = std::pow(in.epsilon, -ip);
  CostEstimate c;
  switch (in.method) {
    case CostMethod::Hadamard:
      c.depth = std::pow(in.t, 1.0 + ip) * std::pow(in.N, 1.0 + 1.0 / in.d + ip) * e_depth;
      c.measurements = 1.0 / (in.epsilon * in.epsilon);
      break;
    case CostMethod::Sequential:
      c.depth = std::pow(in.r, ip) * std::pow(in.t, 1.0 + ip) * std::pow(in.N, 2.0 * ip) * e_depth;
      c.measurements = in.I * in.I * in.r * in.r * in.N * in.N / (in.epsilon * in.epsilon);
      break;
    case CostMethod::ThisWork:
      c.depth = std::pow(in.r, ip) * std::pow(in.t, 1.0 + 2.0 * ip) * std::pow(in.N, ip) * e_depth;
      c.measurements = in.I * in.I * std::pow(in.r, 3) * std::pow(in.t, 3) * in.N /
                       std::pow(in.epsilon, 3);
      break;
    case CostMethod::Magnitude:
      c.depth = std::pow(in.t, 1.0 + ip) * std::pow(in.N, ip) * e_depth;
      c.measurements = 1.0 / (in.epsilon * in.epsilon);
      break;
  }
  return c;
}

std::string to_string(CostMethod m) {
  switch (m) {
    case CostMethod::Hadamard:
      return "hadamard";
    case CostMethod::Sequential:
      return "sequential";
    case CostMethod::ThisWork:
      return "this_work";
    case CostMethod::Magnitude:
      return "magnitude";
  }
  return "?";
}

CostMethod cost_method_from_string(const std::string& s) {
  if (s == "hadamard") return CostMethod::Hadamard;
  if (s == "sequential") return CostMethod::Sequential;
  if (s == "this_work") return CostMethod::ThisWork;
  if (s == "magnitude") return CostMethod::Magnitude;
  throw std::invalid_argument("unknown cost method '" + s + "'");
}

}  // namespace losch
