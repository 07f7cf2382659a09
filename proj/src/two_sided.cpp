#include <array>
#include <cmath>
#include <stdexcept>

#include "losch/ite.hpp"
#include "losch/local_ops.hpp"
#include "losch/phase.hpp"
#include "losch/rng.hpp"
#include "losch/trotter.hpp"

namespace losch {

cplx exact_two_sided(const DenseOracle& oracle, const StateVector& psi_final, const LocalGate& op,
                     const StateVector& psi, double t_prime, double u, bool symmetric) {
  const double s = symmetric ? 0.5 : 1.0;
  StateVector ket = oracle.evolve(psi, cplx{t_prime + s * u, 0.0});
  apply_gate_inplace(ket, op);
  StateVector bra = oracle.evolve(psi_final, cplx{t_prime - (1.0 - s) * u, 0.0});
  return inner_product(bra, ket);
}

namespace {

ItePlan side_ite(const PhaseExperimentConfig& cfg, const StateVector& psi, double h, int sign) {
  if (cfg.ite_mode == IteMode::TfimClosedForm) return build_ite_plan_tfim(cfg.model, psi, h, sign);
  return build_ite_plan_general(cfg.model, psi, h, sign);
}

}  // namespace

PhaseTrace run_two_sided_experiment(const TwoSidedConfig& tc) {
  const PhaseExperimentConfig& cfg = tc.base;
  cfg.model.validate();
  const StateVector& psi = cfg.psi;
  const StateVector& psi_f = cfg.psi_final ? *cfg.psi_final : cfg.psi;
  if (psi.n_qubits() != cfg.model.n_sites || psi_f.n_qubits() != cfg.model.n_sites)
    throw std::invalid_argument("state size mismatch");
  if (!product_factors(psi) || !product_factors(psi_f))
    throw std::invalid_argument("two-sided amplitude requires product states");
  if (cfg.backend == Backend::Noisy)
    throw std::invalid_argument("two-sided amplitude supports exact_oracle and statevector_trotter only");
  if (!(cfg.h > 0.0)) throw std::invalid_argument("h must be positive");
  if (!(tc.t_prime >= 0.0)) throw std::invalid_argument("t_prime must be nonnegative");
  validate_gate(tc.op, cfg.model.n_sites);
  if (!is_unitary(tc.op.matrix, 1e-10)) throw std::invalid_argument("operator A must be unitary");

  const double s = tc.symmetric ? 0.5 : 1.0;
  const double h_ket = s * cfg.h, h_bra = (1.0 - s) * cfg.h;
  const double tau_T = s * cfg.tau;
  const int K = grid_size(cfg.t_max, cfg.tau);
  const std::size_t n = static_cast<std::size_t>(K) + 1;

  ChannelData d;
  d.p0.assign(n, 0.0);
  d.p_plus.assign(n, 0.0);
  d.p_minus.assign(n, 0.0);
  d.log_c_plus.assign(n, 0.0);
  d.log_c_minus.assign(n, 0.0);
  std::array<std::vector<double>*, 3> out{&d.p0, &d.p_plus, &d.p_minus};
  const int signs[3] = {0, 1, -1};

  std::optional<DenseOracle> oracle;
  bool need_oracle = cfg.backend == Backend::ExactOracle || !tc.anchor;
  if (need_oracle) oracle.emplace(cfg.model);

  if (cfg.backend == Backend::ExactOracle) {
    double log_c[3] = {0.0, 0.0, 0.0};
    for (int c = 1; c < 3; ++c)
      log_c[c] = std::log(oracle->imaginary_norm(psi, signs[c] * h_ket)) +
                 std::log(oracle->imaginary_norm(psi_f, signs[c] * h_bra));
    parallel_for(3 * n, cfg.threads, [&](std::size_t job) {
      const std::size_t k = job / 3, c = job % 3;
      const double u = static_cast<double>(k) * cfg.tau;
      const double sg = signs[c];
      StateVector ket = oracle->evolve(psi, cplx{tc.t_prime + s * u, sg * h_ket});
      apply_gate_inplace(ket, tc.op);
      StateVector bra = oracle->evolve(psi_f, cplx{tc.t_prime - (1.0 - s) * u, sg * h_bra});
      (*out[c])[k] = std::norm(inner_product(bra, ket)) / std::exp(2.0 * log_c[c]);
    });
    d.log_c_plus.assign(n, log_c[1]);
    d.log_c_minus.assign(n, log_c[2]);
  } else {
    const TrotterPlan fwd = build_plan(cfg.model, tc.t_prime, tau_T, cfg.order);
    PlanOptions rev_opts;
    rev_opts.reverse = true;
    const TrotterPlan bwd = build_plan(cfg.model, 0.0, tau_T, cfg.order, rev_opts);
    const int n_prime = fwd.n_steps();
    double log_c[3] = {0.0, 0.0, 0.0};
    std::array<StateVector, 3> ket0{psi, psi, psi}, bra0{psi_f, psi_f, psi_f};
    for (int c = 1; c < 3; ++c) {
      ItePlan pk = side_ite(cfg, psi, h_ket, signs[c]);
      ket0[c] = pk.apply(psi);
      log_c[c] += pk.log_c_total;
      if (h_bra > 0.0) {
        ItePlan pb = side_ite(cfg, psi_f, h_bra, signs[c]);
        bra0[c] = pb.apply(psi_f);
        log_c[c] += pb.log_c_total;
      }
    }
    parallel_for(3, cfg.threads, [&](std::size_t c) {
      TrotterStepper ket(fwd, ket0[c]);
      for (int j = 0; j < n_prime; ++j) ket.advance();
      if (!tc.symmetric) {
        StateVector bra = evolve(bra0[c], fwd);
        for (std::size_t k = 0; k < n; ++k) {
          if (k > 0) ket.advance();
          StateVector x = ket.state();
          apply_gate_inplace(x, tc.op);
          (*out[c])[k] = std::norm(inner_product(bra, x));
        }
        return;
      }
      TrotterStepper back(bwd, bra0[c]);
      for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
          ket.advance();
          back.advance();
        }
        StateVector x = ket.state();
        apply_gate_inplace(x, tc.op);
        TrotterStepper bra(fwd, back.state());
        for (int j = 0; j < n_prime; ++j) bra.advance();
        (*out[c])[k] = std::norm(inner_product(bra.state(), x));
      }
    });
    d.log_c_plus.assign(n, log_c[1]);
    d.log_c_minus.assign(n, log_c[2]);
  }

  PhaseExperimentConfig rc = cfg;
  rc.anchor = tc.anchor ? *tc.anchor
                        : std::arg(exact_two_sided(*oracle, psi_f, tc.op, psi, tc.t_prime, 0.0,
                                                   tc.symmetric));
  return reconstruct(d, rc);
}

}  // namespace losch
