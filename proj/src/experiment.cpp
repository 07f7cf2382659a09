#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "losch/ite.hpp"
#include "losch/phase.hpp"
#include "losch/rng.hpp"
#include "losch/trotter.hpp"

namespace losch {

int grid_size(double t_max, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be nonnegative");
  return static_cast<int>(std::floor(t_max / tau + 1e-9));
}

namespace {

ItePlan make_ite(const PhaseExperimentConfig& cfg, int sign) {
  if (cfg.ite_mode == IteMode::TfimClosedForm) return build_ite_plan_tfim(cfg.model, cfg.psi, cfg.h, sign);
  return build_ite_plan_general(cfg.model, cfg.psi, cfg.h, sign);
}

void sample_all(ChannelData& d, int shots, std::uint64_t seed) {
  if (shots <= 0) return;
  std::array<std::vector<double>*, 3> ch{&d.p0, &d.p_plus, &d.p_minus};
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < ch[c]->size(); ++k) {
      Rng rng = make_stream(seed, {kTagShots, k, c});
      (*ch[c])[k] = sample_shots(std::min(1.0, std::max(0.0, (*ch[c])[k])), shots, rng);
    }
}

}  // namespace

ChannelData measure_channels(const PhaseExperimentConfig& cfg) {
  cfg.model.validate();
  if (cfg.psi.n_qubits() != cfg.model.n_sites) throw std::invalid_argument("state size mismatch");
  if (!(cfg.h > 0.0)) throw std::invalid_argument("h must be positive");
  const StateVector& psi_f = cfg.psi_final ? *cfg.psi_final : cfg.psi;
  if (psi_f.n_qubits() != cfg.model.n_sites) throw std::invalid_argument("final state size mismatch");
  const int K = grid_size(cfg.t_max, cfg.tau);
  const std::size_t n = static_cast<std::size_t>(K) + 1;

  ChannelData d;
  d.p0.assign(n, 0.0);
  d.p_plus.assign(n, 0.0);
  d.p_minus.assign(n, 0.0);

  if (cfg.backend == Backend::ExactOracle) {
    DenseOracle oracle(cfg.model);
    const double cp = oracle.imaginary_norm(cfg.psi, cfg.h);
    const double cm = oracle.imaginary_norm(cfg.psi, -cfg.h);
    d.log_c_plus.assign(n, std::log(cp));
    d.log_c_minus.assign(n, std::log(cm));
    parallel_for(n, cfg.threads, [&](std::size_t k) {
      const double t = static_cast<double>(k) * cfg.tau;
      d.p0[k] = std::norm(oracle.amplitude(psi_f, cfg.psi, cplx{t, 0.0}));
      d.p_plus[k] = std::norm(oracle.amplitude(psi_f, cfg.psi, cplx{t, cfg.h}) / cp);
      d.p_minus[k] = std::norm(oracle.amplitude(psi_f, cfg.psi, cplx{t, -cfg.h}) / cm);
    });
    sample_all(d, cfg.shots, cfg.seed);
    return d;
  }

  const ItePlan ite_p = make_ite(cfg, +1);
  const ItePlan ite_m = make_ite(cfg, -1);
  d.log_c_plus.assign(n, ite_p.log_c_total);
  d.log_c_minus.assign(n, ite_m.log_c_total);

  if (cfg.backend == Backend::StatevectorTrotter) {
    PlanOptions opts;
    opts.merge_half_layers = cfg.merge_half_layers;
    const TrotterPlan plan = build_plan(cfg.model, K * cfg.tau, cfg.tau, cfg.order, opts);
    std::array<std::vector<double>*, 3> out{&d.p0, &d.p_plus, &d.p_minus};
    parallel_for(3, cfg.threads, [&](std::size_t c) {
      StateVector start = c == 0 ? cfg.psi : (c == 1 ? ite_p : ite_m).apply(cfg.psi);
      TrotterStepper stepper(plan, std::move(start));
      for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) stepper.advance();
        (*out[c])[k] = std::norm(inner_product(psi_f, stepper.state()));
      }
    });
    sample_all(d, cfg.shots, cfg.seed);
    return d;
  }

  if (!cfg.noise) throw std::invalid_argument("noisy backend requires a noise block");
  const NoiseConfig& noise = *cfg.noise;
  noise.validate();
  if (cfg.merge_half_layers) throw std::invalid_argument("half-layer merging is not allowed with noise");
  const TrotterPlan plan = build_plan(cfg.model, K * cfg.tau, cfg.tau, cfg.order);
  const int N = cfg.model.n_sites;
  NoiseColumns cols;
  for (auto* v : {&cols.p_plus_raw, &cols.p_minus_raw, &cols.p_plus_mitigated, &cols.p_minus_mitigated,
                  &cols.r2_raw, &cols.r2_mitigated})
    v->assign(n, 0.0);
  cols.clamped.assign(n, 0);
  cols.depth_zero.assign(n, 0);
  cols.depth_plus.assign(n, 0);
  cols.depth_minus.assign(n, 0);
  std::vector<double> raw(3 * n), mit(3 * n);
  std::vector<int> depth(3 * n), clamped(3 * n);
  const Circuit ite_c[3] = {Circuit{}, ite_p.circuit(), ite_m.circuit()};

  parallel_for(3 * n, cfg.threads, [&](std::size_t job) {
    const std::size_t k = job / 3, c = job % 3;
    Circuit circ = ite_c[c];
    circ.append(plan.circuit(static_cast<int>(k)));
    if (cfg.fuse_layers) circ = fuse_single_site_gates(circ);
    auto res = run_noisy_probability(circ, cfg.psi, psi_f, noise, job, 1);
    double p = res.p_hat;
    if (noise.shots > 0) {
      Rng rng = make_stream(noise.master_seed, {kTagShots, k, c});
      p = sample_shots(std::min(1.0, std::max(0.0, p)), noise.shots, rng);
    }
    raw[job] = p;
    depth[job] = res.depth;
    auto m = mitigate_rescale(p, noise.gamma, N, res.depth);
    mit[job] = m.value;
    clamped[job] = m.clamped ? 1 : 0;
  });
  for (std::size_t k = 0; k < n; ++k) {
    cols.r2_raw[k] = raw[3 * k];
    cols.p_plus_raw[k] = raw[3 * k + 1];
    cols.p_minus_raw[k] = raw[3 * k + 2];
    cols.r2_mitigated[k] = mit[3 * k];
    cols.p_plus_mitigated[k] = mit[3 * k + 1];
    cols.p_minus_mitigated[k] = mit[3 * k + 2];
    cols.depth_zero[k] = depth[3 * k];
    cols.depth_plus[k] = depth[3 * k + 1];
    cols.depth_minus[k] = depth[3 * k + 2];
    cols.clamped[k] = clamped[3 * k] | clamped[3 * k + 1] | clamped[3 * k + 2];
    d.p0[k] = mit[3 * k];
    d.p_plus[k] = mit[3 * k + 1];
    d.p_minus[k] = mit[3 * k + 2];
  }
  d.noise = std::move(cols);
  return d;
}

PhaseTrace reconstruct(const ChannelData& data, const PhaseExperimentConfig& cfg) {
  PhaseTrace tr;
  tr.tau = cfg.tau;
  tr.h = cfg.h;
  tr.rule = cfg.rule;
  tr.anchor = cfg.anchor;
  const std::size_t n = data.p0.size();
  tr.times.resize(n);
  tr.r.resize(n);
  tr.dphi_dt.resize(n);
  tr.p_plus = data.p_plus;
  tr.p_minus = data.p_minus;
  tr.log_c_plus = data.log_c_plus;
  tr.log_c_minus = data.log_c_minus;
  tr.noise = data.noise;
  std::vector<int> bad;
  for (std::size_t k = 0; k < n; ++k) {
    tr.times[k] = static_cast<double>(k) * cfg.tau;
    tr.r[k] = std::sqrt(data.p0[k]);
    if (data.p_plus[k] > 0.0 && data.p_minus[k] > 0.0) {
      double lm = 0.5 * std::log(data.p_minus[k]) + data.log_c_minus[k];
      double lp = 0.5 * std::log(data.p_plus[k]) + data.log_c_plus[k];
      tr.dphi_dt[k] = finite_difference_from_logs(lm, lp, cfg.h);
    } else {
      tr.dphi_dt[k] = std::nan("");
      bad.push_back(static_cast<int>(k));
    }
  }
  tr.i_factor = running_i_factor(tr.p_plus, tr.p_minus, cfg.tau, cfg.rule);

  auto fail_on = [&](int k) {
    std::ostringstream msg;
    msg << "zero probability at t = " << tr.times[k] << "; zero-region: use zero-correction path";
    throw NumericalError(msg.str());
  };
  if (n == 1) {
    if (!bad.empty()) fail_on(bad.front());
    assemble_amplitude(tr);
    return tr;
  }
  if (!cfg.zero_correction) {
    if (!bad.empty()) fail_on(bad.front());
    assemble_amplitude(tr);
    return tr;
  }
  int shots = cfg.shots;
  if (cfg.backend == Backend::Noisy && cfg.noise) shots = cfg.noise->shots;
  const double thr = cfg.zero_threshold ? *cfg.zero_threshold : default_zero_threshold(shots);
  auto zeros = detect_zeros(tr, thr);
  for (int k : bad)
    if (std::find(zeros.begin(), zeros.end(), k) == zeros.end()) fail_on(k);
  if (zeros.empty()) {
    assemble_amplitude(tr);
    return tr;
  }
  return correct_phase_jumps(tr, zeros, thr);
}

PhaseTrace run_phase_experiment(const PhaseExperimentConfig& cfg) {
  return reconstruct(measure_channels(cfg), cfg);
}

}  // namespace losch
