#include "losch/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace losch {

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need at least two points to fit");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw NumericalError("log-log fit needs positive data");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit abscissae must differ");
  return sxy / sxx;
}

std::vector<double> unwrap_phase(const std::vector<cplx>& g) {
  std::vector<double> out(g.size());
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double a = std::arg(g[k]);
    if (k > 0) a += two_pi * std::round((out[k - 1] - a) / two_pi);
    out[k] = a;
  }
  return out;
}

ScalingResult run_scaling(const ScalingConfig& cfg) {
  if (cfg.n_values.empty() || cfg.values.empty()) throw std::invalid_argument("sweep lists are empty");
  ScalingResult res;
  res.collapse_power = cfg.sweep == SweepKind::H ? 2.0 : static_cast<double>(cfg.order);
  for (int n : cfg.n_values) {
    if (n > kOracleMaxSites) throw std::invalid_argument("oracle size limit");
    const HamiltonianSpec spec = tfim(n, cfg.J, cfg.g);
    const DenseOracle oracle(spec);
    const StateVector psi = product_state(std::vector<std::string>(static_cast<std::size_t>(n), "up"));
    for (double v : cfg.values) {
      if (!(v > 0.0)) throw std::invalid_argument("sweep values must be positive");
      PhaseExperimentConfig pc;
      pc.model = spec;
      pc.psi = psi;
      pc.tau = cfg.sweep == SweepKind::H ? cfg.fixed : v;
      pc.h = cfg.sweep == SweepKind::H ? v : cfg.fixed;
      pc.order = cfg.order;
      pc.t_max = cfg.t_window;
      pc.rule = cfg.rule;
      pc.backend = Backend::StatevectorTrotter;
      pc.threads = cfg.threads;
      const PhaseTrace tr = run_phase_experiment(pc);

      std::vector<cplx> exact(tr.size());
      for (std::size_t k = 0; k < tr.size(); ++k)
        exact[k] = oracle.amplitude(psi, psi, cplx{tr.times[k], 0.0});
      const auto phi_exact = unwrap_phase(exact);
      ScalingPoint pt;
      pt.n = n;
      pt.value = v;
      pt.times = tr.times;
      pt.delta_phi.resize(tr.size());
      for (std::size_t k = 0; k < tr.size(); ++k) {
        pt.delta_phi[k] = std::abs(tr.phi[k] - phi_exact[k]);
        pt.max_delta_phi = std::max(pt.max_delta_phi, pt.delta_phi[k]);
      }
      pt.collapsed = pt.max_delta_phi / (n * std::pow(v, res.collapse_power));
      res.points.push_back(std::move(pt));
    }
  }

  const std::size_t nv = cfg.values.size();
  if (nv >= 2) {
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
      std::vector<double> y;
      for (std::size_t j = 0; j < nv; ++j) y.push_back(res.points[i * nv + j].max_delta_phi);
      res.fits.push_back({cfg.n_values[i], log_log_slope(cfg.values, y)});
    }
  }
  for (std::size_t j = 0; j < nv; ++j) {
    double lo = INFINITY, hi = -INFINITY, mean = 0.0;
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
      double c = res.points[i * nv + j].collapsed;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      mean += c / static_cast<double>(cfg.n_values.size());
    }
    res.spreads.push_back({cfg.values[j], mean > 0.0 ? (hi - lo) / mean : 0.0});
  }
  return res;
}

}  // namespace losch
