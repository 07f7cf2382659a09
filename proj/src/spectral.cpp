#include "losch/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace losch {

double LdosSpectrum::total_weight() const {
  double s = 0.0;
  for (double d : densities) s += d;
  return s * eta;
}

LdosSpectrum ldos_dft(const std::vector<cplx>& g, double tau, const LdosOptions& options) {
  if (g.empty()) throw std::invalid_argument("empty amplitude series");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  const std::size_t K = g.size() - 1;
  std::vector<cplx> w = g;
  if (options.taper_width && K > 0) {
    const double t_max = static_cast<double>(K) * tau;
    const double width = *options.taper_width * t_max;
    for (std::size_t k = 0; k <= K; ++k) {
      double x = static_cast<double>(k) * tau / width;
      w[k] *= std::exp(-0.5 * x * x);
    }
  }
  std::vector<cplx> s;
  if (options.hermitian_extend && K > 0) {
    s.resize(2 * K);
    for (std::size_t k = 0; k < K; ++k) s[k] = w[k];
    s[K] = cplx{w[K].real(), 0.0};
    for (std::size_t k = 1; k < K; ++k) s[2 * K - k] = std::conj(w[k]);
  } else {
    s = w;
  }
  const long L = static_cast<long>(s.size());
  const double two_pi = 2.0 * std::numbers::pi;
  LdosSpectrum out;
  out.eta = two_pi / (static_cast<double>(L) * tau);
  const double center = options.center_energy.value_or(0.0);
  out.window_offset = std::lround(center / out.eta) - L / 2;

  std::vector<cplx> twiddle(static_cast<std::size_t>(L));
  for (long m = 0; m < L; ++m) twiddle[m] = std::polar(1.0, two_pi * static_cast<double>(m) / L);
  out.energies.resize(static_cast<std::size_t>(L));
  out.densities.resize(static_cast<std::size_t>(L));
  for (long j = 0; j < L; ++j) {
    const long l = out.window_offset + j;
    const long lm = ((l % L) + L) % L;
    cplx acc{0.0, 0.0};
    for (long k = 0; k < L; ++k) acc += s[k] * twiddle[(k * lm) % L];
    acc *= tau / two_pi;
    out.energies[j] = static_cast<double>(l) * out.eta;
    out.densities[j] = acc.real();
    out.imag_residue = std::max(out.imag_residue, std::abs(acc.imag()));
  }
  return out;
}

LdosSpectrum ldos_dft(const std::vector<double>& times, const std::vector<cplx>& g,
                      const LdosOptions& options) {
  if (times.size() != g.size()) throw std::invalid_argument("time and amplitude series differ in length");
  if (times.size() < 2) throw std::invalid_argument("need at least two samples to infer tau");
  const double tau = times[1] - times[0];
  for (std::size_t k = 1; k < times.size(); ++k)
    if (std::abs((times[k] - times[k - 1]) - tau) > 1e-9 * std::max(1.0, std::abs(tau)))
      throw std::invalid_argument("non-uniform time grid");
  if (options.hermitian_extend && std::abs(times[0]) > 1e-12)
    throw std::invalid_argument("Hermitian extension needs the t = 0 sample");
  return ldos_dft(g, tau, options);
}

LdosSpectrum ldos_dft(const std::vector<cplx>& g, double tau, bool hermitian_extend,
                      std::optional<double> center_energy) {
  LdosOptions o;
  o.hermitian_extend = hermitian_extend;
  o.center_energy = center_energy;
  return ldos_dft(g, tau, o);
}

LdosSpectrum exact_ldos(const DenseOracle& oracle, const StateVector& psi, double width,
                        std::optional<double> spacing) {
  if (!(width > 0.0)) throw std::invalid_argument("broadening width must be positive");
  const double de = spacing.value_or(width / 10.0);
  if (!(de > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  Eigen::VectorXcd c = oracle.coefficients(psi);
  const auto& e = oracle.energies();
  const double lo = e.minCoeff() - 6.0 * width, hi = e.maxCoeff() + 6.0 * width;
  const long n = static_cast<long>(std::ceil((hi - lo) / de)) + 1;
  LdosSpectrum out;
  out.eta = de;
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * width);
  out.energies.resize(static_cast<std::size_t>(n));
  out.densities.assign(static_cast<std::size_t>(n), 0.0);
  for (long j = 0; j < n; ++j) out.energies[j] = lo + static_cast<double>(j) * de;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double wk = std::norm(c(k));
    if (wk == 0.0) continue;
    for (long j = 0; j < n; ++j) {
      double x = (out.energies[j] - e(k)) / width;
      if (std::abs(x) < 12.0) out.densities[j] += wk * norm * std::exp(-0.5 * x * x);
    }
  }
  return out;
}

LdosSpectrum exact_ldos(const HamiltonianSpec& spec, const StateVector& psi, double width,
                        std::optional<double> spacing) {
  if (spec.n_sites > kOracleMaxSites) throw std::invalid_argument("oracle size limit");
  return exact_ldos(DenseOracle(spec), psi, width, spacing);
}

}  // namespace losch
