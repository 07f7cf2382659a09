#include "losch/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace losch {

double finite_difference_log(double r_minus, double r_plus, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  if (!(r_minus > 0.0) || !(r_plus > 0.0))
    throw NumericalError("zero-region: use zero-correction path");
  return (std::log(r_minus) - std::log(r_plus)) / (2.0 * h);
}

double finite_difference_from_logs(double log_r_minus, double log_r_plus, double h) {
  return (log_r_minus - log_r_plus) / (2.0 * h);
}

std::vector<double> integrate_phase(const std::vector<double>& d, double tau, Rule rule,
                                    double anchor) {
  if (d.size() < 2) throw std::invalid_argument("phase integration needs >= 2 samples");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  std::vector<double> phi(d.size());
  phi[0] = anchor;
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (rule == Rule::Simpson && k % 2 == 0)
      phi[k] = phi[k - 2] + tau / 3.0 * (d[k - 2] + 4.0 * d[k - 1] + d[k]);
    else if (rule == Rule::Simpson)
      phi[k] = phi[k - 1] + 0.5 * tau * (d[k - 1] + d[k]);
    else
      phi[k] = phi[k - 1] + 0.5 * tau * (d[k - 1] + d[k]);
  }
  return phi;
}

std::vector<double> running_i_factor(const std::vector<double>& p_plus,
                                     const std::vector<double>& p_minus, double tau, Rule rule) {
  std::vector<double> f(p_plus.size());
  for (std::size_t k = 0; k < f.size(); ++k)
    f[k] = 1.0 / std::sqrt(p_plus[k]) + 1.0 / std::sqrt(p_minus[k]);
  if (f.size() < 2) return f;
  auto integral = integrate_phase(f, tau, rule, 0.0);
  std::vector<double> out(f.size());
  out[0] = f[0];
  for (std::size_t k = 1; k < f.size(); ++k) out[k] = integral[k] / (static_cast<double>(k) * tau);
  return out;
}

double default_zero_threshold(int shots) {
  if (shots <= 0) return 1e-3;
  return std::max(1e-3, 10.0 / std::sqrt(static_cast<double>(shots)));
}

std::vector<int> detect_zeros(const PhaseTrace& trace, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("zero threshold must be positive");
  std::vector<int> out;
  const auto& r = trace.r;
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!(r[k] < threshold)) continue;
    bool left_ok = k == 0 || r[k] < r[k - 1];
    bool right_ok = k + 1 == n || r[k] <= r[k + 1];
    if (left_ok && right_ok && n > 1) out.push_back(static_cast<int>(k));
  }
  return out;
}

namespace {

double wrap(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

// d ln G / dt at sample k. The real part is a one-sided difference of ln r
// taken away from the zero (dir = -1 uses k - 1, dir = +1 uses k + 1); the
// imaginary part is the measured phase derivative.
cplx log_derivative(const PhaseTrace& tr, int k, int dir) {
  const double lr = (std::log(tr.r[k]) - std::log(tr.r[k + dir])) / (-dir * tr.tau);
  return {lr, tr.dphi_dt[k]};
}

// Near a zero of order n, |G|^(2/n) ~ c ((t - t0)^2 + eps^2). The fit uses
// the four samples a - 1 .. a + 2. It is only trusted when the quadratic
// describes the samples; a coarse grid that does not resolve the dip fails
// this and falls back to finite differences.
struct ZeroFit {
  double t0 = 0.0;
  double eps2 = 0.0;
  bool ok = false;
};

constexpr double kFitTolerance = 0.05;  // relative rms residual

ZeroFit fit_zero(const PhaseTrace& tr, int a, int order) {
  double y[4], y0 = 0.0, y1 = 0.0, y2 = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double s = j - 1.5;
    y[j] = std::pow(tr.r[a - 1 + j], 2.0 / order);
    y0 += y[j];
    y1 += s * y[j];
    y2 += s * s * y[j];
  }
  // Normal equations for s in {-1.5, -0.5, 0.5, 1.5}.
  const double c2 = (4.0 * y2 - 5.0 * y0) / 16.0;
  const double c1 = y1 / 5.0;
  const double c0 = (10.25 * y0 - 5.0 * y2) / 16.0;
  double res = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double s = j - 1.5;
    res += std::pow(c0 + c1 * s + c2 * s * s - y[j], 2);
  }
  ZeroFit f;
  if (!(c2 > 0.0) || !(std::sqrt(res) <= kFitTolerance * y0 / 2.0)) return f;
  const double s0 = -c1 / (2.0 * c2);
  f.t0 = 0.5 * (tr.times[a] + tr.times[a + 1]) + s0 * tr.tau;
  f.eps2 = std::max(0.0, (c0 - c1 * c1 / (4.0 * c2)) / c2) * tr.tau * tr.tau;
  f.ok = std::isfinite(f.t0);
  return f;
}

struct DerivativePhase {
  double arg = 0.0;  // arg G^{(n)} - arg G
  double rate = 0.0;  // d arg G^{(n)} / dt
};

// From G'/G = L and G''/G = L' + L^2. Re L, Re L' and Re L'' come from the fit
// when there is one, otherwise from one-sided differences (L'' = 0). Im L is
// the measured d phi/dt and Im L'' is dropped.
DerivativePhase derivative_phase(const PhaseTrace& tr, int k, int dir, int order, const ZeroFit& f) {
  DerivativePhase d;
  d.rate = tr.dphi_dt[k];
  cplx L, dL, ddL;
  if (f.ok) {
    const double x = tr.times[k] - f.t0;
    const double q = x * x + f.eps2;
    if (q == 0.0) {
      // Sample on the zero: limits of the expressions below as x -> 0.
      d.arg = order == 1 && dir < 0 ? std::numbers::pi : 0.0;
      d.rate *= order + 1;
      return d;
    }
    L = {order * x / q, tr.dphi_dt[k]};
    dL = {order * (f.eps2 - x * x) / (q * q), (tr.dphi_dt[k] - tr.dphi_dt[k + dir]) / (-dir * tr.tau)};
    ddL = order * 2.0 * x * (x * x - 3.0 * f.eps2) / (q * q * q);
  } else {
    L = log_derivative(tr, k, dir);
    dL = (L - log_derivative(tr, k + dir, dir)) / (-dir * tr.tau);
  }
  if (order == 1) {
    d.arg = std::arg(L);
    d.rate += std::imag(dL / L);
  } else {
    const cplx m = dL + L * L;
    d.arg = std::arg(m);
    d.rate += std::imag((ddL + 2.0 * L * dL) / m);
  }
  return d;
}

}  // namespace

void assemble_amplitude(PhaseTrace& trace) {
  if (trace.size() == 1)
    trace.phi = {trace.anchor};
  else
    trace.phi = integrate_phase(trace.dphi_dt, trace.tau, trace.rule, trace.anchor);
  trace.g.resize(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) trace.g[k] = std::polar(trace.r[k], trace.phi[k]);
}

PhaseTrace correct_phase_jumps(const PhaseTrace& trace, const std::vector<int>& crossings,
                               double threshold) {
  PhaseTrace out = trace;
  out.crossings.clear();
  const int n = static_cast<int>(trace.size());
  std::set<int> zs(crossings.begin(), crossings.end());
  if (zs.empty() || n < 2) {
    if (out.phi.size() != trace.size()) assemble_amplitude(out);
    return out;
  }
  for (int c : zs)
    if (c < 0 || c >= n) throw std::invalid_argument("crossing index out of range");

  // The zero lies between the crossing sample and its smaller neighbour;
  // a and b = a + 1 are the closest samples on either side.
  std::vector<int> cuts;
  for (int c : zs) {
    int a = c;
    if (c == n - 1 || (c > 0 && trace.r[c - 1] < trace.r[c + 1])) a = c - 1;
    cuts.push_back(a);
  }

  std::vector<double> phi(n, trace.anchor);
  int start = 0;
  double start_phase = trace.anchor;
  auto integrate_segment = [&](int a, int b) {
    if (b == a) {
      phi[a] = start_phase;
      return;
    }
    std::vector<double> d(trace.dphi_dt.begin() + a, trace.dphi_dt.begin() + b + 1);
    auto seg = integrate_phase(d, trace.tau, trace.rule, start_phase);
    std::copy(seg.begin(), seg.end(), phi.begin() + a);
  };
  auto clear_of_other_cuts = [&](int lo, int hi, int self) {
    if (lo < 0 || hi >= n) return false;
    for (int a : cuts)
      if (a != self && a + 1 >= lo && a <= hi) return false;
    return true;
  };

  std::size_t i = 0;
  for (int c : zs) {
    const int a = cuts[i++];
    const int b = a + 1;
    Crossing x;
    x.index = c;
    if (a < start) {
      out.warnings.push_back("overlapping crossings near t = " + std::to_string(trace.times[c]) + "; skipped");
      out.crossings.push_back(x);
      continue;
    }
    integrate_segment(start, a);
    const double raw_b = phi[a] + 0.5 * trace.tau * (trace.dphi_dt[a] + trace.dphi_dt[b]);
    start = b;
    start_phase = raw_b;

    std::ostringstream where;
    where << "crossing at t = " << trace.times[c];
    if (!clear_of_other_cuts(a - 1, b + 1, a)) {
      out.warnings.push_back(where.str() + " too close to a boundary or another crossing; skipped");
      out.crossings.push_back(x);
      continue;
    }
    // |G'| ~ r |L|, which vanishes with r at a sample on the zero itself.
    auto slope = [&](int k, int dir) { return trace.r[k] == 0.0 ? 0.0 : trace.r[k] * std::abs(log_derivative(trace, k, dir)); };
    const double ga = slope(a, -1);
    const double gb = slope(b, +1);
    if (ga < threshold && gb < threshold) x.order = 2;
    const ZeroFit fit = fit_zero(trace, a, x.order);
    if (!fit.ok && !clear_of_other_cuts(a - 2, b + 2, a)) {
      out.warnings.push_back(where.str() + ": unresolved zero too close to a boundary; skipped");
      out.crossings.push_back(x);
      continue;
    }
    const DerivativePhase da = derivative_phase(trace, a, -1, x.order, fit);
    const DerivativePhase db = derivative_phase(trace, b, +1, x.order, fit);
    if (!std::isfinite(da.arg + da.rate) || !std::isfinite(db.arg + db.rate)) {
      out.warnings.push_back(where.str() + ": derivative undefined; skipped");
      out.crossings.push_back(x);
      continue;
    }
    // The n0-th derivative is smooth across the zero; carry its phase from a to b.
    const double drift = 0.5 * trace.tau * (da.rate + db.rate);
    const double shift = wrap(phi[a] + da.arg + drift - db.arg - raw_b);
    x.delta = wrap(shift - x.order * std::numbers::pi);
    x.applied = true;
    start_phase = raw_b + shift;
    out.crossings.push_back(x);
  }
  integrate_segment(start, n - 1);

  out.phi = phi;
  out.g.resize(n);
  for (int k = 0; k < n; ++k) out.g[k] = std::polar(trace.r[k], phi[k]);
  return out;
}

}  // namespace losch
