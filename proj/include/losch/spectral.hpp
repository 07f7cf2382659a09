#pragma once

#include <optional>
#include <vector>

#include "losch/model.hpp"

namespace losch {

struct LdosSpectrum {
  std::vector<double> energies;
  std::vector<double> densities;
  double eta = 0.0;
  long window_offset = 0;  // index l of the first energy bin
  double imag_residue = 0.0;

  double total_weight() const;
};

struct LdosOptions {
  bool hermitian_extend = true;
  // Window is centred on this energy (normally <psi|H|psi>); 0 if unset.
  std::optional<double> center_energy;
  // Gaussian taper exp(-(t/(w t_max))^2 / 2) on the samples; off if unset.
  std::optional<double> taper_width;
};

// d_l = (tau / 2pi) sum_k g_k exp(i 2pi k l / L), E_l = l eta, eta = 2pi/(L tau).
// Samples are g_k = G(k tau), k = 0..K. With the Hermitian extension the
// series becomes periodic of length L = 2K using G(-t) = conj(G(t)); the
// sample at t_max = K tau is shared by both halves and enters as Re G.
// Without it, the K+1 samples are treated as one period of length L = K+1.
LdosSpectrum ldos_dft(const std::vector<cplx>& g, double tau, const LdosOptions& options = {});

// Checks that `times` is a uniform grid (starting at 0 when extending).
LdosSpectrum ldos_dft(const std::vector<double>& times, const std::vector<cplx>& g,
                      const LdosOptions& options);

// Boolean flag form matching the plain interface.
LdosSpectrum ldos_dft(const std::vector<cplx>& g, double tau, bool hermitian_extend,
                      std::optional<double> center_energy = std::nullopt);

// Gaussian-broadened reference d(E) = sum_k |<E_k|psi>|^2 N(E - E_k; width).
// Grid spacing defaults to width / 10 and covers the spectrum +- 6 widths.
LdosSpectrum exact_ldos(const HamiltonianSpec& spec, const StateVector& psi, double width,
                        std::optional<double> spacing = std::nullopt);
LdosSpectrum exact_ldos(const DenseOracle& oracle, const StateVector& psi, double width,
                        std::optional<double> spacing = std::nullopt);

}  // namespace losch
