// Emission spectra computed numerically from the full master equation via
// the quantum regression theorem, cross-validating the closed forms in
// linear_model.hpp.
#pragma once

#include <optional>

#include "cqed/linear_model.hpp"
#include "cqed/master.hpp"

namespace cqed {

struct NumericalSpectrumOptions {
  double tau_horizon = 0.0;     // ps; 0 -> from the linear-model decay rates
  int n_tau = 0;                // 0 -> automatic (Nyquist vs grid extent)
  double decay_warn_fraction = 1e-6;
  EvolveOptions evolve{};
};

// Single-quantum emission spectrum. The regression correlators
//   C_cav(tau) = Tr[a^dag     exp(L tau) |g,0><pump|]
//   C_qd(tau)  = Tr[sigma^dag exp(L tau) |g,0><pump|]
// (pump = |e,0> for dot pumping, |g,1> for cavity pumping) are evolved with
// the full Liouvillian and Fourier transformed; the spectra are
// |FT C*|^2, jointly normalized like analytic_spectrum. `decayed` is false
// when the correlator has not fallen below decay_warn_fraction of its peak
// at the integration horizon.
SpectrumResult numerical_spectrum(const SystemParams& params, PumpTarget pump,
                                  const std::vector<double>& omega_grid,
                                  const NumericalSpectrumOptions& opts = {});

// Incoherent steady-state emission spectrum of a cw-driven system:
//   S(omega) = Re  integral_0^inf e^{i omega tau} (C(tau) - C_inf)^* d tau
// with C(tau) = Tr[O^dag exp(L tau)(O rho_ss)] and the coherent asymptote
// C_inf = <O^dag>_ss <O>_ss removed. Normalized to unit grid integral.
struct CwSpectrumResult {
  std::vector<double> omega;
  std::vector<double> values;
  bool decayed = true;
};
CwSpectrumResult numerical_spectrum_cw(const LindbladSystem& system,
                                       EmissionChannel channel,
                                       const std::vector<double>& omega_grid,
                                       const NumericalSpectrumOptions& opts = {});

// One-sided Fourier transform integral_0^T f(tau) e^{i omega tau} d tau of a
// uniformly sampled f, exact for the piecewise-linear interpolant.
Complex fourier_linear(const std::vector<double>& tau,
                       const std::vector<Complex>& f, double omega);

}  // namespace cqed
