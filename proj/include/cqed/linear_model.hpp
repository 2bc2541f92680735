// Closed-form solutions of the coupled mean-amplitude equations
//   d<a>/dt     = A <a> + g <sigma>
//   d<sigma>/dt = B <sigma> - g <a>
// with A = -i delta/2 - kappa/2 and B = +i delta/2 - gamma/2 - gamma_d,
// valid in the single-excitation sector. Provides the complex eigenvalues,
// time-domain amplitudes for dot- and cavity-pumped initial conditions, and
// the emission spectra |FT a(t)|^2, |FT sigma(t)|^2.
#pragma once

#include <array>
#include <vector>

#include "cqed/operators.hpp"

namespace cqed {

enum class PumpTarget { kDot, kCavity };

struct LinearModelCoeffs {
  Complex a_rate;             // A
  Complex b_rate;             // B
  Complex discriminant_root;  // sqrt((A-B)^2 - 4 g^2), branch Re >= 0
  Complex lambda_minus;       // ((A+B) - root) / 2
  Complex lambda_plus;        // ((A+B) + root) / 2
  bool degenerate = false;    // |root|^2 below threshold relative to scale
};

LinearModelCoeffs linear_coeffs(const SystemParams& params);

// Amplitudes (a(t), sigma(t)) for the pure initial conditions
// (a, sigma)(0) = (0, 1) [dot pumped] or (1, 0) [cavity pumped].
// At the degenerate point (A-B)^2 = 4 g^2 the confluent t*exp(lambda t)
// limit is used.
struct AmplitudePair {
  Complex cavity;
  Complex dot;
};
AmplitudePair analytic_amplitudes(const LinearModelCoeffs& c, double g,
                                  PumpTarget pump, double t);

struct AmplitudeTraces {
  std::vector<double> times;
  std::vector<Complex> cavity;  // a(t)
  std::vector<Complex> dot;     // sigma(t)
};
AmplitudeTraces analytic_time_solutions(const SystemParams& params,
                                        PumpTarget pump,
                                        const std::vector<double>& t_grid);

// Emission spectra on `omega_grid` (rad/ps relative to the symmetric
// reference frequency). s_cav and s_qd are jointly normalized so that the
// total grid integral of (s_cav + s_qd) is one; the relative channel
// weights are physical.
struct SpectrumResult {
  std::vector<double> omega;
  std::vector<double> s_cav;
  std::vector<double> s_qd;
  PumpTarget pump = PumpTarget::kDot;
  // Peak metadata: positions -Im(lambda) with widths -2 Re(lambda), the
  // index pairing matching (lambda_plus, lambda_minus).
  std::array<double, 2> pole_positions{};
  std::array<double, 2> pole_fwhm{};
  bool decayed = true;  // numerical route: correlator decayed at horizon
};

SpectrumResult analytic_spectrum(const SystemParams& params, PumpTarget pump,
                                 const std::vector<double>& omega_grid);

// Trapezoid integral of `values` over `grid`.
double grid_integral(const std::vector<double>& grid,
                     const std::vector<double>& values);

// Relative L2 distance ||x - y||_2 / ||y||_2 over a common grid.
double relative_l2(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cqed
