#include "cqed/linear_model.hpp"

#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

namespace {
constexpr double kDegenerateThreshold = 1e-8;
}

LinearModelCoeffs linear_coeffs(const SystemParams& params) {
  params.validate();
  LinearModelCoeffs c;
  c.a_rate = Complex(-params.kappa / 2.0, -params.delta / 2.0);
  c.b_rate = Complex(-params.gamma / 2.0 - params.gamma_d, params.delta / 2.0);
  Complex diff = c.a_rate - c.b_rate;
  Complex disc = diff * diff - 4.0 * params.g * params.g;
  // Principal branch with Re >= 0; on the imaginary axis pick Im > 0 so the
  // signed zero of the real part cannot flip the branch.
  c.discriminant_root = std::sqrt(disc);
  if (c.discriminant_root.real() < 0.0 ||
      (c.discriminant_root.real() == 0.0 && c.discriminant_root.imag() < 0.0))
    c.discriminant_root = -c.discriminant_root;
  Complex sum = c.a_rate + c.b_rate;
  c.lambda_minus = (sum - c.discriminant_root) / 2.0;
  c.lambda_plus = (sum + c.discriminant_root) / 2.0;
  double scale = std::norm(diff) + 4.0 * params.g * params.g;
  c.degenerate = std::norm(c.discriminant_root) <=
                 kDegenerateThreshold * std::max(scale, 1e-300);
  return c;
}

AmplitudePair analytic_amplitudes(const LinearModelCoeffs& c, double g,
                                  PumpTarget pump, double t) {
  const Complex diff = c.a_rate - c.b_rate;
  if (c.degenerate) {
    // (M - lambda I) is nilpotent: exp(M t) = e^{lambda t}(I + (M-lambda I) t).
    Complex lam = (c.a_rate + c.b_rate) / 2.0;
    Complex e = std::exp(lam * t);
    if (pump == PumpTarget::kDot)
      return {e * g * t, e * (1.0 - diff * t / 2.0)};
    return {e * (1.0 + diff * t / 2.0), -e * g * t};
  }
  const Complex root = c.discriminant_root;
  Complex ep = std::exp(c.lambda_plus * t);
  Complex em = std::exp(c.lambda_minus * t);
  if (pump == PumpTarget::kDot) {
    Complex a = g * (ep - em) / root;
    Complex s = ((root - diff) * ep + (root + diff) * em) / (2.0 * root);
    return {a, s};
  }
  Complex a = ((root + diff) * ep + (root - diff) * em) / (2.0 * root);
  Complex s = -g * (ep - em) / root;
  return {a, s};
}

AmplitudeTraces analytic_time_solutions(const SystemParams& params,
                                        PumpTarget pump,
                                        const std::vector<double>& t_grid) {
  LinearModelCoeffs c = linear_coeffs(params);
  AmplitudeTraces out;
  out.times = t_grid;
  out.cavity.reserve(t_grid.size());
  out.dot.reserve(t_grid.size());
  for (double t : t_grid) {
    AmplitudePair p = analytic_amplitudes(c, params.g, pump, t);
    out.cavity.push_back(p.cavity);
    out.dot.push_back(p.dot);
  }
  return out;
}

namespace {

// FT(e^{lambda t}) = integral_0^inf e^{lambda t} e^{i omega t} dt
//                  = i / (omega - i lambda)   (Re lambda < 0)
Complex ft_exp(Complex lambda, double omega) {
  return Complex(0.0, 1.0) / (omega - Complex(0.0, 1.0) * lambda);
}

// FT(t e^{lambda t}) = -1 / (omega - i lambda)^2
Complex ft_texp(Complex lambda, double omega) {
  Complex d = omega - Complex(0.0, 1.0) * lambda;
  return -1.0 / (d * d);
}

}  // namespace

SpectrumResult analytic_spectrum(const SystemParams& params, PumpTarget pump,
                                 const std::vector<double>& omega_grid) {
  if (omega_grid.size() < 2)
    throw SolverError("spectrum grid needs at least two points");
  LinearModelCoeffs c = linear_coeffs(params);
  const Complex diff = c.a_rate - c.b_rate;
  const Complex root = c.discriminant_root;
  const double g = params.g;

  SpectrumResult out;
  out.omega = omega_grid;
  out.pump = pump;
  out.s_cav.resize(omega_grid.size());
  out.s_qd.resize(omega_grid.size());
  out.pole_positions = {-c.lambda_plus.imag(), -c.lambda_minus.imag()};
  out.pole_fwhm = {-2.0 * c.lambda_plus.real(), -2.0 * c.lambda_minus.real()};

  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    double w = omega_grid[i];
    Complex fa, fs;
    if (c.degenerate) {
      Complex lam = (c.a_rate + c.b_rate) / 2.0;
      Complex f1 = ft_exp(lam, w), ft = ft_texp(lam, w);
      if (pump == PumpTarget::kDot) {
        fa = g * ft;
        fs = f1 - diff / 2.0 * ft;
      } else {
        fa = f1 + diff / 2.0 * ft;
        fs = -g * ft;
      }
    } else {
      Complex fp = ft_exp(c.lambda_plus, w), fm = ft_exp(c.lambda_minus, w);
      if (pump == PumpTarget::kDot) {
        fa = g * (fp - fm) / root;
        fs = ((root - diff) * fp + (root + diff) * fm) / (2.0 * root);
      } else {
        fa = ((root + diff) * fp + (root - diff) * fm) / (2.0 * root);
        fs = -g * (fp - fm) / root;
      }
    }
    out.s_cav[i] = std::norm(fa);
    out.s_qd[i] = std::norm(fs);
  }

  double total = grid_integral(omega_grid, out.s_cav) +
                 grid_integral(omega_grid, out.s_qd);
  if (total > 0.0) {
    for (auto& v : out.s_cav) v /= total;
    for (auto& v : out.s_qd) v /= total;
  }
  return out;
}

double grid_integral(const std::vector<double>& grid,
                     const std::vector<double>& values) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw SolverError("grid_integral: bad grid");
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    sum += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  return sum;
}

double relative_l2(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw SolverError("relative_l2: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - y[i]) * (x[i] - y[i]);
    den += y[i] * y[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace cqed
