#include "cqed/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

// phi0 = integral_0^1 e^{a s} ds, phi1 = integral_0^1 s e^{a s} ds
void segment_weights(Complex a, Complex& phi0, Complex& phi1) {
  if (std::abs(a) < 1e-4) {
    phi0 = 1.0 + a * (0.5 + a * (1.0 / 6.0 + a / 24.0));
    phi1 = 0.5 + a * (1.0 / 3.0 + a * (0.125 + a / 30.0));
    return;
  }
  Complex ea = std::exp(a);
  phi0 = (ea - 1.0) / a;
  phi1 = (ea * (a - 1.0) + 1.0) / (a * a);
}

double slowest_decay_horizon(const SystemParams& params) {
  LinearModelCoeffs c = linear_coeffs(params);
  double r = 1e300;
  for (Complex lam : {c.lambda_plus, c.lambda_minus}) {
    double rate = -lam.real();
    if (rate > 1e-12) r = std::min(r, rate);
  }
  if (r >= 1e300) {
    // Undamped system; pick a horizon from the oscillation scale instead.
    double scale = std::max({params.g, std::abs(params.delta), 1e-3});
    return 200.0 / scale;
  }
  return 30.0 / r;
}

int auto_n_tau(const std::vector<double>& omega_grid, double horizon) {
  double wmax = 0.0;
  for (double w : omega_grid) wmax = std::max(wmax, std::abs(w));
  wmax = std::max(wmax, 1e-3);
  double dt = kPi / (8.0 * wmax);
  int n = int(std::ceil(horizon / dt)) + 1;
  return std::clamp(n, 512, 1 << 17);
}

std::vector<double> uniform_grid(double t_max, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = t_max * double(i) / double(n - 1);
  return g;
}

}  // namespace

Complex fourier_linear(const std::vector<double>& tau,
                       const std::vector<Complex>& f, double omega) {
  Complex sum = 0.0;
  for (std::size_t j = 1; j < tau.size(); ++j) {
    double dt = tau[j] - tau[j - 1];
    Complex a = Complex(0.0, omega * dt);
    Complex phi0, phi1;
    segment_weights(a, phi0, phi1);
    Complex phase = std::exp(Complex(0.0, omega * tau[j - 1]));
    sum += dt * phase * (f[j - 1] * phi0 + (f[j] - f[j - 1]) * phi1);
  }
  return sum;
}

SpectrumResult numerical_spectrum(const SystemParams& params, PumpTarget pump,
                                  const std::vector<double>& omega_grid,
                                  const NumericalSpectrumOptions& opts) {
  if (omega_grid.size() < 2)
    throw SolverError("spectrum grid needs at least two points");
  LindbladSystem system(params, std::nullopt);
  const int d = system.dim();
  const int nm = params.n_max;

  Matrix b0 = Matrix::Zero(d, d);
  int pump_idx = (pump == PumpTarget::kDot) ? state_index(1, 0, nm)
                                            : state_index(0, 1, nm);
  b0(state_index(0, 0, nm), pump_idx) = 1.0;

  double horizon = opts.tau_horizon > 0.0 ? opts.tau_horizon
                                          : slowest_decay_horizon(params);
  int n_tau = opts.n_tau > 0 ? opts.n_tau : auto_n_tau(omega_grid, horizon);
  std::vector<double> tau = uniform_grid(horizon, n_tau);

  std::vector<Complex> c_cav, c_qd;
  c_cav.reserve(tau.size());
  c_qd.reserve(tau.size());
  {
    Vector y0 = Eigen::Map<const Vector>(b0.data(), d * d);
    Matrix buf(d, d), rhs_buf(d, d);
    auto rhs = [&](double t, const Vector& y, Vector& dydt) {
      Eigen::Map<const Matrix> m(y.data(), d, d);
      buf = m;
      system.apply_rhs(t, buf, rhs_buf);
      dydt = Eigen::Map<const Vector>(rhs_buf.data(), d * d);
    };
    const Matrix a_dag = system.annihilation().adjoint();
    const Matrix s_dag = system.sigma().adjoint();
    auto sample = [&](double, const Vector& y) {
      Eigen::Map<const Matrix> m(y.data(), d, d);
      c_cav.push_back((a_dag * m).trace());
      c_qd.push_back((s_dag * m).trace());
    };
    integrate_sampled(rhs, 0.0, y0, tau, opts.evolve.ode, sample);
  }

  auto peak_abs = [](const std::vector<Complex>& v) {
    double p = 0.0;
    for (auto& c : v) p = std::max(p, std::abs(c));
    return p;
  };
  bool decayed =
      std::abs(c_cav.back()) <= opts.decay_warn_fraction * peak_abs(c_cav) +
                                    1e-300 &&
      std::abs(c_qd.back()) <= opts.decay_warn_fraction * peak_abs(c_qd) +
                                   1e-300;

  for (auto& v : c_cav) v = std::conj(v);
  for (auto& v : c_qd) v = std::conj(v);

  SpectrumResult out;
  out.omega = omega_grid;
  out.pump = pump;
  out.decayed = decayed;
  out.s_cav.resize(omega_grid.size());
  out.s_qd.resize(omega_grid.size());
  LinearModelCoeffs lc = linear_coeffs(params);
  out.pole_positions = {-lc.lambda_plus.imag(), -lc.lambda_minus.imag()};
  out.pole_fwhm = {-2.0 * lc.lambda_plus.real(), -2.0 * lc.lambda_minus.real()};
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    out.s_cav[i] = std::norm(fourier_linear(tau, c_cav, omega_grid[i]));
    out.s_qd[i] = std::norm(fourier_linear(tau, c_qd, omega_grid[i]));
  }
  double total = grid_integral(omega_grid, out.s_cav) +
                 grid_integral(omega_grid, out.s_qd);
  if (total > 0.0) {
    for (auto& v : out.s_cav) v /= total;
    for (auto& v : out.s_qd) v /= total;
  }
  return out;
}

CwSpectrumResult numerical_spectrum_cw(const LindbladSystem& system,
                                       EmissionChannel channel,
                                       const std::vector<double>& omega_grid,
                                       const NumericalSpectrumOptions& opts) {
  if (omega_grid.size() < 2)
    throw SolverError("spectrum grid needs at least two points");
  Matrix rho_ss = steady_state(system);
  const Matrix& op = (channel == EmissionChannel::kCavity)
                         ? system.annihilation()
                         : system.sigma();
  Complex c_inf = (op.adjoint() * rho_ss).trace() * (op * rho_ss).trace();

  double horizon = opts.tau_horizon > 0.0
                       ? opts.tau_horizon
                       : slowest_decay_horizon(system.params());
  int n_tau = opts.n_tau > 0 ? opts.n_tau : auto_n_tau(omega_grid, horizon);
  std::vector<double> tau = uniform_grid(horizon, n_tau);

  CorrelatorResult corr =
      correlator_first_order(system, rho_ss, channel, tau, opts.evolve);

  std::vector<Complex> f(corr.values.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = std::conj(corr.values[i] - c_inf);
    peak = std::max(peak, std::abs(f[i]));
  }
  bool decayed = std::abs(f.back()) <=
                 opts.decay_warn_fraction * peak + 1e-300;

  CwSpectrumResult out;
  out.omega = omega_grid;
  out.decayed = decayed;
  out.values.resize(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    double v = fourier_linear(tau, f, omega_grid[i]).real();
    out.values[i] = std::max(v, 0.0);
  }
  double total = grid_integral(omega_grid, out.values);
  if (total > 0.0)
    for (auto& v : out.values) v /= total;
  return out;
}

}  // namespace cqed
