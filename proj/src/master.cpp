#include "cqed/master.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "cqed/errors.hpp"

namespace cqed {

LindbladSystem::LindbladSystem(const SystemParams& params,
                               const std::optional<PulseShape>& drive)
    : params_(params), drive_(drive) {
  params_.validate();
  if (drive_) drive_->validate();
  frame_ = drive_ ? drive_frame(params_, drive_->carrier_detuning)
                  : symmetric_frame(params_);
  a_ = build_annihilation(params_.n_max);
  sigma_ = build_sigma(params_.n_max);
  sigma_z_ = build_sigma_z(params_.n_max);
  h0_ = build_hamiltonian(params_, frame_);
  drive_op_ = drive_ ? build_drive_operator(drive_->target, params_.n_max)
                     : Matrix::Zero(dim(), dim());
  n_op_ = a_.adjoint() * a_;
  pe_op_ = sigma_.adjoint() * sigma_;
  adag_a_ = n_op_;
  sdag_s_ = pe_op_;
}

Matrix LindbladSystem::hamiltonian(double t) const {
  if (!drive_) return h0_;
  double e = drive_->envelope(t);
  if (e == 0.0) return h0_;
  return h0_ + e * drive_op_;
}

void LindbladSystem::apply_rhs(double t, const Matrix& rho, Matrix& out) const {
  Matrix h = hamiltonian(t);
  out.noalias() = Complex(0.0, -1.0) * (h * rho - rho * h);
  if (params_.kappa > 0.0) {
    out.noalias() += params_.kappa * (a_ * rho * a_.adjoint());
    out.noalias() -= (params_.kappa / 2.0) * (adag_a_ * rho + rho * adag_a_);
  }
  if (params_.gamma > 0.0) {
    out.noalias() += params_.gamma * (sigma_ * rho * sigma_.adjoint());
    out.noalias() -= (params_.gamma / 2.0) * (sdag_s_ * rho + rho * sdag_s_);
  }
  if (params_.gamma_d > 0.0) {
    out.noalias() += (params_.gamma_d / 2.0) * (sigma_z_ * rho * sigma_z_);
    out -= (params_.gamma_d / 2.0) * rho;
  }
}

Matrix LindbladSystem::liouvillian_matrix(double t) const {
  const int d = dim();
  const Matrix id = Matrix::Identity(d, d);
  Matrix h = hamiltonian(t);
  // Column-stacking convention: vec(A X B) = (B^T (x) A) vec(X).
  Matrix lmat = Complex(0.0, -1.0) *
                (tensor(id, h) - tensor(h.transpose(), id));
  auto dissipator = [&](const Matrix& c, double rate) {
    if (rate == 0.0) return;
    Matrix cdc = c.adjoint() * c;
    lmat += rate * tensor(c.conjugate(), c);
    lmat -= (rate / 2.0) * (tensor(id, cdc) + tensor(cdc.transpose(), id));
  };
  dissipator(a_, params_.kappa);
  dissipator(sigma_, params_.gamma);
  dissipator(sigma_z_, params_.gamma_d / 2.0);
  return lmat;
}

double LindbladSystem::top_level_population(const Matrix& rho) const {
  const int nm = params_.n_max;
  double p = 0.0;
  for (int qd = 0; qd < 2; ++qd) {
    int i = state_index(qd, nm, nm);
    p += rho(i, i).real();
  }
  return p;
}

Matrix lindblad_rhs(const Matrix& rho, const SystemParams& params,
                    const std::optional<PulseShape>& drive, double t) {
  LindbladSystem system(params, drive);
  Matrix out(rho.rows(), rho.cols());
  system.apply_rhs(t, rho, out);
  return out;
}

void check_density_matrix(const Matrix& rho, double trace_tol, double herm_tol,
                          double eig_tol) {
  double tr_err = std::abs(rho.trace().real() - 1.0) +
                  std::abs(rho.trace().imag());
  if (tr_err > trace_tol)
    throw SolverError("density matrix trace deviates from 1 by " +
                      std::to_string(tr_err));
  double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > herm_tol)
    throw SolverError("density matrix is not Hermitian (deviation " +
                      std::to_string(herm) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> es((rho + rho.adjoint()) / 2.0);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -eig_tol)
    throw SolverError("density matrix is not positive (min eigenvalue " +
                      std::to_string(min_eig) + ")");
}

namespace {

std::vector<double> validated_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw SolverError("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw SolverError("time grid must be strictly increasing");
  return t_grid;
}

}  // namespace

MasterEvolution evolve_master(const Matrix& rho0,
                              const std::vector<double>& t_grid,
                              const LindbladSystem& system,
                              const std::vector<Observable>& observables,
                              const EvolveOptions& opts) {
  const int d = system.dim();
  if (rho0.rows() != d || rho0.cols() != d)
    throw SolverError("initial state dimension mismatch");
  auto grid = validated_grid(t_grid);

  MasterEvolution result;
  result.times = grid;
  result.traces.reserve(observables.size());
  for (const auto& ob : observables) {
    TimeTrace tr;
    tr.label = ob.label;
    tr.params = system.params();
    tr.times = grid;
    tr.values.reserve(grid.size());
    result.traces.push_back(std::move(tr));
  }

  Vector y0 = Eigen::Map<const Vector>(rho0.data(), d * d);
  Matrix rho_buf(d, d), rhs_buf(d, d);

  auto rhs = [&](double t, const Vector& y, Vector& dydt) {
    Eigen::Map<const Matrix> rho(y.data(), d, d);
    rho_buf = rho;
    system.apply_rhs(t, rho_buf, rhs_buf);
    dydt = Eigen::Map<const Vector>(rhs_buf.data(), d * d);
  };

  auto sample = [&](double /*t*/, const Vector& y) {
    Eigen::Map<const Matrix> rho(y.data(), d, d);
    double top = system.top_level_population(rho);
    result.max_top_level_population =
        std::max(result.max_top_level_population, top);
    if (top > opts.top_level_tolerance)
      throw TruncationError(
          "top Fock level population " + std::to_string(top) +
          " exceeds tolerance; increase n_max");
    if (opts.check_validity) check_density_matrix(rho);
    for (std::size_t k = 0; k < observables.size(); ++k)
      result.traces[k].values.push_back(expectation(observables[k].op, rho));
    if (opts.keep_states) result.states.push_back(rho);
  };

  integrate_sampled(rhs, grid.front(), y0, grid, opts.ode, sample);
  return result;
}

MasterEvolution evolve_photon_exciton(const Matrix& rho0,
                                      const std::vector<double>& t_grid,
                                      const LindbladSystem& system,
                                      const EvolveOptions& opts) {
  std::vector<Observable> obs = {
      {"cavity_photon_number", system.photon_number()},
      {"exciton_population", system.exciton_population()},
  };
  return evolve_master(rho0, t_grid, system, obs, opts);
}

Matrix steady_state(const LindbladSystem& system,
                    const SteadyStateOptions& opts) {
  const SystemParams& p = system.params();
  if (p.kappa + p.gamma + p.gamma_d <= 0.0)
    throw SolverError("steady_state requires nonzero damping");
  if (system.driven() && system.drive()->kind != PulseShape::Kind::kCw)
    throw SolverError("steady_state requires a cw (constant) drive");

  const int d = system.dim();
  const int n2 = d * d;
  Matrix lmat = system.liouvillian_matrix(0.0);

  // Append the trace constraint as an extra row and solve the least-squares
  // system; rank deficiency of the stacked matrix signals a steady-state
  // degeneracy beyond the trace direction.
  Eigen::MatrixXcd stacked(n2 + 1, n2);
  stacked.topRows(n2) = lmat;
  stacked.row(n2).setZero();
  for (int i = 0; i < d; ++i) stacked(n2, i * d + i) = 1.0;
  Vector b = Vector::Zero(n2 + 1);
  b(n2) = 1.0;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(stacked);
  qr.setThreshold(opts.rank_tolerance);
  if (qr.rank() < n2)
    throw SolverError(
        "Liouvillian is singular beyond the trace degeneracy "
        "(non-unique steady state)");
  Vector x = qr.solve(b);

  double lnorm = lmat.norm();
  double resid = (lmat * x).norm();
  if (resid > opts.residual_tolerance * std::max(lnorm, 1.0))
    throw SolverError("steady-state residual " + std::to_string(resid) +
                      " exceeds tolerance");

  Matrix rho = Eigen::Map<Matrix>(x.data(), d, d);
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  rho /= rho.trace().real();
  return rho;
}

namespace {

// Evolves an arbitrary operator-valued initial condition under the system
// generator and records Tr[weight * B(tau)] on the grid. Validity checks do
// not apply: B is generally non-Hermitian.
std::vector<Complex> evolve_and_trace(const LindbladSystem& system,
                                      const Matrix& b0, const Matrix& weight,
                                      const std::vector<double>& tau_grid,
                                      const EvolveOptions& opts) {
  const int d = system.dim();
  Vector y0 = Eigen::Map<const Vector>(b0.data(), d * d);
  Matrix buf(d, d), rhs_buf(d, d);
  auto rhs = [&](double t, const Vector& y, Vector& dydt) {
    Eigen::Map<const Matrix> m(y.data(), d, d);
    buf = m;
    system.apply_rhs(t, buf, rhs_buf);
    dydt = Eigen::Map<const Vector>(rhs_buf.data(), d * d);
  };
  std::vector<Complex> out;
  out.reserve(tau_grid.size());
  auto sample = [&](double /*t*/, const Vector& y) {
    Eigen::Map<const Matrix> m(y.data(), d, d);
    out.push_back((weight * m).trace());
  };
  integrate_sampled(rhs, 0.0, y0, tau_grid, opts.ode, sample);
  return out;
}

}  // namespace

CorrelatorResult correlator_first_order(const LindbladSystem& system,
                                        const std::optional<Matrix>& rho0,
                                        EmissionChannel channel,
                                        const std::vector<double>& tau_grid,
                                        const EvolveOptions& opts) {
  Matrix anchor = rho0 ? *rho0 : steady_state(system);
  const Matrix& op = (channel == EmissionChannel::kCavity) ? system.annihilation()
                                                           : system.sigma();
  Matrix b0 = op * anchor;
  CorrelatorResult res;
  res.kind = CorrelatorResult::Kind::kFirstOrder;
  res.tau = tau_grid;
  res.values = evolve_and_trace(system, b0, op.adjoint(), tau_grid, opts);
  return res;
}

CorrelatorResult g2_cw(const LindbladSystem& system,
                       const std::vector<double>& tau_grid,
                       const EvolveOptions& opts) {
  Matrix rho_ss = steady_state(system);
  double n_ss = expectation(system.photon_number(), rho_ss);
  if (n_ss < 1e-12)
    throw SolverError("g2_cw: steady-state photon number below 1e-12 "
                      "(undriven or fully dark system)");
  Matrix b0 = system.annihilation() * rho_ss *
              system.annihilation().adjoint();
  CorrelatorResult res;
  res.kind = CorrelatorResult::Kind::kSecondOrder;
  res.tau = tau_grid;
  res.values = evolve_and_trace(system, b0, system.photon_number(), tau_grid,
                                opts);
  for (auto& v : res.values) v = Complex(v.real() / (n_ss * n_ss), 0.0);
  return res;
}

}  // namespace cqed
