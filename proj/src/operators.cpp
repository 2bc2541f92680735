#include "cqed/operators.hpp"

#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

void SystemParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v))
      throw ConfigError(std::string("params.") + name, "must be finite");
  };
  check(g, "g");
  check(kappa, "kappa");
  check(gamma, "gamma");
  check(gamma_d, "gamma_d");
  check(delta, "delta");
  if (g < 0.0) throw ConfigError("params.g", "must be >= 0");
  if (kappa < 0.0) throw ConfigError("params.kappa", "must be >= 0");
  if (gamma < 0.0) throw ConfigError("params.gamma", "must be >= 0");
  if (gamma_d < 0.0) throw ConfigError("params.gamma_d", "must be >= 0");
  if (n_max < 1)
    throw ConfigError("params.n_max",
                      "must be >= 1 (no photon dynamics representable)");
}

FrameDetunings symmetric_frame(const SystemParams& p) {
  return {p.delta / 2.0, -p.delta / 2.0};
}

FrameDetunings drive_frame(const SystemParams& p, double carrier_detuning) {
  return {p.delta / 2.0 - carrier_detuning, -p.delta / 2.0 - carrier_detuning};
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw SolverError("commutator: dimension mismatch");
  return a * b - b * a;
}

namespace {

void require_n_max(int n_max) {
  if (n_max < 1)
    throw ConfigError("n_max",
                      "must be >= 1 (no photon dynamics representable)");
}

Matrix fock_annihilation(int n_max) {
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

}  // namespace

Matrix build_annihilation(int n_max) {
  require_n_max(n_max);
  return tensor(Matrix::Identity(2, 2), fock_annihilation(n_max));
}

Matrix build_sigma(int n_max) {
  require_n_max(n_max);
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;  // |g><e|
  return tensor(s, Matrix::Identity(n_max + 1, n_max + 1));
}

Matrix build_sigma_z(int n_max) {
  Matrix s = build_sigma(n_max);
  return commutator(s.adjoint(), s);
}

Matrix build_identity(int n_max) {
  require_n_max(n_max);
  return Matrix::Identity(2 * (n_max + 1), 2 * (n_max + 1));
}

Matrix build_photon_number(int n_max) {
  Matrix a = build_annihilation(n_max);
  return a.adjoint() * a;
}

Matrix build_excitation_number(int n_max) {
  Matrix s = build_sigma(n_max);
  return build_photon_number(n_max) + s.adjoint() * s;
}

Matrix build_drive_operator(DriveTarget target, int n_max) {
  Matrix op = (target == DriveTarget::kCavity) ? build_annihilation(n_max)
                                               : build_sigma(n_max);
  return op + op.adjoint().eval();
}

Matrix build_hamiltonian(const SystemParams& p, const FrameDetunings& frame) {
  p.validate();
  Matrix a = build_annihilation(p.n_max);
  Matrix s = build_sigma(p.n_max);
  Matrix h = frame.delta_cavity * (a.adjoint() * a).eval() +
             frame.delta_dot * (s.adjoint() * s).eval() +
             Complex(0.0, p.g) * (s * a.adjoint() - a * s.adjoint()).eval();
  return h;
}

Matrix build_hamiltonian(const SystemParams& p, const FrameDetunings& frame,
                         DriveTarget target, double amplitude) {
  if (amplitude < 0.0)
    throw ConfigError("drive.amplitude",
                      "must be >= 0 (amplitude is a magnitude)");
  Matrix h = build_hamiltonian(p, frame);
  if (amplitude > 0.0) h += amplitude * build_drive_operator(target, p.n_max);
  return h;
}

double hermiticity_error(const Matrix& m) {
  double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

Vector basis_state(int qd, int n, int n_max) {
  require_n_max(n_max);
  if (qd < 0 || qd > 1 || n < 0 || n > n_max)
    throw ConfigError("state", "basis index out of range");
  Vector v = Vector::Zero(2 * (n_max + 1));
  v(state_index(qd, n, n_max)) = 1.0;
  return v;
}

}  // namespace cqed
