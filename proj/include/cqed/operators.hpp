// Truncated joint Hilbert space of a two-level emitter coupled to a single
// cavity mode, and the dense operators everything else is built from.
//
// Basis ordering: |qd> (x) |n> with qd in {g=0, e=1} major and the Fock
// index n in 0..n_max minor, so index(qd, n) = qd*(n_max+1) + n.
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// System rates in rad/ps.
//   g       emitter-cavity coupling
//   kappa   cavity energy (photon number) decay rate
//   gamma   emitter population decay rate
//   gamma_d pure dephasing rate, entering as (gamma_d/2)(sz rho sz - rho)
//   delta   detuning omega_cavity - omega_dot; any sign
struct SystemParams {
  double g = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;
  double gamma_d = 0.0;
  double delta = 0.0;
  int n_max = 5;

  int dim() const { return 2 * (n_max + 1); }

  // Throws ConfigError if rates are negative/non-finite or n_max < 1.
  void validate() const;
};

// Rotating-frame detunings of the two bare resonances relative to the frame
// (i.e. drive carrier) frequency. The undriven symmetric frame referenced to
// the mean of the two frequencies has delta_cavity = +delta/2 and
// delta_dot = -delta/2.
struct FrameDetunings {
  double delta_cavity = 0.0;
  double delta_dot = 0.0;
};

FrameDetunings symmetric_frame(const SystemParams& p);

// Frame rotating at a drive carrier detuned by `carrier_detuning` from the
// symmetric reference frequency.
FrameDetunings drive_frame(const SystemParams& p, double carrier_detuning);

inline int state_index(int qd, int n, int n_max) {
  return qd * (n_max + 1) + n;
}

// Kronecker product a (x) b.
Matrix tensor(const Matrix& a, const Matrix& b);

inline Matrix adjoint(const Matrix& a) { return a.adjoint(); }

// a*b - b*a; throws on dimension mismatch.
Matrix commutator(const Matrix& a, const Matrix& b);

// Joint-space operators. All require n_max >= 1.
Matrix build_annihilation(int n_max);           // I2 (x) a_fock
Matrix build_sigma(int n_max);                  // |g><e| (x) I_fock
Matrix build_sigma_z(int n_max);                // [sigma^dag, sigma] (x) I
Matrix build_identity(int n_max);
Matrix build_photon_number(int n_max);          // a^dag a
Matrix build_excitation_number(int n_max);      // a^dag a + sigma^dag sigma

enum class DriveTarget { kCavity, kDot };

// Operator the classical drive couples to: (a + a^dag) or (sigma + sigma^dag).
Matrix build_drive_operator(DriveTarget target, int n_max);

// Rotating-frame Hamiltonian without drive:
//   H0 = delta_cavity a^dag a + delta_dot sigma^dag sigma
//        + i g (sigma a^dag - a sigma^dag)
Matrix build_hamiltonian(const SystemParams& p, const FrameDetunings& frame);

// H0 + amplitude * (drive operator). `amplitude` is a magnitude; negative
// values are rejected.
Matrix build_hamiltonian(const SystemParams& p, const FrameDetunings& frame,
                         DriveTarget target, double amplitude);

// Relative deviation from Hermiticity, ||H - H^dag||_inf / ||H||_inf.
double hermiticity_error(const Matrix& m);

// Basis state |qd, n>.
Vector basis_state(int qd, int n, int n_max);

}  // namespace cqed
