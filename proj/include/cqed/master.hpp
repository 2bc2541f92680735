// Deterministic Lindblad master-equation evolution, steady states and
// quantum-regression two-time correlators for the emitter/cavity system.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqed/integrator.hpp"
#include "cqed/operators.hpp"
#include "cqed/pulse.hpp"

namespace cqed {

// Sampled observable vs time.
struct TimeTrace {
  std::vector<double> times;    // ps, strictly increasing
  std::vector<double> values;
  std::string label;
  SystemParams params;
};

struct CorrelatorResult {
  enum class Kind { kFirstOrder, kSecondOrder };
  std::vector<double> tau;      // ps
  std::vector<Complex> values;
  Kind kind = Kind::kFirstOrder;
};

// Precomputed operators for one (params, frame, drive target) combination.
// The drive envelope is supplied per evaluation so the same system can be
// reused across pulse powers.
class LindbladSystem {
 public:
  LindbladSystem(const SystemParams& params,
                 const std::optional<PulseShape>& drive);

  const SystemParams& params() const { return params_; }
  const FrameDetunings& frame() const { return frame_; }
  int dim() const { return params_.dim(); }
  bool driven() const { return drive_.has_value(); }
  const std::optional<PulseShape>& drive() const { return drive_; }

  const Matrix& annihilation() const { return a_; }
  const Matrix& sigma() const { return sigma_; }
  const Matrix& sigma_z() const { return sigma_z_; }
  const Matrix& photon_number() const { return n_op_; }
  const Matrix& exciton_population() const { return pe_op_; }

  Matrix hamiltonian(double t) const;

  // drho/dt = -i[H(t), rho] + kappa/2 (2 a rho a+ - a+a rho - rho a+a)
  //           + gamma/2 (2 s rho s+ - s+s rho - rho s+s)
  //           + gamma_d/2 (sz rho sz - rho)
  // Valid for arbitrary (also non-Hermitian) rho; the generator is linear.
  void apply_rhs(double t, const Matrix& rho, Matrix& out) const;

  // Column-stacking matrix representation of the generator at time t.
  Matrix liouvillian_matrix(double t) const;

  // Population of the top Fock level (both emitter states).
  double top_level_population(const Matrix& rho) const;

 private:
  SystemParams params_;
  std::optional<PulseShape> drive_;
  FrameDetunings frame_;
  Matrix a_, sigma_, sigma_z_, h0_, drive_op_, n_op_, pe_op_;
  Matrix adag_a_, sdag_s_;
};

// Pure-function form of the right-hand side; builds the operator set on
// every call, so prefer LindbladSystem in loops.
Matrix lindblad_rhs(const Matrix& rho, const SystemParams& params,
                    const std::optional<PulseShape>& drive, double t);

inline double expectation(const Matrix& op, const Matrix& rho) {
  return (op * rho).trace().real();
}

struct EvolveOptions {
  IntegratorOptions ode{};
  double top_level_tolerance = 1e-6;
  bool check_validity = true;    // trace/Hermiticity/positivity per checkpoint
  bool keep_states = false;
};

struct Observable {
  std::string label;
  Matrix op;
};

struct MasterEvolution {
  std::vector<double> times;
  std::vector<TimeTrace> traces;          // one per requested observable
  std::vector<Matrix> states;             // populated when keep_states
  double max_top_level_population = 0.0;
};

// Integrates rho0 over t_grid, sampling the requested observables at every
// grid point. Throws TruncationError when the top Fock level acquires more
// population than allowed, SolverError on integrator failure or when a
// checkpoint violates the density-matrix invariants.
MasterEvolution evolve_master(const Matrix& rho0,
                              const std::vector<double>& t_grid,
                              const LindbladSystem& system,
                              const std::vector<Observable>& observables,
                              const EvolveOptions& opts = {});

// Convenience: photon number and exciton population traces.
MasterEvolution evolve_photon_exciton(const Matrix& rho0,
                                      const std::vector<double>& t_grid,
                                      const LindbladSystem& system,
                                      const EvolveOptions& opts = {});

struct SteadyStateOptions {
  double residual_tolerance = 1e-10;   // relative to ||L||
  double rank_tolerance = 1e-10;
};

// Solves L(rho) = 0 with Tr rho = 1 by a dense rank-revealing least-squares
// solve on the vectorized generator. Requires a cw (or absent) drive and
// nonzero total damping; flags a non-unique steady state.
Matrix steady_state(const LindbladSystem& system,
                    const SteadyStateOptions& opts = {});

enum class EmissionChannel { kCavity, kDot };

// <O+(tau) O(0)> with O = a or sigma, computed by evolving B(tau) =
// exp(L tau)[O rho_anchor] and tracing against O+. The anchor is either a
// supplied initial state (spontaneous emission) or the driven steady state.
CorrelatorResult correlator_first_order(const LindbladSystem& system,
                                        const std::optional<Matrix>& rho0,
                                        EmissionChannel channel,
                                        const std::vector<double>& tau_grid,
                                        const EvolveOptions& opts = {});

// Normalized second-order autocorrelation of the cavity output under cw
// drive: g2(tau) = Tr[n exp(L tau)(a rho_ss a+)] / <n>_ss^2.
CorrelatorResult g2_cw(const LindbladSystem& system,
                       const std::vector<double>& tau_grid,
                       const EvolveOptions& opts = {});

// Density-matrix invariant checks (throws SolverError on violation).
void check_density_matrix(const Matrix& rho, double trace_tol = 1e-9,
                          double herm_tol = 1e-9, double eig_tol = 1e-8);

}  // namespace cqed
