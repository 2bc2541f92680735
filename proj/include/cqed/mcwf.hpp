// Monte Carlo wavefunction (quantum-jump) unraveling of the master equation.
// Ensemble averages converge to evolve_master; per-trajectory photodetection
// records drive the pulsed photon-statistics estimators.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cqed/integrator.hpp"
#include "cqed/operators.hpp"
#include "cqed/pulse.hpp"

namespace cqed {

enum class JumpChannel : int { kCavity = 0, kDot = 1, kDephase = 2 };

struct JumpEvent {
  double time = 0.0;  // ps
  JumpChannel channel = JumpChannel::kCavity;
};

struct McwfOptions {
  // Per-trajectory integration error sits far below the sampling noise of
  // any realistic ensemble, so the default tolerance is looser than the
  // master-equation default.
  IntegratorOptions ode{1e-6, 1e-10};
  double jump_time_tolerance = 1e-3;  // ps, bisection refinement of jump times
  double top_level_tolerance = 1e-6;
  bool keep_states = false;
};

struct TrajectoryRecord {
  std::uint64_t master_seed = 0;
  std::uint64_t stream = 0;
  std::vector<JumpEvent> jumps;
  std::vector<double> times;
  std::vector<double> photon_number;       // per checkpoint, normalized state
  std::vector<double> exciton_population;
  std::vector<Vector> states;              // normalized, when keep_states
};

struct EnsembleResult {
  int n_traj = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> times;
  std::vector<double> mean_photon, stderr_photon;
  std::vector<double> mean_exciton, stderr_exciton;
  double mean_jumps_cavity = 0.0, mean_jumps_dot = 0.0,
         mean_jumps_dephase = 0.0;
};

class McwfSolver {
 public:
  McwfSolver(const SystemParams& params,
             const std::optional<PulseShape>& drive);

  const SystemParams& params() const { return params_; }
  int dim() const { return params_.dim(); }

  // One trajectory: deterministic non-Hermitian drift between jumps, jump
  // times located on the norm threshold by bisection, channel chosen with
  // probability proportional to <c_k^dag c_k>. (master_seed, stream) fully
  // determine the record.
  TrajectoryRecord evolve_trajectory(const Vector& psi0,
                                     const std::vector<double>& t_grid,
                                     std::uint64_t master_seed,
                                     std::uint64_t stream,
                                     const McwfOptions& opts = {}) const;

  // Mean and standard error of photon number and exciton population over
  // n_traj trajectories with per-trajectory streams 0..n_traj-1 derived from
  // master_seed. Deterministic for fixed inputs regardless of n_threads.
  EnsembleResult ensemble_average(const Vector& psi0,
                                  const std::vector<double>& t_grid,
                                  int n_traj, std::uint64_t master_seed,
                                  int n_threads = 1,
                                  const McwfOptions& opts = {}) const;

 private:
  SystemParams params_;
  std::optional<PulseShape> drive_;
  Matrix h0_, drive_op_, damping_;  // damping_ = (1/2) sum c_k^dag c_k
  Matrix a_, sigma_, n_op_, pe_op_;
  double rate_weights_[3] = {0.0, 0.0, 0.0};

  friend struct McwfWorker;
};

struct PulsedG2Options {
  int n_pulses = 20000;
  double rep_period = 12500.0;        // ps (80 MHz)
  double window = 600.0;              // ps simulated per pulse
  double detector_sigma = 0.0;        // ps, Gaussian jitter on event times
  int max_lag_periods = 8;
  int n_threads = 1;
  McwfOptions mcwf{};
};

struct PulsedG2Result {
  std::vector<double> lag_periods;     // -K..K
  std::vector<double> coincidences;    // per rep-period-wide window
  double center_side_ratio = 0.0;
  double mean_photons_per_pulse = 0.0;
  bool pileup_warning = false;
  std::uint64_t master_seed = 0;
};

// Simulates cavity-channel photodetection over a pulse train and bins
// coincidence delays into rep-period-wide windows. Detector jitter is
// applied to the event times, not to the binned histogram.
PulsedG2Result pulsed_g2_histogram(const McwfSolver& solver,
                                   const Vector& psi0,
                                   std::uint64_t master_seed,
                                   const PulsedG2Options& opts = {});

}  // namespace cqed
