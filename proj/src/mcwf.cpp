#include "cqed/mcwf.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cqed/errors.hpp"
#include "cqed/rng.hpp"

namespace cqed {

McwfSolver::McwfSolver(const SystemParams& params,
                       const std::optional<PulseShape>& drive)
    : params_(params), drive_(drive) {
  params_.validate();
  if (drive_) drive_->validate();
  FrameDetunings frame = drive_ ? drive_frame(params_, drive_->carrier_detuning)
                                : symmetric_frame(params_);
  const int nm = params_.n_max;
  a_ = build_annihilation(nm);
  sigma_ = build_sigma(nm);
  n_op_ = a_.adjoint() * a_;
  pe_op_ = sigma_.adjoint() * sigma_;
  h0_ = build_hamiltonian(params_, frame);
  drive_op_ = drive_ ? build_drive_operator(drive_->target, nm)
                     : Matrix::Zero(dim(), dim());
  // (1/2) sum_k c_k^dag c_k with c = {sqrt(kappa) a, sqrt(gamma) sigma,
  // sqrt(gamma_d/2) sigma_z}; sigma_z^2 = I.
  damping_ = 0.5 * (params_.kappa * n_op_ + params_.gamma * pe_op_ +
                    (params_.gamma_d / 2.0) *
                        Matrix::Identity(dim(), dim()));
  rate_weights_[0] = params_.kappa;
  rate_weights_[1] = params_.gamma;
  rate_weights_[2] = params_.gamma_d / 2.0;
}

namespace {

double norm2(const Vector& v) { return v.squaredNorm(); }

}  // namespace

struct McwfWorker {
  const McwfSolver& s;
  RngStream rng;

  explicit McwfWorker(const McwfSolver& solver, std::uint64_t master_seed,
                      std::uint64_t stream)
      : s(solver), rng(master_seed, stream) {}

  void rhs(double t, const Vector& y, Vector& dydt) const {
    // dpsi/dt = -i H(t) psi - damping psi  (norm decays monotonically)
    dydt.noalias() = Complex(0.0, -1.0) * (s.h0_ * y);
    if (s.drive_) {
      double e = s.drive_->envelope(t);
      if (e != 0.0) dydt.noalias() += Complex(0.0, -e) * (s.drive_op_ * y);
    }
    dydt.noalias() -= s.damping_ * y;
  }

  // Jump weights <psi| c_k^dag c_k |psi> (unnormalized psi is fine).
  void jump_weights(const Vector& psi, double w[3]) const {
    w[0] = s.rate_weights_[0] * std::real(psi.dot(s.n_op_ * psi));
    w[1] = s.rate_weights_[1] * std::real(psi.dot(s.pe_op_ * psi));
    w[2] = s.rate_weights_[2] * norm2(psi);  // sigma_z^dag sigma_z = I
  }

  JumpChannel select_channel(const Vector& psi) {
    double w[3];
    jump_weights(psi, w);
    double total = w[0] + w[1] + w[2];
    if (total <= 0.0)
      throw SolverError("jump triggered with zero total jump rate");
    double u = rng.uniform() * total;
    if (u < w[0]) return JumpChannel::kCavity;
    if (u < w[0] + w[1]) return JumpChannel::kDot;
    return JumpChannel::kDephase;
  }
};

TrajectoryRecord McwfSolver::evolve_trajectory(const Vector& psi0,
                                               const std::vector<double>& t_grid,
                                               std::uint64_t master_seed,
                                               std::uint64_t stream,
                                               const McwfOptions& opts) const {
  if (t_grid.empty()) throw SolverError("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw SolverError("time grid must be strictly increasing");
  if (psi0.size() != dim())
    throw SolverError("initial state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw SolverError("initial state must be normalized");

  McwfWorker worker(*this, master_seed, stream);
  // Cache sigma_z once per trajectory.
  const Matrix sz = build_sigma_z(params_.n_max);

  TrajectoryRecord rec;
  rec.master_seed = master_seed;
  rec.stream = stream;
  rec.times = t_grid;
  rec.photon_number.reserve(t_grid.size());
  rec.exciton_population.reserve(t_grid.size());

  auto record_state = [&](const Vector& psi_raw) {
    double n2 = norm2(psi_raw);
    if (n2 <= 0.0) throw SolverError("state norm underflow");
    Vector psi = psi_raw / std::sqrt(n2);
    double top = 0.0;
    for (int qd = 0; qd < 2; ++qd)
      top += std::norm(psi(state_index(qd, params_.n_max, params_.n_max)));
    if (top > opts.top_level_tolerance)
      throw TruncationError("top Fock level population " + std::to_string(top) +
                            " exceeds tolerance; increase n_max");
    rec.photon_number.push_back(std::real(psi.dot(n_op_ * psi)));
    rec.exciton_population.push_back(std::real(psi.dot(pe_op_ * psi)));
    if (opts.keep_states) rec.states.push_back(psi);
  };

  auto rhs = [&worker](double t, const Vector& y, Vector& dydt) {
    worker.rhs(t, y, dydt);
  };
  using Integ = DormandPrince5<decltype(rhs)>;

  const double t_end = t_grid.back();
  double t = t_grid.front();
  Vector psi = psi0;
  std::size_t next = 0;
  while (next < t_grid.size() && t_grid[next] <= t) {
    record_state(psi);
    ++next;
  }

  double threshold = worker.rng.uniform_positive();
  std::optional<Integ> integ;
  integ.emplace(rhs, opts.ode, t, psi);

  auto emit_until = [&](const Integ& ig, double upto) {
    while (next < t_grid.size() && t_grid[next] <= upto) {
      record_state(ig.interpolate(t_grid[next]));
      ++next;
    }
  };

  while (integ->t() < t_end) {
    integ->step(t_end);
    if (norm2(integ->y()) >= threshold) {
      emit_until(*integ, integ->t());
      continue;
    }
    // Jump inside (t_prev, t]: bisect on the dense interpolant. The norm is
    // nonincreasing along the drift, so the bracket is valid.
    double lo = integ->t_prev(), hi = integ->t();
    while (hi - lo > opts.jump_time_tolerance) {
      double mid = 0.5 * (lo + hi);
      if (norm2(integ->interpolate(mid)) >= threshold)
        lo = mid;
      else
        hi = mid;
    }
    double t_jump = 0.5 * (lo + hi);
    emit_until(*integ, t_jump);
    Vector psi_at_jump = integ->interpolate(t_jump);

    JumpChannel ch = worker.select_channel(psi_at_jump);
    Vector psi_new;
    switch (ch) {
      case JumpChannel::kCavity: psi_new = a_ * psi_at_jump; break;
      case JumpChannel::kDot: psi_new = sigma_ * psi_at_jump; break;
      case JumpChannel::kDephase: psi_new = sz * psi_at_jump; break;
    }
    double n = psi_new.norm();
    if (n <= 0.0) throw SolverError("jump produced a zero state");
    psi_new /= n;
    rec.jumps.push_back({t_jump, ch});

    threshold = worker.rng.uniform_positive();
    integ.emplace(rhs, opts.ode, t_jump, std::move(psi_new));
  }
  emit_until(*integ, t_end);
  return rec;
}

EnsembleResult McwfSolver::ensemble_average(const Vector& psi0,
                                            const std::vector<double>& t_grid,
                                            int n_traj,
                                            std::uint64_t master_seed,
                                            int n_threads,
                                            const McwfOptions& opts) const {
  if (n_traj < 1) throw SolverError("n_traj must be >= 1");
  const std::size_t np = t_grid.size();

  struct Summary {
    std::vector<double> photon, exciton;
    int jumps[3] = {0, 0, 0};
    std::string error;
  };
  std::vector<Summary> summaries(n_traj);

  auto run_range = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      try {
        TrajectoryRecord rec =
            evolve_trajectory(psi0, t_grid, master_seed, std::uint64_t(k), opts);
        summaries[k].photon = std::move(rec.photon_number);
        summaries[k].exciton = std::move(rec.exciton_population);
        for (const auto& j : rec.jumps) summaries[k].jumps[int(j.channel)]++;
      } catch (const Error& e) {
        summaries[k].error =
            "trajectory " + std::to_string(k) + ": " + e.what();
      }
    }
  };

  int threads = std::max(1, n_threads);
  if (threads == 1 || n_traj == 1) {
    run_range(0, n_traj);
  } else {
    std::vector<std::thread> pool;
    int chunk = (n_traj + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      int b = t * chunk, e = std::min(n_traj, b + chunk);
      if (b >= e) break;
      pool.emplace_back(run_range, b, e);
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& s : summaries)
    if (!s.error.empty()) throw SolverError(s.error);

  EnsembleResult res;
  res.n_traj = n_traj;
  res.master_seed = master_seed;
  res.times = t_grid;
  res.mean_photon.assign(np, 0.0);
  res.mean_exciton.assign(np, 0.0);
  res.stderr_photon.assign(np, 0.0);
  res.stderr_exciton.assign(np, 0.0);

  // Fixed reduction order (trajectory index) keeps the result independent of
  // the thread partition.
  for (const auto& s : summaries) {
    for (std::size_t i = 0; i < np; ++i) {
      res.mean_photon[i] += s.photon[i];
      res.mean_exciton[i] += s.exciton[i];
    }
    res.mean_jumps_cavity += s.jumps[0];
    res.mean_jumps_dot += s.jumps[1];
    res.mean_jumps_dephase += s.jumps[2];
  }
  for (std::size_t i = 0; i < np; ++i) {
    res.mean_photon[i] /= n_traj;
    res.mean_exciton[i] /= n_traj;
  }
  res.mean_jumps_cavity /= n_traj;
  res.mean_jumps_dot /= n_traj;
  res.mean_jumps_dephase /= n_traj;

  if (n_traj > 1) {
    for (const auto& s : summaries) {
      for (std::size_t i = 0; i < np; ++i) {
        double dp = s.photon[i] - res.mean_photon[i];
        double de = s.exciton[i] - res.mean_exciton[i];
        res.stderr_photon[i] += dp * dp;
        res.stderr_exciton[i] += de * de;
      }
    }
    double f = 1.0 / (double(n_traj) * double(n_traj - 1));
    for (std::size_t i = 0; i < np; ++i) {
      res.stderr_photon[i] = std::sqrt(res.stderr_photon[i] * f);
      res.stderr_exciton[i] = std::sqrt(res.stderr_exciton[i] * f);
    }
  }
  return res;
}

PulsedG2Result pulsed_g2_histogram(const McwfSolver& solver,
                                   const Vector& psi0,
                                   std::uint64_t master_seed,
                                   const PulsedG2Options& opts) {
  if (opts.n_pulses < 2) throw SolverError("need at least two pulses");
  if (opts.rep_period <= opts.window)
    throw SolverError("rep_period must exceed the per-pulse window "
                      "(rep_period >> system decay times)");

  // Per-pulse trajectories are independent; the only cross-pulse coupling is
  // the coincidence counting.
  std::vector<std::vector<double>> events(opts.n_pulses);
  std::vector<std::string> errors(opts.n_pulses);

  std::vector<double> t_grid = {0.0, opts.window};
  auto run_range = [&](int begin, int end) {
    for (int p = begin; p < end; ++p) {
      try {
        TrajectoryRecord rec = solver.evolve_trajectory(
            psi0, t_grid, master_seed, std::uint64_t(p), opts.mcwf);
        // Detector jitter drawn from a dedicated stream half-space so event
        // smearing never perturbs the trajectory draws.
        RngStream jitter(master_seed, 0x8000000000000000ull | std::uint64_t(p));
        for (const auto& j : rec.jumps) {
          if (j.channel != JumpChannel::kCavity) continue;
          double t = j.time + double(p) * opts.rep_period;
          if (opts.detector_sigma > 0.0)
            t += opts.detector_sigma * jitter.normal();
          events[p].push_back(t);
        }
      } catch (const Error& e) {
        errors[p] = e.what();
      }
    }
  };

  int threads = std::max(1, opts.n_threads);
  if (threads == 1) {
    run_range(0, opts.n_pulses);
  } else {
    std::vector<std::thread> pool;
    int chunk = (opts.n_pulses + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      int b = t * chunk, e = std::min(opts.n_pulses, b + chunk);
      if (b >= e) break;
      pool.emplace_back(run_range, b, e);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw SolverError("pulsed g2: " + e);

  std::vector<double> all;
  std::size_t total = 0;
  for (const auto& v : events) total += v.size();
  all.reserve(total);
  for (const auto& v : events) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());

  // Time-symmetrized histogram: every unordered pair enters both the +k and
  // -k bins (the center bin twice), so the center/side area ratio estimates
  // <m(m-1)> / <m>^2.
  const int K = opts.max_lag_periods;
  std::vector<double> hist(2 * K + 1, 0.0);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      double dt = all[j] - all[i];
      long k = std::lround(dt / opts.rep_period);
      if (k > K) break;
      hist[K + k] += 1.0;
      hist[K - k] += 1.0;
    }
  }

  PulsedG2Result res;
  res.master_seed = master_seed;
  res.lag_periods.resize(2 * K + 1);
  for (int k = -K; k <= K; ++k) res.lag_periods[K + k] = double(k);
  res.coincidences = hist;
  res.mean_photons_per_pulse = double(total) / double(opts.n_pulses);
  res.pileup_warning = res.mean_photons_per_pulse > 0.1;

  double side = 0.0;
  for (int k = 1; k <= K; ++k) side += hist[K + k] + hist[K - k];
  side /= double(2 * K);
  if (side <= 0.0)
    throw SolverError("pulsed g2: no side-peak coincidences; increase "
                      "n_pulses or drive strength");
  res.center_side_ratio = hist[K] / side;
  return res;
}

}  // namespace cqed
