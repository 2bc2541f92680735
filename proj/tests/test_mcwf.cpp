#include <doctest.h>

#include <cmath>

#include "cqed/master.hpp"
#include "cqed/mcwf.hpp"

using namespace cqed;

namespace {

std::vector<double> grid_to(double t_max, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = t_max * double(i) / double(n - 1);
  return g;
}

SystemParams device_params() {
  SystemParams p;
  p.g = 0.15708;
  p.kappa = 0.2047;
  p.gamma = 0.008;
  p.gamma_d = 0.0157;
  p.n_max = 3;
  return p;
}

}  // namespace

TEST_CASE("lossless trajectory is deterministic Schroedinger evolution") {
  SystemParams p;
  p.g = 0.15;
  p.n_max = 4;
  PulseShape pulse;
  pulse.kind = PulseShape::Kind::kGaussian;
  pulse.target = DriveTarget::kCavity;
  pulse.amplitude = 0.005;
  pulse.center = 30.0;
  pulse.fwhm = 20.0;

  McwfSolver solver(p, pulse);
  auto grid = grid_to(80.0, 41);
  McwfOptions tight;
  tight.ode.rtol = 1e-9;
  tight.ode.atol = 1e-13;
  auto rec = solver.evolve_trajectory(basis_state(0, 0, p.n_max), grid, 5, 0,
                                      tight);
  CHECK(rec.jumps.empty());

  LindbladSystem sys(p, pulse);
  Matrix rho0 = basis_state(0, 0, p.n_max) * basis_state(0, 0, p.n_max).adjoint();
  auto master = evolve_photon_exciton(rho0, grid, sys);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(rec.photon_number[i] ==
          doctest::Approx(master.traces[0].values[i]).epsilon(1e-6));
}

TEST_CASE("a single excitation emits exactly one quantum") {
  SystemParams p = device_params();
  p.gamma_d = 0.0;
  McwfSolver solver(p, std::nullopt);
  auto grid = grid_to(400.0, 11);
  for (std::uint64_t stream = 0; stream < 40; ++stream) {
    auto rec = solver.evolve_trajectory(basis_state(1, 0, p.n_max), grid, 11,
                                        stream);
    CHECK(rec.jumps.size() == 1);
    JumpChannel ch = rec.jumps[0].channel;
    CHECK((ch == JumpChannel::kCavity || ch == JumpChannel::kDot));
    CHECK(rec.photon_number.back() <= 1e-9);
    CHECK(rec.exciton_population.back() <= 1e-9);
  }
}

TEST_CASE("dephasing jumps conserve the excitation number") {
  SystemParams p = device_params();
  p.gamma_d = 0.05;  // frequent sigma_z jumps
  McwfSolver solver(p, std::nullopt);
  auto grid = grid_to(400.0, 11);
  for (std::uint64_t stream = 0; stream < 25; ++stream) {
    auto rec = solver.evolve_trajectory(basis_state(1, 0, p.n_max), grid, 13,
                                        stream);
    int emitted = 0;
    for (const auto& j : rec.jumps)
      if (j.channel != JumpChannel::kDephase) ++emitted;
    CHECK(emitted == 1);
  }
}

TEST_CASE("identical seeds give bit-identical records") {
  SystemParams p = device_params();
  McwfSolver solver(p, std::nullopt);
  auto grid = grid_to(200.0, 51);
  auto r1 = solver.evolve_trajectory(basis_state(1, 0, p.n_max), grid, 99, 4);
  auto r2 = solver.evolve_trajectory(basis_state(1, 0, p.n_max), grid, 99, 4);
  REQUIRE(r1.jumps.size() == r2.jumps.size());
  for (std::size_t i = 0; i < r1.jumps.size(); ++i) {
    CHECK(r1.jumps[i].time == r2.jumps[i].time);
    CHECK(r1.jumps[i].channel == r2.jumps[i].channel);
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(r1.photon_number[i] == r2.photon_number[i]);
}

TEST_CASE("checkpoint states stay normalized") {
  SystemParams p = device_params();
  McwfOptions opts;
  opts.keep_states = true;
  McwfSolver solver(p, std::nullopt);
  auto rec = solver.evolve_trajectory(basis_state(1, 0, p.n_max),
                                      grid_to(150.0, 31), 3, 0, opts);
  for (const auto& psi : rec.states)
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-10);
}

TEST_CASE("ensemble reduction is independent of the thread count") {
  SystemParams p = device_params();
  McwfSolver solver(p, std::nullopt);
  auto grid = grid_to(100.0, 21);
  auto e1 = solver.ensemble_average(basis_state(1, 0, p.n_max), grid, 24, 7, 1);
  auto e2 = solver.ensemble_average(basis_state(1, 0, p.n_max), grid, 24, 7, 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(e1.mean_photon[i] == e2.mean_photon[i]);
    CHECK(e1.stderr_photon[i] == e2.stderr_photon[i]);
  }
}

TEST_CASE("n_traj = 1 reproduces the single trajectory") {
  SystemParams p = device_params();
  McwfSolver solver(p, std::nullopt);
  auto grid = grid_to(100.0, 21);
  auto rec = solver.evolve_trajectory(basis_state(1, 0, p.n_max), grid, 21, 0);
  auto ens = solver.ensemble_average(basis_state(1, 0, p.n_max), grid, 1, 21);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(ens.mean_photon[i] == rec.photon_number[i]);
}

TEST_CASE("ensemble average converges to the master equation") {
  SystemParams p = device_params();
  p.n_max = 5;
  PulseShape pulse;
  pulse.kind = PulseShape::Kind::kGaussian;
  pulse.target = DriveTarget::kCavity;
  pulse.amplitude = 0.02;
  pulse.center = 50.0;
  pulse.fwhm = 40.0;
  auto grid = grid_to(160.0, 33);

  LindbladSystem sys(p, pulse);
  Matrix rho0 = basis_state(0, 0, p.n_max) * basis_state(0, 0, p.n_max).adjoint();
  auto master = evolve_photon_exciton(rho0, grid, sys);

  McwfSolver solver(p, pulse);
  auto ens = solver.ensemble_average(basis_state(0, 0, p.n_max), grid, 600,
                                     2024, 2);

  double scale = 0.0;
  for (double v : master.traces[0].values) scale = std::max(scale, v);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double diff = std::abs(ens.mean_photon[i] - master.traces[0].values[i]);
    if (diff <= 1e-9 + 1e-5 * scale) continue;
    CHECK(diff <= 3.5 * ens.stderr_photon[i]);
  }
}

TEST_CASE("coherent pulses into an empty cavity give Poissonian coincidences") {
  SystemParams p;
  p.kappa = 0.2;
  p.gamma = 1e-3;
  p.n_max = 6;
  PulseShape pulse;
  pulse.kind = PulseShape::Kind::kGaussian;
  pulse.target = DriveTarget::kCavity;
  pulse.amplitude = 0.035;
  pulse.center = 30.0;
  pulse.fwhm = 20.0;
  McwfSolver solver(p, pulse);
  PulsedG2Options opts;
  opts.n_pulses = 3000;
  opts.rep_period = 1000.0;
  opts.window = 150.0;
  opts.max_lag_periods = 6;
  opts.n_threads = 2;
  auto res = pulsed_g2_histogram(solver, basis_state(0, 0, p.n_max), 31, opts);
  CHECK(res.mean_photons_per_pulse > 0.1);
  CHECK(res.center_side_ratio == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("pulse-driven emitter through a fast cavity antibunches") {
  // Purcell regime: a near-pi pulse loads the dot once; at most one photon
  // leaves through the cavity per pulse, so the center window empties.
  SystemParams p;
  p.g = 0.15;
  p.kappa = 1.0;
  p.gamma = 0.002;
  p.n_max = 2;
  PulseShape pulse;
  pulse.kind = PulseShape::Kind::kGaussian;
  pulse.target = DriveTarget::kDot;
  pulse.amplitude = 0.369;  // pulse area ~ pi for fwhm 4 ps
  pulse.center = 12.0;
  pulse.fwhm = 4.0;
  McwfSolver solver(p, pulse);
  PulsedG2Options opts;
  opts.n_pulses = 4000;
  opts.rep_period = 1000.0;
  opts.window = 220.0;
  opts.max_lag_periods = 6;
  opts.n_threads = 2;
  auto res = pulsed_g2_histogram(solver, basis_state(0, 0, p.n_max), 57, opts);
  CHECK(res.center_side_ratio <= 0.3);
}
