#include <doctest.h>

#include <cmath>

#include "cqed/errors.hpp"
#include "cqed/integrator.hpp"

using namespace cqed;

namespace {

// dy/dt = (i w - r) y, exact solution y0 exp((i w - r) t).
struct Rotor {
  double w, r;
  void operator()(double, const Vector& y, Vector& dydt) const {
    dydt = Complex(-r, w) * y;
  }
};

}  // namespace

TEST_CASE("complex exponential against the closed form") {
  Rotor f{2.0, 0.05};
  Vector y0(1);
  y0(0) = Complex(1.0, 0.5);
  IntegratorOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-14;
  DormandPrince5<Rotor> solver(f, opts, 0.0, y0);
  solver.integrate_to(20.0);
  Complex exact = y0(0) * std::exp(Complex(-0.05, 2.0) * 20.0);
  CHECK(std::abs(solver.y()(0) - exact) <= 1e-8);
}

TEST_CASE("dense output samples match the closed form inside steps") {
  Rotor f{3.0, 0.1};
  Vector y0(1);
  y0(0) = 1.0;
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(0.05 * i);
  IntegratorOptions opts;
  opts.rtol = 1e-9;
  opts.atol = 1e-12;
  double worst = 0.0;
  integrate_sampled(f, 0.0, y0, grid, opts, [&](double t, const Vector& y) {
    Complex exact = std::exp(Complex(-0.1, 3.0) * t);
    worst = std::max(worst, std::abs(y(0) - exact));
  });
  CHECK(worst <= 1e-6);
}

TEST_CASE("tighter tolerance gives smaller error") {
  Rotor f{5.0, 0.0};
  Vector y0(1);
  y0(0) = 1.0;
  auto run = [&](double rtol) {
    IntegratorOptions opts;
    opts.rtol = rtol;
    opts.atol = 1e-16;
    DormandPrince5<Rotor> solver(f, opts, 0.0, y0);
    solver.integrate_to(50.0);
    return std::abs(solver.y()(0) - std::exp(Complex(0.0, 5.0) * 50.0));
  };
  double loose = run(1e-5);
  double tight = run(1e-11);
  CHECK(tight < loose);
  CHECK(tight <= 1e-7);
}

TEST_CASE("step budget violation raises a solver error") {
  Rotor f{100.0, 0.0};
  Vector y0(1);
  y0(0) = 1.0;
  IntegratorOptions opts;
  opts.max_steps = 10;
  DormandPrince5<Rotor> solver(f, opts, 0.0, y0);
  CHECK_THROWS_AS(solver.integrate_to(1e5), SolverError);
}

TEST_CASE("two-component system with coupling") {
  // d/dt (u, v) = ((0, g), (-g, 0)) (u, v): rotation, |u|^2 = cos^2(g t).
  double g = 0.7;
  auto f = [g](double, const Vector& y, Vector& dydt) {
    dydt.resize(2);
    dydt(0) = g * y(1);
    dydt(1) = -g * y(0);
  };
  Vector y0(2);
  y0 << 1.0, 0.0;
  IntegratorOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-14;
  DormandPrince5<decltype(f)> solver(f, opts, 0.0, y0);
  solver.integrate_to(12.0);
  CHECK(std::abs(solver.y()(0) - std::cos(g * 12.0)) <= 1e-8);
  CHECK(std::abs(solver.y()(1) + std::sin(g * 12.0)) <= 1e-8);
}
