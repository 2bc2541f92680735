// Adaptive embedded Dormand-Prince 5(4) integrator for complex-valued
// systems, with the standard quartic dense-output interpolant used to sample
// checkpoints inside accepted steps. Coefficients follow Hairer, Norsett &
// Wanner, Solving Ordinary Differential Equations I (DOPRI5).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "cqed/errors.hpp"
#include "cqed/operators.hpp"

namespace cqed {

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 -> choose automatically
  std::int64_t max_steps = 4'000'000;
};

// Rhs signature: void(double t, const Vector& y, Vector& dydt).
template <class Rhs>
class DormandPrince5 {
 public:
  DormandPrince5(Rhs rhs, IntegratorOptions opts, double t0, Vector y0)
      : rhs_(std::move(rhs)),
        opts_(opts),
        t_(t0),
        t_prev_(t0),
        y_(std::move(y0)),
        y_prev_(y_) {
    const auto n = y_.size();
    for (auto& k : k_) k.resize(n);
    for (auto& r : rcont_) r.resize(n);
    work_.resize(n);
    rhs_(t_, y_, k_[0]);
    ++n_rhs_;
    h_ = opts_.initial_step > 0.0 ? opts_.initial_step : guess_initial_step();
  }

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  const Vector& y() const { return y_; }
  const Vector& y_prev() const { return y_prev_; }
  std::int64_t steps_taken() const { return n_accepted_; }

  // Advances by one accepted step, never beyond t_end. Returns false when
  // t() is already at t_end.
  bool step(double t_end) {
    if (t_ >= t_end) return false;
    bool last_rejected = false;
    for (;;) {
      if (++n_attempts_ > opts_.max_steps)
        throw SolverError("integrator exceeded maximum step count");
      double h = std::min({h_, opts_.max_step, t_end - t_});
      if (!(h > 0.0) || t_ + h == t_)
        throw SolverError("integrator step size underflow at t=" +
                          std::to_string(t_));
      double err = attempt(h);
      if (err <= 1.0) {
        accept(h);
        double fac = 0.9 * std::pow(err > 1e-16 ? err : 1e-16, -0.2);
        fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
        h_ = h * fac;
        return true;
      }
      last_rejected = true;
      ++n_rejected_;
      h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }

  void integrate_to(double t_end) {
    while (step(t_end)) {
    }
  }

  // Dense-output evaluation inside the last accepted step [t_prev, t].
  Vector interpolate(double ti) const {
    double h = t_ - t_prev_;
    if (h == 0.0) return y_;
    double theta = (ti - t_prev_) / h;
    double th1 = 1.0 - theta;
    return rcont_[0] +
           theta * (rcont_[1] +
                    th1 * (rcont_[2] + theta * (rcont_[3] + th1 * rcont_[4])));
  }

 private:
  double guess_initial_step() const {
    double ynorm = y_.norm();
    double fnorm = k_[0].norm();
    double h = (fnorm > 1e-12 * std::max(ynorm, 1.0))
                   ? 0.01 * std::max(ynorm, 1.0) / fnorm
                   : 1e-3;
    return std::min(h, opts_.max_step);
  }

  // One trial step of size h; fills y_new_/k_ and returns the error norm.
  double attempt(double h) {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                            a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                            a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                            a76 = 11.0 / 84.0;
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                            c5 = 8.0 / 9.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                            e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                            e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    work_ = y_ + h * (a21 * k_[0]);
    rhs_(t_ + c2 * h, work_, k_[1]);
    work_ = y_ + h * (a31 * k_[0] + a32 * k_[1]);
    rhs_(t_ + c3 * h, work_, k_[2]);
    work_ = y_ + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
    rhs_(t_ + c4 * h, work_, k_[3]);
    work_ = y_ + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
    rhs_(t_ + c5 * h, work_, k_[4]);
    work_ = y_ + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] +
                      a65 * k_[4]);
    rhs_(t_ + h, work_, k_[5]);
    y_new_ = y_ + h * (a71 * k_[0] + a73 * k_[2] + a74 * k_[3] + a75 * k_[4] +
                       a76 * k_[5]);
    rhs_(t_ + h, y_new_, k_[6]);
    n_rhs_ += 6;

    double sum = 0.0;
    const auto n = y_.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex e = h * (e1 * k_[0](i) + e3 * k_[2](i) + e4 * k_[3](i) +
                       e5 * k_[4](i) + e6 * k_[5](i) + e7 * k_[6](i));
      double sc = opts_.atol +
                  opts_.rtol * std::max(std::abs(y_(i)), std::abs(y_new_(i)));
      double q = std::abs(e) / sc;
      sum += q * q;
    }
    return std::sqrt(sum / double(n));
  }

  void accept(double h) {
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;

    rcont_[0] = y_;
    rcont_[1] = y_new_ - y_;
    rcont_[2] = h * k_[0] - rcont_[1];
    rcont_[3] = rcont_[1] - h * k_[6] - rcont_[2];
    rcont_[4] = h * (d1 * k_[0] + d3 * k_[2] + d4 * k_[3] + d5 * k_[4] +
                     d6 * k_[5] + d7 * k_[6]);

    t_prev_ = t_;
    y_prev_ = y_;
    t_ += h;
    y_.swap(y_new_);
    k_[0].swap(k_[6]);  // FSAL
    ++n_accepted_;
  }

  Rhs rhs_;
  IntegratorOptions opts_;
  double t_, t_prev_;
  Vector y_, y_prev_, y_new_, work_;
  Vector k_[7];
  Vector rcont_[5];
  double h_ = 0.0;
  std::int64_t n_accepted_ = 0, n_rejected_ = 0, n_attempts_ = 0, n_rhs_ = 1;
};

// Integrates from (t0, y0) and invokes `sampler(t, y)` at every time in the
// strictly increasing `sample_times` (dense output inside steps).
template <class Rhs, class Sampler>
void integrate_sampled(Rhs rhs, double t0, const Vector& y0,
                       const std::vector<double>& sample_times,
                       const IntegratorOptions& opts, Sampler&& sampler) {
  DormandPrince5<Rhs> solver(std::move(rhs), opts, t0, y0);
  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] <= t0) {
    sampler(sample_times[next], solver.y());
    ++next;
  }
  if (next >= sample_times.size()) return;
  double t_end = sample_times.back();
  while (solver.step(t_end)) {
    while (next < sample_times.size() && sample_times[next] <= solver.t()) {
      sampler(sample_times[next], solver.interpolate(sample_times[next]));
      ++next;
    }
  }
}

}  // namespace cqed
