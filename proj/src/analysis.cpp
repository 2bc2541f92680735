#include "cqed/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

void require_uniform(const std::vector<double>& times) {
  if (times.size() < 2) throw SolverError("grid too short");
  double dt = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    double d = times[i] - times[i - 1];
    if (std::abs(d - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw SolverError("uniform time grid required");
  }
}

}  // namespace

std::vector<double> exponential_delay_average(const std::vector<double>& times,
                                              const std::vector<double>& values,
                                              double tau) {
  if (times.size() != values.size()) throw SolverError("size mismatch");
  if (tau <= 0.0) return values;  // delta-distribution limit
  require_uniform(times);
  // out(t_i) = e^{-dt/tau} out(t_{i-1}) + segment term, exact for the
  // piecewise-linear f with f = 0 before the grid start.
  double dt = times[1] - times[0];
  double beta = dt / tau;
  double decay = std::exp(-beta);
  double w0 = 1.0 - decay;                  // weight of the left sample
  double w1 = (beta - 1.0 + decay) / beta;  // weight of the slope term
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 1; i < values.size(); ++i)
    out[i] = decay * out[i - 1] + values[i - 1] * w0 +
             (values[i] - values[i - 1]) * w1;
  return out;
}

std::vector<double> gaussian_convolve(const std::vector<double>& times,
                                      const std::vector<double>& values,
                                      double fwhm) {
  if (times.size() != values.size()) throw SolverError("size mismatch");
  if (fwhm <= 0.0) return values;
  require_uniform(times);
  double dt = times[1] - times[0];
  double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  int half = std::max(1, int(std::ceil(5.0 * sigma / dt)));
  std::vector<double> kernel(2 * half + 1);
  double sum = 0.0;
  for (int k = -half; k <= half; ++k) {
    double x = k * dt / sigma;
    kernel[k + half] = std::exp(-0.5 * x * x);
    sum += kernel[k + half];
  }
  for (auto& v : kernel) v /= sum;

  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) {
      long j = long(i) - k;
      if (j >= 0 && j < long(values.size())) acc += kernel[k + half] * values[j];
    }
    out[i] = acc;
  }
  return out;
}

ExponentialFit fit_exponential_tail(const std::vector<double>& times,
                                    const std::vector<double>& values,
                                    double t_start, double t_end) {
  if (times.size() != values.size()) throw SolverError("size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_start || times[i] > t_end) continue;
    if (values[i] <= 0.0)
      throw SolverError("tail fit window contains non-positive samples");
    double x = times[i], y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 4) throw SolverError("tail fit window holds fewer than four points");
  double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw SolverError("degenerate tail fit window");
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  if (slope >= 0.0)
    throw SolverError("trace does not decay over the fit window");

  ExponentialFit fit;
  fit.lifetime = -1.0 / slope;
  fit.t_start = t_start;
  fit.t_end = t_end;
  fit.amplitude = std::exp(intercept + slope * t_start);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_start || times[i] > t_end) continue;
    double r = std::log(values[i]) - (intercept + slope * times[i]);
    fit.max_log_residual = std::max(fit.max_log_residual, std::abs(r));
  }
  return fit;
}

ExponentialFit fit_tail_auto(const std::vector<double>& times,
                             const std::vector<double>& values, double lead,
                             double floor_fraction) {
  if (times.empty()) throw SolverError("empty trace");
  std::size_t imax = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[imax]) imax = i;
  double peak = values[imax];
  if (peak <= 0.0) throw SolverError("trace has no positive peak");
  double t_start = times[imax] + lead;
  double t_end = times.back();
  for (std::size_t i = imax; i < times.size(); ++i) {
    if (times[i] > t_start && values[i] < floor_fraction * peak) {
      t_end = times[i];
      break;
    }
  }
  return fit_exponential_tail(times, values, t_start, t_end);
}

namespace {

std::vector<Extremum> find_extrema(const std::vector<double>& times,
                                   const std::vector<double>& values,
                                   double threshold, bool maxima) {
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    double sgn = maxima ? 1.0 : -1.0;
    if (!(sgn * values[i] >= sgn * values[i - 1] &&
          sgn * values[i] > sgn * values[i + 1]))
      continue;
    if (maxima ? values[i] < threshold : values[i] > threshold) continue;
    // Parabolic vertex through the three samples (sign-agnostic).
    double vl = values[i - 1], v = values[i], vr = values[i + 1];
    double dt = 0.5 * (times[i + 1] - times[i - 1]);
    double denom = vl - 2.0 * v + vr;
    double shift = (std::abs(denom) > 1e-300) ? 0.5 * (vl - vr) / denom : 0.0;
    shift = std::clamp(shift, -1.0, 1.0);
    out.push_back({times[i] + shift * dt, v - 0.25 * (vl - vr) * shift});
  }
  return out;
}

}  // namespace

std::vector<Extremum> find_local_maxima(const std::vector<double>& times,
                                        const std::vector<double>& values,
                                        double threshold) {
  return find_extrema(times, values, threshold, true);
}

std::vector<Extremum> find_local_minima(const std::vector<double>& times,
                                        const std::vector<double>& values,
                                        double threshold) {
  return find_extrema(times, values, threshold, false);
}

OscillationEstimate extract_oscillation(const std::vector<double>& times,
                                        const std::vector<double>& values,
                                        double threshold_fraction) {
  double peak = *std::max_element(values.begin(), values.end());
  auto maxima = find_local_maxima(times, values, threshold_fraction * peak);
  OscillationEstimate est;
  est.n_peaks = int(maxima.size());
  if (maxima.size() < 2) return est;
  est.resolvable = true;
  double spacing = 0.0;
  for (std::size_t i = 1; i < maxima.size(); ++i)
    spacing += maxima[i].time - maxima[i - 1].time;
  est.period = spacing / double(maxima.size() - 1);

  auto minima = find_local_minima(times, values, peak * 10.0);
  // First minimum after the first maximum.
  for (const auto& m : minima) {
    if (m.time > maxima[0].time) {
      est.visibility =
          (maxima[0].value - m.value) / (maxima[0].value + m.value);
      break;
    }
  }
  return est;
}

OscillationEstimate extract_signed_oscillation(
    const std::vector<double>& times, const std::vector<double>& values,
    double threshold_fraction) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  double thr = threshold_fraction * peak;
  auto maxima = find_local_maxima(times, values, thr);

  OscillationEstimate est;
  est.n_peaks = int(maxima.size());
  if (maxima.size() < 3) return est;
  est.resolvable = true;

  // A decaying pedestal under the ring stretches the early crest gaps; the
  // late free-ring spacing is the smallest gap.
  double min_gap = 1e300;
  for (std::size_t i = 1; i < maxima.size(); ++i)
    min_gap = std::min(min_gap, maxima[i].time - maxima[i - 1].time);
  est.period = min_gap;

  if (maxima[0].value > 0.0)
    est.visibility = maxima[1].value / maxima[0].value;
  return est;
}

std::vector<double> uniform_time_grid(double t0, double t1, double dt) {
  if (!(dt > 0.0) || !(t1 > t0)) throw SolverError("invalid time grid bounds");
  int n = int(std::round((t1 - t0) / dt)) + 1;
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = t0 + i * dt;
  return g;
}

}  // namespace cqed
