// Trace post-processing shared by the experiment drivers: detector
// convolution, initialization-jitter averaging, exponential tail fits and
// oscillation extraction.
#pragma once

#include <vector>

namespace cqed {

// Average of time-shifted copies of f over exponentially distributed delays
// with mean `tau` (1/e time): out(t) = integral_0^inf e^{-s/tau}/tau f(t-s) ds,
// with f taken as 0 before the grid start. Evaluated exactly for the
// piecewise-linear interpolant of f via a one-pass recurrence, so every grid
// segment acts as a quadrature node. Uniform grid required.
std::vector<double> exponential_delay_average(const std::vector<double>& times,
                                              const std::vector<double>& values,
                                              double tau);

// Convolution with a normalized Gaussian of the given FWHM on a uniform
// grid (zero-padded edges). The discrete kernel is normalized to unit sum,
// so the integrated area is preserved for signals vanishing at the edges.
std::vector<double> gaussian_convolve(const std::vector<double>& times,
                                      const std::vector<double>& values,
                                      double fwhm);

struct ExponentialFit {
  double lifetime = 0.0;      // 1/e time, ps
  double amplitude = 0.0;     // value extrapolated to window start
  double t_start = 0.0, t_end = 0.0;
  double max_log_residual = 0.0;
};

// Least-squares fit of log(values) over [t_start, t_end]; requires strictly
// positive samples in the window. Throws SolverError when the window holds
// fewer than four points or the decay is non-monotone beyond tolerance.
ExponentialFit fit_exponential_tail(const std::vector<double>& times,
                                    const std::vector<double>& values,
                                    double t_start, double t_end);

// Mono-exponential tail lifetime with an automatic window: from
// `lead` ps after the global maximum down to where the trace first falls
// below `floor_fraction` of the maximum.
ExponentialFit fit_tail_auto(const std::vector<double>& times,
                             const std::vector<double>& values, double lead,
                             double floor_fraction = 5e-3);

struct Extremum {
  double time = 0.0;
  double value = 0.0;
};

// Interior local maxima with parabolic sub-sample refinement, restricted to
// samples above `threshold`.
std::vector<Extremum> find_local_maxima(const std::vector<double>& times,
                                        const std::vector<double>& values,
                                        double threshold);
std::vector<Extremum> find_local_minima(const std::vector<double>& times,
                                        const std::vector<double>& values,
                                        double threshold);

struct OscillationEstimate {
  double period = 0.0;       // mean peak-to-peak spacing, ps
  double visibility = 0.0;   // (max1 - min1) / (max1 + min1)
  int n_peaks = 0;
  bool resolvable = false;   // at least two oscillation peaks found
};

// Period from peak-to-peak spacing and contrast of the first oscillation.
// `resolvable` is false when fewer than two peaks stand out.
OscillationEstimate extract_oscillation(const std::vector<double>& times,
                                        const std::vector<double>& values,
                                        double threshold_fraction = 0.02);

// Period of a ring-down beat riding on a decaying pedestal (e.g. the field
// quadrature after a pulse): the smallest crest-to-crest spacing, since the
// pedestal stretches the early gaps. Visibility is the height ratio of the
// first two crests.
OscillationEstimate extract_signed_oscillation(
    const std::vector<double>& times, const std::vector<double>& values,
    double threshold_fraction = 5e-5);

std::vector<double> uniform_time_grid(double t0, double t1, double dt);

}  // namespace cqed
