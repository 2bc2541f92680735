#pragma once

#include <cmath>
#include <string>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/operators.hpp"

namespace cqed {

// Classical drive envelope. `amplitude` is the peak Rabi-type rate E0 in
// rad/ps; the carrier is specified as a detuning from the symmetric
// reference frequency, and all simulations run in the carrier frame.
struct PulseShape {
  enum class Kind { kCw, kGaussian };

  Kind kind = Kind::kCw;
  DriveTarget target = DriveTarget::kCavity;
  double amplitude = 0.0;          // E0, rad/ps
  double center = 0.0;             // t0, ps (gaussian)
  double fwhm = 0.0;               // intensity-profile FWHM, ps (gaussian)
  double carrier_detuning = 0.0;   // omega_p - omega_ref, rad/ps

  void validate() const {
    if (!(amplitude >= 0.0))
      throw ConfigError("pulse.amplitude", "must be >= 0");
    if (kind == Kind::kGaussian && !(fwhm > 0.0))
      throw ConfigError("pulse.fwhm_ps", "must be > 0 for a gaussian pulse");
  }

  // E(t) = E0 exp(-(t-t0)^2 / (2 sigma_t^2)) with fwhm = 2 sqrt(2 ln 2) sigma_t.
  double envelope(double t) const {
    if (kind == Kind::kCw) return amplitude;
    double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    double x = (t - center) / sigma;
    return amplitude * std::exp(-0.5 * x * x);
  }

  static std::string kind_name(Kind k) {
    return k == Kind::kCw ? "cw" : "gaussian";
  }
  static std::string target_name(DriveTarget t) {
    return t == DriveTarget::kCavity ? "cavity" : "dot";
  }
};

}  // namespace cqed
