// Physical constants in the internal unit system (time in ps, angular
// frequency in rad/ps, length in nm).
#pragma once

namespace cqed {

// Speed of light, nm/ps.
inline constexpr double kSpeedOfLightNmPerPs = 299792.458;

// Reduced Planck constant, ueV*ps.
inline constexpr double kHbarUevPs = 658.2119569;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Default reference wavelength for nm<->rad/ps and Q-factor conversions.
inline constexpr double kDefaultReferenceWavelengthNm = 920.0;

}  // namespace cqed
