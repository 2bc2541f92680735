// Unit conversions between the internal canonical unit (angular frequency,
// rad/ps) and the units experimental inputs usually come in: ordinary
// frequency (GHz), energy (ueV), wavelength detuning (nm at a reference
// wavelength) and cavity quality factor. Every physical quantity crossing
// the library boundary goes through these converters.
#pragma once

#include <optional>
#include <string>

#include "cqed/constants.hpp"

namespace cqed {

enum class Unit {
  kRadPerPs,   // canonical angular frequency
  kGHz,        // ordinary frequency
  kUeV,        // energy
  kNm,         // wavelength shift at the reference wavelength
  kQFactor,    // quality factor at the reference wavelength
};

std::optional<Unit> parse_unit(const std::string& name);
std::string unit_name(Unit u);

// Angular frequency of light at `lambda_nm`.
double angular_frequency_at(double lambda_nm);

// Converts `value` from `from` to `to`. Wavelength and Q conversions are
// evaluated at `lambda_ref_nm`. Supported pairs are every unit to/from
// rad/ps; anything else throws UnitError.
//
// The nm conversion is the first-order line-shift formula
//   d_omega = -2*pi*c * d_lambda / lambda_ref^2,
// i.e. a line moving to longer wavelength moves to lower frequency.
double convert_units(double value, Unit from, Unit to,
                     double lambda_ref_nm = kDefaultReferenceWavelengthNm);

inline double ghz_to_angular(double ghz) { return kTwoPi * 1e-3 * ghz; }
inline double angular_to_ghz(double rad_per_ps) {
  return rad_per_ps / (kTwoPi * 1e-3);
}

inline double uev_to_angular(double uev) { return uev / kHbarUevPs; }
inline double angular_to_uev(double rad_per_ps) {
  return rad_per_ps * kHbarUevPs;
}

// Energy decay rate of a cavity with quality factor q at lambda_ref_nm.
double q_factor_to_energy_decay(double q, double lambda_ref_nm);

// A detector or main-text table quoting a *field* (amplitude) decay rate is
// converted to the internal energy/population decay convention by doubling.
inline double from_field_decay_rate(double field_rate) {
  return 2.0 * field_rate;
}

// Cavity--emitter detuning delta = omega_cavity - omega_dot from the
// wavelength detuning d_lambda = lambda_dot - lambda_cavity (nm). The sign
// is preserved: a blue-detuned dot (negative d_lambda) gives negative delta.
double delta_from_wavelength_detuning(
    double dlambda_nm, double lambda_ref_nm = kDefaultReferenceWavelengthNm);

// Parses a quantity string of the form "<number> <unit>" ("25 GHz",
// "-1.2 nm", "0.2 rad/ps") into rad/ps. Throws UnitError on a malformed
// string or unsupported unit.
double parse_quantity(const std::string& text,
                      double lambda_ref_nm = kDefaultReferenceWavelengthNm);

}  // namespace cqed
