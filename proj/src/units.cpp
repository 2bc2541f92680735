#include "cqed/units.hpp"

#include <cmath>
#include <cstdlib>

#include "cqed/errors.hpp"

namespace cqed {

std::optional<Unit> parse_unit(const std::string& name) {
  if (name == "rad/ps") return Unit::kRadPerPs;
  if (name == "GHz" || name == "ghz") return Unit::kGHz;
  if (name == "ueV" || name == "uev" || name == "µeV" || name == "μeV")
    return Unit::kUeV;
  if (name == "nm") return Unit::kNm;
  if (name == "Q" || name == "q") return Unit::kQFactor;
  return std::nullopt;
}

std::string unit_name(Unit u) {
  switch (u) {
    case Unit::kRadPerPs: return "rad/ps";
    case Unit::kGHz: return "GHz";
    case Unit::kUeV: return "ueV";
    case Unit::kNm: return "nm";
    case Unit::kQFactor: return "Q";
  }
  return "?";
}

double angular_frequency_at(double lambda_nm) {
  if (lambda_nm <= 0.0) throw UnitError("wavelength must be positive");
  return kTwoPi * kSpeedOfLightNmPerPs / lambda_nm;
}

double q_factor_to_energy_decay(double q, double lambda_ref_nm) {
  if (q <= 0.0) throw UnitError("Q factor must be positive");
  return angular_frequency_at(lambda_ref_nm) / q;
}

double delta_from_wavelength_detuning(double dlambda_nm, double lambda_ref_nm) {
  return kTwoPi * kSpeedOfLightNmPerPs * dlambda_nm /
         (lambda_ref_nm * lambda_ref_nm);
}

namespace {

double nm_to_angular(double dlambda_nm, double lambda_ref_nm) {
  return -kTwoPi * kSpeedOfLightNmPerPs * dlambda_nm /
         (lambda_ref_nm * lambda_ref_nm);
}

double to_canonical(double value, Unit from, double lambda_ref_nm) {
  switch (from) {
    case Unit::kRadPerPs: return value;
    case Unit::kGHz: return ghz_to_angular(value);
    case Unit::kUeV: return uev_to_angular(value);
    case Unit::kNm: return nm_to_angular(value, lambda_ref_nm);
    case Unit::kQFactor: return q_factor_to_energy_decay(value, lambda_ref_nm);
  }
  throw UnitError("unknown unit");
}

double from_canonical(double value, Unit to, double lambda_ref_nm) {
  switch (to) {
    case Unit::kRadPerPs: return value;
    case Unit::kGHz: return angular_to_ghz(value);
    case Unit::kUeV: return angular_to_uev(value);
    case Unit::kNm:
      return -value * lambda_ref_nm * lambda_ref_nm /
             (kTwoPi * kSpeedOfLightNmPerPs);
    case Unit::kQFactor:
      if (value == 0.0) throw UnitError("cannot express zero rate as a Q factor");
      return angular_frequency_at(lambda_ref_nm) / value;
  }
  throw UnitError("unknown unit");
}

}  // namespace

double convert_units(double value, Unit from, Unit to, double lambda_ref_nm) {
  if (from != Unit::kRadPerPs && to != Unit::kRadPerPs) {
    throw UnitError("unsupported unit pair: " + unit_name(from) + " -> " +
                    unit_name(to) + " (one side must be rad/ps)");
  }
  if (!std::isfinite(value)) throw UnitError("value must be finite");
  double canonical = to_canonical(value, from, lambda_ref_nm);
  return from_canonical(canonical, to, lambda_ref_nm);
}

double parse_quantity(const std::string& text, double lambda_ref_nm) {
  const char* s = text.c_str();
  char* end = nullptr;
  double value = std::strtod(s, &end);
  if (end == s) throw UnitError("cannot parse quantity '" + text + "'");
  std::string unit_str(end);
  size_t a = unit_str.find_first_not_of(" \t");
  if (a == std::string::npos)
    throw UnitError("quantity '" + text + "' is missing a unit");
  size_t b = unit_str.find_last_not_of(" \t");
  unit_str = unit_str.substr(a, b - a + 1);
  auto unit = parse_unit(unit_str);
  if (!unit) throw UnitError("unknown unit '" + unit_str + "' in '" + text + "'");
  return convert_units(value, *unit, Unit::kRadPerPs, lambda_ref_nm);
}

}  // namespace cqed
