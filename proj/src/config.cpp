#include "cqed/config.hpp"

#include <fstream>
#include <sstream>

#include "cqed/errors.hpp"
#include "cqed/units.hpp"

namespace cqed {

using nlohmann::json;

namespace {

// Physical quantity: either a number (rad/ps) or a string with an explicit
// unit ("25 GHz"). `delta` uses the wavelength-detuning sign convention for
// nm values, every other field the generic line-shift conversion.
double parse_rate(const json& j, const std::string& field, double lambda_ref,
                  bool is_delta = false) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string text = j.get<std::string>();
    try {
      if (is_delta && text.find("nm") != std::string::npos) {
        const char* s = text.c_str();
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end == s) throw UnitError("cannot parse '" + text + "'");
        return delta_from_wavelength_detuning(v, lambda_ref);
      }
      return parse_quantity(text, lambda_ref);
    } catch (const UnitError& e) {
      throw ConfigError(field, e.what());
    }
  }
  if (j.is_object() && j.contains("q_factor")) {
    double q = j.at("q_factor").get<double>();
    return q_factor_to_energy_decay(q, lambda_ref);
  }
  if (j.is_object() && j.contains("field_rate")) {
    return from_field_decay_rate(
        parse_rate(j.at("field_rate"), field, lambda_ref));
  }
  throw ConfigError(field, "expected a number (rad/ps), a quantity string "
                           "like \"25 GHz\", or {\"q_factor\": ...}");
}

double require_rate(const json& parent, const std::string& parent_path,
                    const std::string& key, double lambda_ref,
                    bool is_delta = false) {
  if (!parent.contains(key))
    throw ConfigError(parent_path + "." + key, "required field is missing");
  return parse_rate(parent.at(key), parent_path + "." + key, lambda_ref,
                    is_delta);
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

PulseShape parse_pulse(const json& j, const SystemParams& params,
                       double lambda_ref) {
  PulseShape p;
  std::string kind = get_or<std::string>(j, "kind", "cw");
  if (kind == "cw")
    p.kind = PulseShape::Kind::kCw;
  else if (kind == "gaussian")
    p.kind = PulseShape::Kind::kGaussian;
  else
    throw ConfigError("pulse.kind", "must be 'cw' or 'gaussian'");

  std::string target = get_or<std::string>(j, "target", "cavity");
  if (target == "cavity")
    p.target = DriveTarget::kCavity;
  else if (target == "dot")
    p.target = DriveTarget::kDot;
  else
    throw ConfigError("pulse.target", "must be 'cavity' or 'dot'");

  if (j.contains("amplitude"))
    p.amplitude = parse_rate(j.at("amplitude"), "pulse.amplitude", lambda_ref);
  p.center = get_or<double>(j, "center_ps", 0.0);
  p.fwhm = get_or<double>(j, "fwhm_ps", 0.0);

  if (j.contains("carrier")) {
    const json& c = j.at("carrier");
    if (c.is_string() && c.get<std::string>() == "on_dot")
      p.carrier_detuning = -params.delta / 2.0;
    else if (c.is_string() && c.get<std::string>() == "on_cavity")
      p.carrier_detuning = params.delta / 2.0;
    else
      p.carrier_detuning = parse_rate(c, "pulse.carrier", lambda_ref);
  }
  return p;
}

}  // namespace

LoadedConfig load_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config root must be an object");
  if (j.contains("drive_xx"))
    throw UnsupportedFeatureError(
        "two-photon bi-exciton (XX) driving is not supported");

  ExperimentConfig c;
  c.lambda_ref_nm = get_or<double>(j, "reference_wavelength_nm",
                                   kDefaultReferenceWavelengthNm);
  if (!j.contains("params"))
    throw ConfigError("params", "required field is missing");
  const json& p = j.at("params");
  c.params.g = require_rate(p, "params", "g", c.lambda_ref_nm);
  c.params.kappa = require_rate(p, "params", "kappa", c.lambda_ref_nm);
  c.params.gamma = require_rate(p, "params", "gamma", c.lambda_ref_nm);
  c.params.gamma_d = require_rate(p, "params", "gamma_d", c.lambda_ref_nm);
  if (p.contains("delta"))
    c.params.delta =
        parse_rate(p.at("delta"), "params.delta", c.lambda_ref_nm, true);
  c.params.n_max = get_or<int>(p, "n_max", 5);

  if (j.contains("pulse"))
    c.pulse = parse_pulse(j.at("pulse"), c.params, c.lambda_ref_nm);

  if (j.contains("detector")) {
    const json& d = j.at("detector");
    c.detector.irf_fwhm = get_or<double>(d, "irf_fwhm_ps", 3.0);
    c.detector.bin = get_or<double>(d, "bin_ps", 0.25);
  }

  c.p_dark = get_or<double>(j, "p_dark", 0.0);
  c.jitter_tau = get_or<double>(j, "jitter_tau_ps", 0.0);

  std::string obs = get_or<std::string>(j, "observable", "photon_number");
  if (obs == "photon_number")
    c.observable = ReflectivityObservable::kPhotonNumber;
  else if (obs == "coherent_field")
    c.observable = ReflectivityObservable::kCoherentField;
  else if (obs == "quadrature")
    c.observable = ReflectivityObservable::kQuadrature;
  else
    throw ConfigError("observable", "must be 'photon_number', "
                      "'coherent_field' or 'quadrature'");

  if (j.contains("collection")) {
    const json& col = j.at("collection");
    c.collection_cavity_weight = get_or<double>(col, "cavity_weight", 1.0);
    c.collection_dot_weight = get_or<double>(col, "dot_weight", 0.0);
  }

  if (j.contains("scan")) {
    const json& s = j.at("scan");
    if (s.contains("min"))
      c.scan.min = parse_rate(s.at("min"), "scan.min", c.lambda_ref_nm);
    if (s.contains("max"))
      c.scan.max = parse_rate(s.at("max"), "scan.max", c.lambda_ref_nm);
    c.scan.points = get_or<int>(s, "points", c.scan.points);
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    c.grid.t_max = get_or<double>(g, "t_max_ps", c.grid.t_max);
    c.grid.dt = get_or<double>(g, "dt_ps", c.grid.dt);
  }

  if (j.contains("temperature")) {
    const json& t = j.at("temperature");
    c.temperature.temperatures =
        get_or<std::vector<double>>(t, "list_K", {});
    if (t.contains("gamma0"))
      c.temperature.gamma0 =
          parse_rate(t.at("gamma0"), "temperature.gamma0", c.lambda_ref_nm);
    c.temperature.alpha0_uev_per_k =
        get_or<double>(t, "alpha0_ueV_per_K", 0.5);
    if (t.contains("detuning_map")) {
      const json& m = t.at("detuning_map");
      c.temperature.delta_ref_nm = get_or<double>(m, "delta_ref_nm", -1.17);
      c.temperature.t_ref_k = get_or<double>(m, "t_ref_K", 10.0);
      c.temperature.slope_nm_per_k =
          get_or<double>(m, "slope_nm_per_K", 0.0731);
    }
  }

  if (j.contains("g2")) {
    const json& g = j.at("g2");
    c.g2.rep_period = get_or<double>(g, "rep_period_ps", c.g2.rep_period);
    c.g2.n_pulses = get_or<int>(g, "n_pulses", c.g2.n_pulses);
    c.g2.window = get_or<double>(g, "window_ps", c.g2.window);
    c.g2.detector_sigma =
        get_or<double>(g, "detector_jitter_sigma_ps", c.g2.detector_sigma);
    c.g2.max_lag_periods =
        get_or<int>(g, "max_lag_periods", c.g2.max_lag_periods);
    if (g.contains("cw_amplitude"))
      c.g2.cw_amplitude =
          parse_rate(g.at("cw_amplitude"), "g2.cw_amplitude", c.lambda_ref_nm);
    c.g2.tau_max = get_or<double>(g, "tau_max_ps", c.g2.tau_max);
  }

  c.power_scales =
      get_or<std::vector<double>>(j, "power_scales", c.power_scales);
  c.seed = get_or<std::uint64_t>(j, "seed", 1);
  if (j.contains("mcwf"))
    c.n_traj = get_or<int>(j.at("mcwf"), "n_traj", c.n_traj);
  c.threads = get_or<int>(j, "threads", 1);
  c.description = get_or<std::string>(j, "description", "");

  c.validate();

  LoadedConfig out;
  out.config = c;
  out.resolved = config_to_json(c);
  out.hash = config_hash(out.resolved);
  return out;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", "cannot open config file '" + path + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("JSON parse error: ") + e.what());
  }
  return load_config(j);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["reference_wavelength_nm"] = c.lambda_ref_nm;
  j["params"] = {{"g", c.params.g},       {"kappa", c.params.kappa},
                 {"gamma", c.params.gamma}, {"gamma_d", c.params.gamma_d},
                 {"delta", c.params.delta}, {"n_max", c.params.n_max}};
  j["pulse"] = {{"kind", PulseShape::kind_name(c.pulse.kind)},
                {"target", PulseShape::target_name(c.pulse.target)},
                {"amplitude", c.pulse.amplitude},
                {"center_ps", c.pulse.center},
                {"fwhm_ps", c.pulse.fwhm},
                {"carrier", c.pulse.carrier_detuning}};
  j["detector"] = {{"irf_fwhm_ps", c.detector.irf_fwhm},
                   {"bin_ps", c.detector.bin}};
  j["p_dark"] = c.p_dark;
  j["jitter_tau_ps"] = c.jitter_tau;
  j["observable"] =
      c.observable == ReflectivityObservable::kPhotonNumber ? "photon_number"
      : c.observable == ReflectivityObservable::kCoherentField
          ? "coherent_field"
          : "quadrature";
  j["collection"] = {{"cavity_weight", c.collection_cavity_weight},
                     {"dot_weight", c.collection_dot_weight}};
  j["scan"] = {{"min", c.scan.min}, {"max", c.scan.max},
               {"points", c.scan.points}};
  j["grid"] = {{"t_max_ps", c.grid.t_max}, {"dt_ps", c.grid.dt}};
  j["temperature"] = {
      {"list_K", c.temperature.temperatures},
      {"gamma0", c.temperature.gamma0},
      {"alpha0_ueV_per_K", c.temperature.alpha0_uev_per_k},
      {"detuning_map",
       {{"delta_ref_nm", c.temperature.delta_ref_nm},
        {"t_ref_K", c.temperature.t_ref_k},
        {"slope_nm_per_K", c.temperature.slope_nm_per_k}}}};
  j["g2"] = {{"rep_period_ps", c.g2.rep_period},
             {"n_pulses", c.g2.n_pulses},
             {"window_ps", c.g2.window},
             {"detector_jitter_sigma_ps", c.g2.detector_sigma},
             {"max_lag_periods", c.g2.max_lag_periods},
             {"cw_amplitude", c.g2.cw_amplitude},
             {"tau_max_ps", c.g2.tau_max}};
  j["power_scales"] = c.power_scales;
  j["seed"] = c.seed;
  j["mcwf"] = {{"n_traj", c.n_traj}};
  j["threads"] = c.threads;
  j["description"] = c.description;
  return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const json& canonical) {
  // nlohmann::json keeps object keys sorted, so dump() is canonical.
  std::uint64_t h = fnv1a64(canonical.dump());
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace cqed
