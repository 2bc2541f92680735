// cqedsim: config-driven simulations of a driven two-level emitter coupled
// to a single cavity mode. Experiments write CSV traces plus a JSON manifest
// with the resolved configuration and a deterministic config hash.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqed/config.hpp"
#include "cqed/csv.hpp"
#include "cqed/errors.hpp"
#include "cqed/experiments.hpp"
#include "cqed/spectra.hpp"
#include "cqed/units.hpp"
#include "cqed/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cqed;

namespace {

struct RunOutput {
  std::vector<std::string> files;
  json results;  // experiment-specific scalars
};

void write_table(const fs::path& dir, const std::string& name,
                 const std::vector<CsvColumn>& cols, RunOutput& out) {
  fs::path p = dir / name;
  write_csv(p.string(), cols);
  out.files.push_back(name);
}

RunOutput run_experiment(const std::string& name, const ExperimentConfig& cfg,
                         const fs::path& out_dir) {
  RunOutput out;
  if (name == "reflectivity_scan") {
    auto r = reflectivity_scan(cfg);
    write_table(out_dir, "reflectivity_scan.csv",
                {{"laser_detuning_radps", r.laser_detuning},
                 {"signal", r.signal},
                 {"signal_coupled", r.coupled},
                 {"signal_empty", r.empty}},
                out);
  } else if (name == "pulsed_reflectivity") {
    auto r = pulsed_reflectivity(cfg);
    std::vector<CsvColumn> cols = {{"time_ps", r.times}};
    for (std::size_t k = 0; k < r.traces.size(); ++k)
      cols.push_back({"signal_power" + std::to_string(k), r.traces[k]});
    cols.push_back({"signal_empty_lowest_power", r.empty_trace});
    write_table(out_dir, "pulsed_reflectivity.csv", cols, out);
    json osc = json::array();
    for (const auto& o : r.oscillation)
      osc.push_back({{"period_ps", o.period},
                     {"visibility", o.visibility},
                     {"n_peaks", o.n_peaks},
                     {"resolvable", o.resolvable}});
    out.results["oscillation"] = osc;
  } else if (name == "pl_decay") {
    auto r = pl_decay_resonant(cfg);
    write_table(out_dir, "pl_decay.csv",
                {{"time_ps", r.times},
                 {"cavity_flux_per_ps", r.flux},
                 {"cavity_flux_bare_per_ps", r.flux_bare}},
                out);
    out.results["lifetime_ps"] = r.fit.lifetime;
    out.results["fit_window_ps"] = {r.fit.t_start, r.fit.t_end};
  } else if (name == "detuned_drive") {
    auto r = detuned_resonant_drive(cfg);
    write_table(out_dir, "detuned_drive.csv",
                {{"time_ps", r.times},
                 {"cavity_flux_per_ps", r.cavity_flux},
                 {"dot_flux_per_ps", r.dot_flux}},
                out);
    out.results["lifetime_ps"] = r.fit.lifetime;
  } else if (name == "cross_feeding") {
    auto r = cross_feeding_scan(cfg);
    write_table(out_dir, "cross_feeding.csv",
                {{"laser_detuning_radps", r.laser_detuning},
                 {"cavity_flux_total_per_ps", r.cavity_flux_total},
                 {"cavity_flux_incoherent_per_ps", r.cavity_flux_incoherent},
                 {"dot_flux_total_per_ps", r.dot_flux_total},
                 {"dot_flux_incoherent_per_ps", r.dot_flux_incoherent}},
                out);
  } else if (name == "temperature_series") {
    auto r = temperature_series(cfg);
    write_table(out_dir, "temperature_series.csv",
                {{"temperature_K", r.temperatures},
                 {"delta_radps", r.delta},
                 {"gamma_d_radps", r.gamma_d},
                 {"cavity_line_flux_per_ps", r.cavity_flux},
                 {"cavity_flux_total_per_ps", r.cavity_flux_total}},
                out);
  } else if (name == "g2_cw") {
    auto r = g2_cw_experiment(cfg);
    write_table(out_dir, "g2_cw.csv", {{"tau_ps", r.tau}, {"g2", r.g2}}, out);
    out.results["g2_zero"] = r.g2_zero;
    out.results["g2_infinity"] = r.g2_infinity;
  } else if (name == "g2_pulsed") {
    auto r = g2_pulsed_experiment(cfg);
    write_table(out_dir, "g2_pulsed.csv",
                {{"lag_periods", r.histogram.lag_periods},
                 {"coincidences", r.histogram.coincidences}},
                out);
    out.results["center_side_ratio"] = r.histogram.center_side_ratio;
    out.results["mean_photons_per_pulse"] =
        r.histogram.mean_photons_per_pulse;
    out.results["pileup_warning"] = r.histogram.pileup_warning;
  } else if (name == "spectra_compare") {
    auto r = spectra_compare(cfg);
    write_table(out_dir, "spectra_compare.csv",
                {{"omega_radps", r.omega},
                 {"analytic_cavity", r.analytic.s_cav},
                 {"numeric_cavity", r.numeric.s_cav},
                 {"analytic_dot", r.analytic.s_qd},
                 {"numeric_dot", r.numeric.s_qd}},
                out);
    out.results["rel_l2_cavity"] = r.rel_l2_cavity;
    out.results["rel_l2_dot"] = r.rel_l2_dot;
    out.results["numeric_decayed"] = r.numeric.decayed;
  } else {
    throw ConfigError("experiment",
                      "unknown experiment '" + name +
                          "'; expected one of reflectivity_scan, "
                          "pulsed_reflectivity, pl_decay, detuned_drive, "
                          "cross_feeding, temperature_series, g2_cw, "
                          "g2_pulsed, spectra_compare");
  }
  return out;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const TruncationError*>(&e)) return 3;
  if (dynamic_cast<const UnsupportedFeatureError*>(&e)) return 4;
  return 2;
}

void print_error_json(const Error& e) {
  json j = {{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
  if (auto* c = dynamic_cast<const ConfigError*>(&e))
    j["error"]["field"] = c->field();
  std::cout << j.dump(2) << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum dot / cavity simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path, experiment, out_dir;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  int threads_override = 0;

  auto* run = app.add_subcommand("run", "run an experiment from a config");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--experiment", experiment, "experiment name")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option_function<std::uint64_t>(
      "--seed",
      [&](const std::uint64_t& v) {
        seed_override = v;
        seed_given = true;
      },
      "master seed override");
  run->add_option("--threads", threads_override, "worker thread override");

  double conv_value = 0.0;
  std::string conv_from, conv_to;
  double lambda_ref = kDefaultReferenceWavelengthNm;
  auto* conv = app.add_subcommand("convert", "unit conversion");
  conv->add_option("--value", conv_value, "value to convert")->required();
  conv->add_option("--from", conv_from, "unit: rad/ps, GHz, ueV, nm, Q")
      ->required();
  conv->add_option("--to", conv_to, "unit: rad/ps, GHz, ueV, nm, Q")
      ->required();
  conv->add_option("--lambda-ref", lambda_ref, "reference wavelength (nm)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) {
      auto from = parse_unit(conv_from);
      auto to = parse_unit(conv_to);
      if (!from) throw UnitError("unknown unit '" + conv_from + "'");
      if (!to) throw UnitError("unknown unit '" + conv_to + "'");
      double result = convert_units(conv_value, *from, *to, lambda_ref);
      json j = {{"value", conv_value}, {"from", conv_from},
                {"to", conv_to},       {"result", result},
                {"lambda_ref_nm", lambda_ref}};
      std::cout << j.dump(2) << std::endl;
      return 0;
    }

    LoadedConfig loaded = load_config_file(config_path);
    if (seed_given) loaded.config.seed = seed_override;
    if (threads_override > 0) loaded.config.threads = threads_override;
    if (const char* env = std::getenv("CQEDSIM_THREADS")) {
      int n = std::atoi(env);
      if (n > 0) loaded.config.threads = n;
    }
    if (loaded.config.threads <= 0)
      loaded.config.threads =
          int(std::max(1u, std::thread::hardware_concurrency()));
    // Seed/thread overrides are part of the resolved config.
    loaded.resolved = config_to_json(loaded.config);
    loaded.hash = config_hash(loaded.resolved);

    fs::create_directories(out_dir);
    auto t0 = std::chrono::steady_clock::now();
    RunOutput out = run_experiment(experiment, loaded.config, out_dir);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();

    json manifest = {
        {"manifest",
         {{"experiment", experiment},
          {"config_hash", loaded.hash},
          {"artifact_version", kVersion},
          {"duration_ms", ms},
          {"master_seed", loaded.config.seed},
          {"outputs", out.files}}},
        {"results", out.results},
        {"config", loaded.resolved},
    };
    std::ofstream mf(fs::path(out_dir) / "manifest.json");
    mf << manifest.dump(2) << "\n";
    if (!mf) throw SolverError("failed to write manifest");

    std::cout << json({{"status", "ok"},
                       {"config_hash", loaded.hash},
                       {"outputs", out.files}})
                     .dump(2)
              << std::endl;
    return 0;
  } catch (const Error& e) {
    print_error_json(e);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cout << json({{"error",
                        {{"kind", "internal"}, {"message", e.what()}}}})
                     .dump(2)
              << std::endl;
    return 5;
  }
}
