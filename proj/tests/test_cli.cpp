#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cqed/config.hpp"
#include "cqed/csv.hpp"
#include "cqed/experiments.hpp"

using namespace cqed;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string preset_path(const std::string& name) {
  return std::string(CQED_PRESET_DIR) + "/" + name + ".json";
}

}  // namespace

TEST_CASE("bundled presets parse and validate") {
  for (const char* name :
       {"fig1f_reflectivity", "fig1g_pl", "fig2_rabi", "fig3_crossfeed",
        "fig3h_temperature", "fig4d_lifetime", "fig4_g2"}) {
    auto loaded = load_config_file(preset_path(name));
    CHECK(loaded.config.params.g > 0.0);
    CHECK(!loaded.hash.empty());
    // Round-trip through the resolved form reproduces the hash.
    auto again = load_config(loaded.resolved);
    CHECK(again.hash == loaded.hash);
  }
}

TEST_CASE("identical config and seed give byte-identical CSVs") {
  auto loaded = load_config_file(preset_path("fig1g_pl"));
  ExperimentConfig c = loaded.config;
  c.grid.t_max = 120.0;
  c.grid.dt = 0.5;

  auto run_to = [&](const std::string& path) {
    auto r = pl_decay_resonant(c);
    write_csv(path, {{"time_ps", r.times},
                     {"cavity_flux_per_ps", r.flux},
                     {"cavity_flux_bare_per_ps", r.flux_bare}});
  };
  run_to("/tmp/cqed_det_a.csv");
  run_to("/tmp/cqed_det_b.csv");
  CHECK(slurp("/tmp/cqed_det_a.csv") == slurp("/tmp/cqed_det_b.csv"));
  std::remove("/tmp/cqed_det_a.csv");
  std::remove("/tmp/cqed_det_b.csv");
}

TEST_CASE("stochastic experiments are reproducible bit for bit") {
  auto loaded = load_config_file(preset_path("fig4_g2"));
  ExperimentConfig c = loaded.config;
  c.g2.n_pulses = 200;
  c.g2.max_lag_periods = 3;
  c.threads = 2;
  auto r1 = g2_pulsed_experiment(c);
  c.threads = 1;  // thread count must not affect the result
  auto r2 = g2_pulsed_experiment(c);
  REQUIRE(r1.histogram.coincidences.size() == r2.histogram.coincidences.size());
  for (std::size_t i = 0; i < r1.histogram.coincidences.size(); ++i)
    CHECK(r1.histogram.coincidences[i] == r2.histogram.coincidences[i]);
  CHECK(r1.histogram.mean_photons_per_pulse ==
        r2.histogram.mean_photons_per_pulse);
}

#ifdef CQED_BINARY_PATH
TEST_CASE("cli binary runs an experiment and converts units") {
  std::string bin = CQED_BINARY_PATH;
  std::string out1 = "/tmp/cqed_cli_run1";
  std::string out2 = "/tmp/cqed_cli_run2";
  std::string cfg = preset_path("fig1g_pl");
  for (const std::string& out : {out1, out2}) {
    std::string cmd = bin + " run --config " + cfg +
                      " --experiment pl_decay --out " + out +
                      " > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
  }
  CHECK(slurp(out1 + "/pl_decay.csv") == slurp(out2 + "/pl_decay.csv"));

  // Manifest embeds the resolved config; reloading it reproduces the hash.
  std::ifstream mf(out1 + "/manifest.json");
  nlohmann::json manifest;
  mf >> manifest;
  auto reloaded = load_config(manifest.at("config"));
  CHECK(reloaded.hash == manifest.at("manifest").at("config_hash"));

  CHECK(std::system((bin + " convert --value 25 --from GHz --to rad/ps "
                           "> /tmp/cqed_conv.json 2>&1")
                        .c_str()) == 0);
  nlohmann::json conv;
  std::ifstream cf("/tmp/cqed_conv.json");
  cf >> conv;
  CHECK(conv.at("result").get<double>() ==
        doctest::Approx(0.15707963).epsilon(1e-8));

  // Schema violation: nonzero exit and machine-readable error JSON.
  std::ofstream bad("/tmp/cqed_bad.json");
  bad << R"({"params": {"kappa": "1 GHz", "gamma": "1 GHz", "gamma_d": "0 rad/ps"}})";
  bad.close();
  int rc = std::system((bin + " run --config /tmp/cqed_bad.json --experiment "
                              "pl_decay --out /tmp/cqed_cli_bad "
                              "> /tmp/cqed_bad_out.json 2>&1")
                           .c_str());
  CHECK(rc != 0);
  nlohmann::json err;
  std::ifstream ef("/tmp/cqed_bad_out.json");
  ef >> err;
  CHECK(err.at("error").at("field") == "params.g");
}
#endif
