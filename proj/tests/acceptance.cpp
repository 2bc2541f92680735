// Acceptance suite: runs every headline check against the bundled presets at
// its stated tolerance and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cqed/analysis.hpp"
#include "cqed/config.hpp"
#include "cqed/errors.hpp"
#include "cqed/experiments.hpp"
#include "cqed/linear_model.hpp"
#include "cqed/master.hpp"
#include "cqed/spectra.hpp"
#include "cqed/units.hpp"

using namespace cqed;

namespace {

int g_failures = 0;

ExperimentConfig preset(const std::string& name) {
  std::string path = std::string(CQED_PRESET_DIR) + "/" + name + ".json";
  ExperimentConfig c = load_config_file(path).config;
  c.threads = 2;
  return c;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void report(const char* id, bool pass, const std::string& detail,
            double seconds, double budget_s) {
  bool in_budget = seconds < budget_s;
  if (!pass || !in_budget) ++g_failures;
  std::printf("%s %s: %s [%.1f s / budget %.0f s%s]\n", id,
              (pass && in_budget) ? "PASS" : "FAIL", detail.c_str(), seconds,
              budget_s, in_budget ? "" : " EXCEEDED");
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// --- C1: vacuum Rabi doublet in the cw reflectivity scan -------------------
void criterion_1() {
  Timer timer;
  auto c = preset("fig1f_reflectivity");
  auto r = reflectivity_scan(c);
  double peak = *std::max_element(r.signal.begin(), r.signal.end());
  auto maxima = find_local_maxima(r.laser_detuning, r.signal, 0.5 * peak);
  bool doublet = maxima.size() == 2;
  double sep = doublet ? maxima.back().time - maxima.front().time : 0.0;
  auto lc = linear_coeffs(c.params);
  double expect = 2.0 * std::abs(lc.lambda_plus.imag());
  double sep_err = std::abs(sep - expect) / expect;
  double dip = r.signal[r.signal.size() / 2] / peak;
  bool pass = doublet && sep_err <= 0.02 && dip < 0.30;
  report("C1", pass,
         fmt("vacuum Rabi doublet: separation %.5f vs 2 Im(lambda+) %.5f "
             "(err %.2f%%, tol 2%%); on-resonance dip %.3f of peak (tol "
             "< 0.30)",
             sep, expect, 100.0 * sep_err, dip),
         timer.seconds(), 10.0);
}

// --- C2: time-domain Rabi period and power-dependent visibility ------------
void criterion_2() {
  Timer timer;
  auto c = preset("fig2_rabi");
  auto r = pulsed_reflectivity(c);
  double period = r.oscillation[0].period;
  double period_err = std::abs(period - 40.0) / 40.0;
  bool monotone = r.oscillation.size() == 3 &&
                  r.oscillation[0].visibility > r.oscillation[1].visibility &&
                  r.oscillation[1].visibility > r.oscillation[2].visibility;
  bool pass = r.oscillation[0].resolvable && period_err <= 0.05 && monotone;
  report("C2", pass,
         fmt("Rabi period %.2f ps vs 40 ps (err %.2f%%, tol 5%%); "
             "visibility %.4f > %.4f > %.4f %s",
             period, 100.0 * period_err, r.oscillation[0].visibility,
             r.oscillation[1].visibility, r.oscillation[2].visibility,
             monotone ? "(monotone)" : "(NOT monotone)"),
         timer.seconds(), 30.0);
}

// --- C3: resonant PL lifetime ----------------------------------------------
void criterion_3() {
  Timer timer;
  auto c = preset("fig1g_pl");
  auto r = pl_decay_resonant(c);
  double err = std::abs(r.fit.lifetime - 17.0) / 17.0;
  bool pass = err <= 0.20;
  report("C3", pass,
         fmt("resonant PL 1/e tail lifetime %.2f ps vs 17 ps (err %.1f%%, "
             "tol 20%%)",
             r.fit.lifetime, 100.0 * err),
         timer.seconds(), 10.0);
}

// --- C4: detuned-drive lifetime and dephasing-rate recovery ----------------
void criterion_4() {
  Timer timer;
  auto c = preset("fig4d_lifetime");
  auto r = detuned_resonant_drive(c);
  double err = std::abs(r.fit.lifetime - 118.0) / 118.0;

  double g = c.params.g;
  auto fitres = fit_gamma_d_to_lifetime(c, 118.0, 0.02 * g, 0.3 * g);
  double recovered = fitres.gamma_d / g;
  bool pass = err <= 0.25 && std::abs(recovered - 0.10) <= 0.02;
  report("C4", pass,
         fmt("detuned cavity-emission lifetime %.1f ps vs 118 ps (err "
             "%.1f%%, tol 25%%); recovered gamma_d/g %.4f vs 0.10 +- 0.02",
             r.fit.lifetime, 100.0 * err, recovered),
         timer.seconds(), 120.0);
}

// --- C5: solver cross-validation -------------------------------------------
void criterion_5() {
  Timer timer;
  const char* names[] = {"fig1f_reflectivity", "fig1g_pl",
                         "fig2_rabi",          "fig3_crossfeed",
                         "fig3h_temperature",  "fig4d_lifetime",
                         "fig4_g2"};
  double worst_sigma = 0.0;
  std::string worst_name = "-";
  for (const char* name : names) {
    auto c = preset(name);
    c.n_traj = 1000;
    auto cmp = mcwf_vs_master(c);
    if (cmp.max_sigma_distance > worst_sigma) {
      worst_sigma = cmp.max_sigma_distance;
      worst_name = name;
    }
  }

  // Single-quantum spectra: closed forms vs full-Liouvillian regression.
  auto cs = preset("fig1g_pl");
  double worst_l2 = 0.0;
  for (PumpTarget pump : {PumpTarget::kDot, PumpTarget::kCavity}) {
    ExperimentConfig sc = cs;
    sc.scan = {-0.7, 0.7, 701};
    auto r = spectra_compare(sc, pump);
    worst_l2 = std::max({worst_l2, r.rel_l2_cavity, r.rel_l2_dot});
  }
  bool pass = worst_sigma <= 3.0 && worst_l2 <= 0.05;
  report("C5", pass,
         fmt("MCWF(1000) vs master: max %.2f sigma (tol 3, worst preset "
             "%s); analytic vs regression spectra rel L2 %.4f (tol 0.05)",
             worst_sigma, worst_name.c_str(), worst_l2),
         timer.seconds(), 300.0);
}

// --- C6: state-validity and photon-statistics sanity ------------------------
void criterion_6() {
  Timer timer;
  bool valid = true;
  std::string fail_note;
  const char* names[] = {"fig1f_reflectivity", "fig1g_pl",
                         "fig2_rabi",          "fig3_crossfeed",
                         "fig3h_temperature",  "fig4d_lifetime",
                         "fig4_g2"};
  for (const char* name : names) {
    auto c = preset(name);
    std::optional<PulseShape> drive;
    if (c.pulse.amplitude > 0.0) drive = c.pulse;
    try {
      LindbladSystem sys(c.params, drive);
      int qd0 = drive ? 0 : 1;
      Matrix rho0 = basis_state(qd0, 0, c.params.n_max) *
                    basis_state(qd0, 0, c.params.n_max).adjoint();
      EvolveOptions opts;
      opts.check_validity = true;  // trace/Hermiticity/positivity per point
      auto grid = uniform_time_grid(0.0, c.grid.t_max,
                                    std::max(c.grid.dt, c.grid.t_max / 400));
      evolve_photon_exciton(rho0, grid, sys, opts);
    } catch (const Error& e) {
      valid = false;
      fail_note = std::string(name) + ": " + e.what();
      break;
    }
  }

  // cw-driven g2 tends to 1, and a coherently driven empty cavity is
  // Poissonian at all delays.
  auto cg = preset("fig4_g2");
  auto gr = g2_cw_experiment(cg);
  bool g2_inf_ok = std::abs(gr.g2_infinity - 1.0) <= 0.01;

  SystemParams empty;
  empty.kappa = 0.2047;
  empty.gamma = 1e-3;
  empty.n_max = 6;
  PulseShape cw;
  cw.kind = PulseShape::Kind::kCw;
  cw.target = DriveTarget::kCavity;
  cw.amplitude = 0.02;
  LindbladSystem sys(empty, cw);
  auto tau = uniform_time_grid(0.0, 60.0, 2.0);
  auto flat = g2_cw(sys, tau);
  double worst_flat = 0.0;
  for (auto& v : flat.values)
    worst_flat = std::max(worst_flat, std::abs(v.real() - 1.0));

  bool pass = valid && g2_inf_ok && worst_flat <= 1e-6;
  report("C6", pass,
         fmt("state validity on all presets %s%s; cw g2(inf) = %.4f (tol "
             "1%%); coherent-drive g2 flat to %.1e (tol 1e-6)",
             valid ? "OK" : "VIOLATED ", fail_note.c_str(), gr.g2_infinity,
             worst_flat),
         timer.seconds(), 300.0);
}

// --- C7: antibunching --------------------------------------------------------
void criterion_7() {
  Timer timer;
  auto c = preset("fig4_g2");
  auto pg = g2_pulsed_experiment(c);
  auto cw = g2_cw_experiment(c);
  bool pass = pg.histogram.center_side_ratio < 0.5 && cw.g2_zero < 0.5 &&
              !pg.histogram.pileup_warning;
  report("C7", pass,
         fmt("pulsed center/side ratio %.3f (tol < 0.5, %.3f photons/pulse); "
             "cw g2(0) %.4f (tol < 0.5)",
             pg.histogram.center_side_ratio,
             pg.histogram.mean_photons_per_pulse, cw.g2_zero),
         timer.seconds(), 300.0);
}

// --- C8: explicit exclusions -------------------------------------------------
void criterion_8() {
  Timer timer;
  bool refused = false;
  try {
    nlohmann::json j = nlohmann::json::parse(R"({
      "params": {"g": "25 GHz", "kappa": {"q_factor": 1e4},
                 "gamma": "1 GHz", "gamma_d": "2.5 GHz"},
      "drive_xx": true
    })");
    load_config(j);
  } catch (const UnsupportedFeatureError&) {
    refused = true;
  }
  report("C8", refused,
         "out of scope by design: absolute photon count rates, "
         "temperature-series data/theory mismatch, spectrometer-limited "
         "linewidths, bi-exciton two-photon physics (config rejects XX "
         "driving)",
         timer.seconds(), 10.0);
}

}  // namespace

int main() {
  std::printf("acceptance suite (presets: %s)\n", CQED_PRESET_DIR);
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%d criterion(s) failing\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
