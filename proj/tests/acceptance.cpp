// Acceptance checks: one PASS/FAIL line per criterion, tolerances fixed below.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhsim/common.hpp"
#include "hhsim/experiments.hpp"
#include "hhsim/noise.hpp"
#include "hhsim/power.hpp"
#include "hhsim/presets.hpp"
#include "hhsim/propagator.hpp"
#include "hhsim/runner.hpp"
#include "hhsim/sensing.hpp"

using namespace hhsim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const double kOmega1 = mhz_to_angular(3.3);

ProtocolParams pm_family(double ratio, bool corrected) {
  ProtocolParams p;
  p.kind = corrected ? ProtocolKind::PM_BSS : ProtocolKind::PM;
  p.omega1 = kOmega1;
  p.omega2 = ratio * kOmega1;
  return p;
}

ProtocolParams fig4_am() {
  ProtocolParams p;
  p.kind = ProtocolKind::AM;
  p.omega0_drive = mhz_to_angular(1.5);
  p.omega1 = mhz_to_angular(0.1);
  p.omega2 = mhz_to_angular(1.0);
  return p;
}

const double kFig4G = 0.05 * mhz_to_angular(1.0);
const double kFig4Nuclei[] = {0.5, 1.5, 2.5};  // MHz: Omega0 - Omega2, Omega0, Omega0 + Omega2

Outcome bss_closed_form() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u1(0.1, 30.0), ur(0.0, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double o1 = u1(rng), o2 = ur(rng) * o1;
    const auto c = bss_correct(o1, o2);
    worst = std::max(worst, std::abs(2.0 * c.omega1_tilde - std::hypot(o1 + c.omega1_tilde, o2)));
  }
  const auto zero = bss_correct(kOmega1, 0.0);
  const bool exact = zero.omega1_tilde == kOmega1 && zero.omega2_tilde == 0.0;
  return {worst <= 1e-12 && exact,
          fmt("max residual %.3g (<= 1e-12), bss_correct(O1, 0) exact: %s", worst, exact ? "yes" : "no")};
}

Outcome power_table() {
  const double r = 1.0, g = 0.01;
  ProtocolParams pm, det, am;
  pm.kind = ProtocolKind::PM;
  pm.omega1 = pm.omega2 = r;
  det.kind = ProtocolKind::Detuned;
  det.omega1 = r;
  det.delta = 10.0 * r;
  am.kind = ProtocolKind::AM;
  am.omega0_drive = am.omega1 = r;
  am.omega2 = 9.0 * r;
  auto rel = [](double a, double b) { return std::abs(a / b - 1.0); };
  const auto a = power_report(pm, resonance_condition(pm), g);
  const auto b = power_report(det, resonance_condition(det), g);
  const auto c = power_report(am, resonance_condition(am), g);
  const bool ok = rel(a.peak_power_ratio, 4.0) <= 1e-9 && rel(a.cycle_power_ratio, 2.0) <= 1e-9 &&
                  rel(b.peak_power_ratio, 101.0) <= 1e-9 && rel(b.cycle_power_ratio, 10.1) <= 1e-9 &&
                  rel(c.peak_power_ratio, 25.0) <= 1e-9 && std::abs(c.cycle_power_ratio - 3.7) <= 0.05;
  return {ok, fmt("PM (%.12g, %.12g), Detuned (%.12g, %.12g), AM (%.12g, %.6g)", a.peak_power_ratio,
                  a.cycle_power_ratio, b.peak_power_ratio, b.cycle_power_ratio, c.peak_power_ratio,
                  c.cycle_power_ratio)};
}

Outcome polar1() {
  const auto p = pm_family(1.2, true);
  const double nominal = resonance_condition(p), omega2 = 1.2 * kOmega1;
  ResonanceScanOptions o;
  o.g = 0.04 * kOmega1;
  o.omega_l_min = nominal - 0.1 * omega2;
  o.omega_l_max = nominal + 0.1 * omega2;
  o.n_points = 81;
  const auto scan = scan_resonance(p, o);
  if (!scan.best_omega_l) return {false, "flat scan"};
  const double shift = (*scan.best_omega_l - nominal) / omega2;
  return {scan.best_p_n <= 0.01 && std::abs(shift + 0.015) <= 0.01,
          fmt("min P_N %.4g (<= 0.01) at shift %.4f (-0.015 +/- 0.01), t = %.3f us", scan.best_p_n, shift,
              scan.best_time)};
}

Outcome fig2_strong() {
  RatioScanOptions o;
  o.omega1 = kOmega1;
  o.g = 0.04 * kOmega1;
  o.ratios = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.5, 1.8};
  o.run.threads = hardware_threads();
  const auto corrected = scan_ratio(true, o);
  double worst = 0.0;
  double at_15 = 1.0;
  for (const auto& pt : corrected) {
    worst = std::max(worst, pt.p_n);
    if (pt.ratio == 1.5) at_15 = pt.p_n;
  }
  o.ratios = {1.5};
  const auto plain = scan_ratio(false, o);
  const double gap = plain.at(0).p_n - at_15;
  return {worst <= 0.1 && gap >= 0.2,
          fmt("corrected max P_N %.4g (<= 0.1); at 1.5 uncorrected %.4g vs corrected %.4g, excess %.4g (>= 0.2)",
              worst, plain.at(0).p_n, at_15, gap)};
}

struct ControlScan {
  ScanResult scan;
  double depth[3];
  std::optional<double> width[3];  // MHz
};

ControlScan fig4_control() {
  const auto p = fig4_am();
  std::vector<double> xs;
  for (int i = 0; i <= 52; ++i) xs.push_back(0.2 + 0.05 * i);
  for (double f : kFig4Nuclei)
    for (int i = 0; i <= 60; ++i) xs.push_back(f - 0.03 + 0.001 * i);
  for (double& x : xs) x = mhz_to_angular(x);
  RunSettings run;
  run.threads = hardware_threads();
  ControlScan out;
  out.scan = polarization_scan(p, kFig4G, xs, polarization_window(p, kFig4G), run);
  for (auto& pt : out.scan.points) pt.x = angular_to_mhz(pt.x);
  for (int k = 0; k < 3; ++k) {
    // deepest point within 0.03 MHz of the nominal dip
    double best = 1.0;
    for (const auto& pt : out.scan.points)
      if (std::abs(pt.x - kFig4Nuclei[k]) <= 0.03) best = std::min(best, pt.y);
    out.depth[k] = best;
    out.width[k] = dip_fwhm(out.scan, kFig4Nuclei[k]);
  }
  return out;
}

const ControlScan& control_cache() {
  static const ControlScan c = fig4_control();
  return c;
}

Outcome fig4_dips() {
  const auto& c = control_cache();
  bool ok = true;
  for (int k = 0; k < 3; ++k) ok = ok && c.depth[k] < 0.5 && c.width[k].has_value();
  ok = ok && *c.width[1] > *c.width[0] && *c.width[1] > *c.width[2];
  auto w = [&](int k) { return c.width[k] ? *c.width[k] : std::nan(""); };
  return {ok, fmt("P_N minima %.3g / %.3g / %.3g (< 0.5) at 0.5 / 1.5 / 2.5 MHz; FWHM %.4g / %.4g / %.4g MHz "
                  "(central widest)",
                  c.depth[0], c.depth[1], c.depth[2], w(0), w(1), w(2))};
}

Outcome sensing_resolution() {
  ProtocolParams p = fig4_am();
  p.kind = ProtocolKind::Sense_AM;
  p.omega_s = mhz_to_angular(0.25);
  std::vector<Nucleus> nuclei;
  for (double f : kFig4Nuclei) nuclei.push_back({mhz_to_angular(f), kFig4G});
  SensingOptions o;
  o.total_time = 2000.0;
  o.sample_dt = 0.1;
  const auto rec = sense_spectrum(p, nuclei, o);
  const auto peaks = find_peaks(rec.series, o.sample_dt, 3);
  if (peaks.size() != 3) return {false, fmt("found %zu peaks", peaks.size())};
  const auto& c = control_cache();
  const auto detunings = sensing_detunings(p, nuclei);
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    const double target = angular_to_mhz(detunings[k]);
    const SpectralPeak* match = nullptr;
    for (const auto& pk : peaks)
      if (std::abs(pk.frequency - target) <= 2.0 * rec.resolution()) match = &pk;
    if (!match || !c.width[k]) {
      ok = false;
      detail += fmt("nucleus %g MHz: no peak/dip; ", kFig4Nuclei[k]);
      continue;
    }
    const double product = match->fwhm * o.total_time;
    const double factor = *c.width[k] / match->fwhm;
    ok = ok && product >= 0.8 && product <= 1.5 && factor >= 3.0;
    detail += fmt("%g MHz: peak %.4f MHz, FWHM*T %.3f, dip/peak width %.3g; ", kFig4Nuclei[k], match->frequency,
                  product, factor);
  }
  detail += "(FWHM*T in [0.8, 1.5], ratio >= 3)";
  return {ok, detail};
}

Outcome coupling_ratios() {
  // weak Omega2 and g, where the -g/2 coupling is the leading order; it picks up
  // a correction of order Omega2 / Omega1 (about 13% at Omega2 = 0.5 Omega1)
  const double g = 0.005 * kOmega1;
  RunSettings run;
  run.threads = hardware_threads();
  auto located = [&](const ProtocolParams& p, double gc, double half_width) {
    ResonanceScanOptions o;
    o.g = gc;
    o.omega_l_min = resonance_condition(p) - half_width;
    o.omega_l_max = resonance_condition(p) + half_width;
    o.n_points = 41;
    o.run = run;
    const auto s = scan_resonance(p, o);
    return measure_transfer_time(p, {*s.best_omega_l, gc}, run);
  };
  ProtocolParams hh;
  hh.omega1 = kOmega1;
  const double t_hh = located(hh, g, 4.0 * g);
  const auto pm = pm_family(0.1, false);
  const double t_pm = located(pm, g, 0.1 * *pm.omega2);
  const double pm_ratio = t_pm / t_hh;

  const auto am = fig4_am();
  ProtocolParams hh_am;
  hh_am.omega1 = *am.omega0_drive;
  const double t_hh_am = located(hh_am, kFig4G, 4.0 * kFig4G);
  const double t_am = located(am, kFig4G, 0.03 * mhz_to_angular(1.0));
  const double am_ratio = t_am / t_hh_am * bessel_j1(*am.omega1 / *am.omega2);
  return {std::abs(pm_ratio - 2.0) <= 0.1 && std::abs(am_ratio - 1.0) <= 0.05,
          fmt("T(PM)/T(HH) = %.4f (2 +/- 5%%), T(AM)/T(HH) * J1 = %.4f (1 +/- 5%%)", pm_ratio, am_ratio)};
}

Outcome rwa_oracle() {
  const auto p = pm_family(0.5, false);
  const double g = 0.04 * kOmega1;
  const double omega_l = resonance_condition(p);
  const double omega0 = 100.0 * kOmega1;
  const HamiltonianModel lab(single_nucleus(omega_l, g, omega0), p, Frame::lab);
  const HamiltonianModel ip(single_nucleus(omega_l, g), p, Frame::first_ip);
  const StateVector psi0 = polarization_initial_state(p);
  const double period = 2.0 * predicted_transfer_time(p, g);
  EvolveOptions opts;
  opts.dt = lab.default_dt();
  opts.record_every = 20;
  const auto a = evolve(lab, psi0, period, opts);
  const auto b = evolve(ip, psi0, period, opts);
  double worst = 0.0, min_p = 1.0;
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    worst = std::max(worst, std::abs(polarization(a.states[k]) - polarization(b.states[k])));
    min_p = std::min(min_p, polarization(b.states[k]));
  }
  return {worst <= 1e-2, fmt("max |dP_N| %.3g (<= 1e-2) over %.3f us, omega0 = 100 Omega1; first-IP min P_N %.3g",
                             worst, period, min_p)};
}

Outcome noise_calibration() {
  CalibrationOptions co;
  co.fid.n_realizations = 2000;
  const auto cal = calibrate_sigma_for_t2star(kDefaultT2Star, kDefaultMagneticTau, co);
  // independent check through the Schroedinger propagator with a fresh seed
  ProtocolParams idle;
  idle.omega1 = 0.0;
  const HamiltonianModel model(SystemParams{}, idle);
  NoiseConfig noise;
  noise.magnetic = {kDefaultMagneticTau, cal.sigma};
  const Observable obs[] = {[](double, const StateVector& psi) { return expectation(pauli(Axis::x), psi); }};
  EnsembleOptions eo;
  eo.n_realizations = 2000;
  eo.master_seed = 777;
  eo.dt = 0.005;
  eo.record_every = 4;
  eo.threads = hardware_threads();
  const auto ens = run_ensemble(model, noise, product_state(std::array{spinor_plus_x()}), 9.0, obs, eo);
  const auto t = first_crossing(ens.times, ens.mean[0], fid_level());
  if (!t) return {false, "FID never reached 1/e"};
  return {std::abs(*t / kDefaultT2Star - 1.0) <= 0.1,
          fmt("sigma %.5g rad/us, propagated FID 1/e time %.4f us (3 +/- 10%%), n = 2000", cal.sigma, *t)};
}

Outcome fig3() {
  const auto cfg = preset_config(*find_preset("fig3"));
  CoherenceOptions o;
  o.t_max = cfg.real("coherence.t_max_us");
  o.sample_interval = cfg.real("coherence.sample_interval_us");
  o.run = settings_from_config(cfg, hardware_threads());
  auto t2 = [&](double ratio, bool corrected) {
    try {
      return measure_t2(pm_family(ratio, corrected), o).t2;
    } catch (const NumericalError&) {
      return std::nan("");
    }
  };
  double peak_c = 0.0, peak_u = 0.0, c04 = std::nan(""), u0125 = std::nan("");
  std::string curve;
  for (double r : cfg.real_list("coherence.ratios")) {
    const double c = t2(r, true), u = t2(r, false);
    curve += fmt("%g:%.0f/%.0f ", r, c, u);
    if (std::isfinite(c)) peak_c = std::max(peak_c, c);
    if (std::isfinite(u)) peak_u = std::max(peak_u, u);
    if (r == 0.4) c04 = c;
    if (r == 0.125) u0125 = u;
  }
  const bool ok = std::abs(c04 / 1000.0 - 1.0) <= 0.5 && std::abs(u0125 / 330.0 - 1.0) <= 0.5 &&
                  peak_c >= 2.0 * peak_u;
  return {ok, fmt("T2 corrected(0.4) %.0f us (1000 +/- 50%%), uncorrected(0.125) %.0f us (330 +/- 50%%), "
                  "peak ratio %.2f (>= 2); ratio:corrected/uncorrected %s",
                  c04, u0125, peak_c / peak_u, curve.c_str())};
}

Outcome determinism() {
  std::string detail;
  bool ok = true;
  for (const auto& preset : presets()) {
    const auto cfg = preset_config(preset, true);
    const auto a = execute(cfg, 1), b = execute(cfg, 4);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].table.str() == b[i].table.str();
    ok = ok && same;
    detail += std::string(preset.name) + (same ? " identical; " : " DIFFERS; ");
  }
  return {ok, detail + "(smoke variants, 1 vs 4 threads)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only, skip, expect_fail;
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--skip", skip, "skip these criteria");
  app.add_option("--expect-fail", expect_fail, "criteria known to fail; their failure does not fail the run");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, bss_closed_form}, {2, power_table},        {3, polar1},          {4, fig2_strong},
      {5, fig4_dips},       {6, sensing_resolution}, {7, coupling_ratios}, {8, rwa_oracle},
      {9, noise_calibration}, {10, fig3},            {11, determinism},
  };
  const std::set<int> only_set(only.begin(), only.end()), skip_set(skip.begin(), skip.end()),
      expected(expect_fail.begin(), expect_fail.end());

  int unexpected = 0;
  for (const auto& [id, check] : criteria) {
    if ((!only_set.empty() && !only_set.count(id)) || skip_set.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* note = "";
    if (!r.pass && expected.count(id)) note = " (known failure)";
    if (r.pass && expected.count(id)) note = " (listed as known failure)";
    if (!r.pass && !expected.count(id)) ++unexpected;
    std::printf("criterion %2d %s%s: %s [%.1f s]\n", id, r.pass ? "PASS" : "FAIL", note, r.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
