#include "hhsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hhsim/common.hpp"
#include "hhsim/fitting.hpp"
#include "hhsim/propagator.hpp"

namespace hhsim {

double polarization(const StateVector& psi) {
  if (psi.size() != 4) throw std::invalid_argument("polarization needs a two-spin state");
  return std::norm(psi(0)) + std::norm(psi(2));
}

double polarization_from_density(const Operator& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("polarization needs a two-spin state");
  // nuclear reduced density matrix, element <up|rho_N|up>
  return (rho(0, 0) + rho(2, 2)).real();
}

Eigen::Vector2cd initial_nv_state(const ProtocolParams& p) {
  p.validate();
  // Spinor along +n in the x-z plane, n at angle theta from +z towards +x.
  auto along = [](double theta) { return Eigen::Vector2cd(std::cos(0.5 * theta), std::sin(0.5 * theta)); };
  switch (p.kind) {
    case ProtocolKind::HH:
    case ProtocolKind::AM:
    case ProtocolKind::Sense_AM:
      return along(-0.5 * std::numbers::pi);
    case ProtocolKind::Detuned:
      // lower eigenstate of (omega1 sigma_x + delta sigma_z) / 2
      return along(std::atan2(p.require_omega1(), p.require_delta()) + std::numbers::pi);
    case ProtocolKind::PM:
    case ProtocolKind::AM_via_PM:
    case ProtocolKind::Sense_PM:
      return spinor_up();
    case ProtocolKind::PM_BSS: {
      // dressed axis tilted by the counter-rotating part of the second drive
      const double w1 = bss_correct(p.require_omega1(), p.require_omega2()).omega1_tilde;
      return along(std::atan2(p.require_omega2(), p.require_omega1() + w1));
    }
    case ProtocolKind::DetunedDouble:
      // second drive along sigma_y: double-dressed states are sigma_y eigenstates
      return Eigen::Vector2cd(std::sqrt(0.5), Complex(0.0, -std::sqrt(0.5)));
  }
  throw std::invalid_argument("unknown protocol kind");
}

StateVector polarization_initial_state(const ProtocolParams& p) {
  const Eigen::Vector2cd spinors[] = {initial_nv_state(p), spinor_up()};
  return product_state(spinors);
}

std::size_t PolarizationCurve::argmin() const {
  if (p_n.empty()) throw std::logic_error("empty polarization curve");
  return static_cast<std::size_t>(std::min_element(p_n.begin(), p_n.end()) - p_n.begin());
}

PolarizationCurve polarization_curve(const ProtocolParams& p, const Nucleus& nucleus, double t_final,
                                     const RunSettings& settings, std::size_t record_every) {
  const HamiltonianModel model(single_nucleus(nucleus.omega_l, nucleus.g), p);
  const Observable obs[] = {[](double, const StateVector& psi) { return polarization(psi); }};
  EnsembleOptions opts;
  opts.n_realizations = settings.n_realizations;
  opts.master_seed = settings.seed;
  opts.dt = settings.dt;
  opts.record_every = record_every;
  opts.threads = settings.threads;
  auto ens = run_ensemble(model, settings.noise, polarization_initial_state(p), t_final, obs, opts);
  return {std::move(ens.times), std::move(ens.mean[0]), std::move(ens.std_error[0])};
}

double polarization_window(const ProtocolParams& p, double g, SpinConvention convention) {
  return 3.0 * predicted_transfer_time(p, g, convention);
}

namespace {

struct PointValue {
  double p_n = 1.0;
  double err = 0.0;
  double time = 0.0;
};

PointValue evaluate(const ProtocolParams& p, double omega_l, double g, double t_final, const RunSettings& run) {
  const auto curve = polarization_curve(p, {omega_l, g}, t_final, run);
  const std::size_t k = curve.argmin();
  return {curve.p_n[k], curve.p_n_err[k], curve.times[k]};
}

}  // namespace

ScanResult polarization_scan(const ProtocolParams& p, double g, std::vector<double> omega_ls, double t_final,
                             const RunSettings& settings) {
  std::sort(omega_ls.begin(), omega_ls.end());
  const bool noisy = settings.noise.enabled();
  // Noiseless points parallelize across the grid, noisy ones inside the ensemble.
  RunSettings inner = settings;
  if (!noisy) inner.threads = 1;
  std::vector<PointValue> values(omega_ls.size());
  parallel_for(omega_ls.size(), noisy ? 1 : settings.threads, [&](std::size_t i) {
    try {
      values[i] = evaluate(p, omega_ls[i], g, t_final, inner);
    } catch (const NumericalError& e) {
      throw NumericalError("scan point omega_l = " + std::to_string(omega_ls[i]) + ": " + e.what());
    }
  });
  ScanResult out;
  out.x_label = "omega_l";
  out.y_label = "P_N";
  for (std::size_t i = 0; i < omega_ls.size(); ++i) out.points.push_back({omega_ls[i], values[i].p_n, values[i].err});
  return out;
}

namespace {

ResonanceScan scan_grid(const ProtocolParams& p, const ResonanceScanOptions& options, bool& at_boundary) {
  if (options.n_points < 3) throw ConfigError("resonance scan needs at least 3 points");
  if (!(options.omega_l_max > options.omega_l_min)) throw ConfigError("resonance scan range is empty");
  const double t_final = options.t_final > 0.0 ? options.t_final
                                               : polarization_window(p, options.g, options.run.convention);
  const std::size_t n = options.n_points;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = options.omega_l_min + (options.omega_l_max - options.omega_l_min) * static_cast<double>(i) /
                                      static_cast<double>(n - 1);
  std::vector<PointValue> values(n);
  ResonanceScan out;
  // grid values carry no time; the best point is re-evaluated below
  out.curve = polarization_scan(p, options.g, xs, t_final, options.run);
  for (std::size_t i = 0; i < n; ++i) values[i] = {out.curve.points[i].y, out.curve.points[i].y_err, 0.0};

  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end(), [](auto& a, auto& b) { return a.p_n < b.p_n; }) -
      values.begin());
  const auto worst = std::max_element(values.begin(), values.end(), [](auto& a, auto& b) { return a.p_n < b.p_n; });
  at_boundary = false;
  if (worst->p_n - values[best].p_n < 1e-9) return out;  // flat: no resonance in range
  if (best == 0 || best == n - 1) {
    at_boundary = true;
    out.best_omega_l = xs[best];
    out.best_p_n = values[best].p_n;
    return out;
  }

  double x_best = xs[best];
  PointValue v_best = evaluate(p, x_best, options.g, t_final, options.run);
  if (options.refine) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = xs[best - 1], b = xs[best + 1];
    double c = b - r * (b - a), d = a + r * (b - a);
    PointValue fc = evaluate(p, c, options.g, t_final, options.run);
    PointValue fd = evaluate(p, d, options.g, t_final, options.run);
    const double tol = 1e-6 * (std::abs(x_best) + 1e-12);
    while (b - a > tol) {
      if (fc.p_n < fd.p_n) {
        b = d;
        d = c;
        fd = fc;
        c = b - r * (b - a);
        fc = evaluate(p, c, options.g, t_final, options.run);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + r * (b - a);
        fd = evaluate(p, d, options.g, t_final, options.run);
      }
    }
    const PointValue& f = fc.p_n < fd.p_n ? fc : fd;
    if (f.p_n < v_best.p_n) {
      v_best = f;
      x_best = fc.p_n < fd.p_n ? c : d;
    }
  }
  out.best_omega_l = x_best;
  out.best_p_n = v_best.p_n;
  out.best_time = v_best.time;
  return out;
}

}  // namespace

ResonanceScan scan_resonance(const ProtocolParams& p, const ResonanceScanOptions& options) {
  bool at_boundary = false;
  auto scan = scan_grid(p, options, at_boundary);
  if (at_boundary) {
    throw NumericalError("no P_N minimum inside omega_l range [" + std::to_string(options.omega_l_min) + ", " +
                         std::to_string(options.omega_l_max) + "]");
  }
  return scan;
}

std::optional<double> dip_fwhm(const ScanResult& scan, double x_center) {
  const auto& pts = scan.points;
  if (pts.size() < 3) return std::nullopt;
  std::size_t i = 0;
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (std::abs(pts[k].x - x_center) < std::abs(pts[i].x - x_center)) i = k;
  // walk downhill to the local minimum
  while (true) {
    if (i > 0 && pts[i - 1].y < pts[i].y) {
      --i;
    } else if (i + 1 < pts.size() && pts[i + 1].y < pts[i].y) {
      ++i;
    } else {
      break;
    }
  }
  const double level = 0.5 * (1.0 + pts[i].y);
  auto crossing = [&](std::size_t a, std::size_t b) {
    const double f = (level - pts[a].y) / (pts[b].y - pts[a].y);
    return pts[a].x + f * (pts[b].x - pts[a].x);
  };
  std::optional<double> left, right;
  for (std::size_t k = i; k > 0; --k) {
    if (pts[k - 1].y >= level) {
      left = crossing(k, k - 1);
      break;
    }
  }
  for (std::size_t k = i; k + 1 < pts.size(); ++k) {
    if (pts[k + 1].y >= level) {
      right = crossing(k, k + 1);
      break;
    }
  }
  if (!left || !right) return std::nullopt;
  return *right - *left;
}

std::vector<RatioPoint> scan_ratio(bool corrected, const RatioScanOptions& options) {
  if (!(options.omega1 > 0.0)) throw ConfigError("omega1 must be positive");
  std::vector<double> ratios = options.ratios;
  std::sort(ratios.begin(), ratios.end());
  std::vector<RatioPoint> out;
  for (double ratio : ratios) {
    if (!(ratio > 0.0) || ratio > 2.0) throw ConfigError("ratio Omega2/Omega1 must lie in (0, 2]");
    ProtocolParams p;
    p.kind = corrected ? ProtocolKind::PM_BSS : ProtocolKind::PM;
    p.omega1 = options.omega1;
    p.omega2 = ratio * options.omega1;
    const double omega2 = *p.omega2;
    const double nominal = resonance_condition(p);

    ResonanceScanOptions scan;
    scan.g = options.g;
    scan.n_points = options.shift_points;
    scan.run = options.run;
    scan.run.noise = NoiseConfig::none();
    double lo = options.shift_min, hi = options.shift_max;
    ResonanceScan found;
    for (int attempt = 0;; ++attempt) {
      scan.omega_l_min = nominal + lo * omega2;
      scan.omega_l_max = nominal + hi * omega2;
      bool at_boundary = false;
      try {
        found = scan_grid(p, scan, at_boundary);
      } catch (const NumericalError& e) {
        throw NumericalError("ratio " + std::to_string(ratio) + ": " + e.what());
      }
      if (!at_boundary) break;
      if (attempt == 3)
        throw NumericalError("ratio " + std::to_string(ratio) + ": resonance not bracketed by the shift window");
      const double width = hi - lo;
      if (*found.best_omega_l <= scan.omega_l_min) {
        hi = lo + 0.1 * width;
        lo -= width;
      } else {
        lo = hi - 0.1 * width;
        hi += width;
      }
    }
    if (!found.best_omega_l) throw NumericalError("ratio " + std::to_string(ratio) + ": flat resonance scan");

    RatioPoint point;
    point.ratio = ratio;
    point.omega_l = *found.best_omega_l;
    point.shift_over_omega2 = (point.omega_l - nominal) / omega2;
    if (options.run.noise.enabled()) {
      const double window = polarization_window(p, options.g, options.run.convention);
      const auto curve = polarization_curve(p, {point.omega_l, options.g}, window, options.run);
      const std::size_t k = curve.argmin();
      point.p_n = curve.p_n[k];
      point.p_n_err = curve.p_n_err[k];
    } else {
      point.p_n = found.best_p_n;
    }
    out.push_back(point);
  }
  return out;
}

T2Result measure_t2(const ProtocolParams& p, const CoherenceOptions& options) {
  if (p.kind != ProtocolKind::PM && p.kind != ProtocolKind::PM_BSS)
    throw ConfigError("coherence measurement is defined for PM and PM_BSS");
  if (!(options.t_max > 0.0) || !(options.sample_interval > 0.0))
    throw ConfigError("coherence run needs positive t_max and sample_interval");

  const HamiltonianModel model(SystemParams{}, p);
  const double dt_max = options.run.dt > 0.0 ? options.run.dt : model.default_dt();
  const TimeGrid grid = TimeGrid::covering(options.t_max, dt_max);
  const auto record_every =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.sample_interval / grid.dt)));
  const double wm = modulation_frequency(p);

  const Operator sx = pauli(Axis::x), sy = pauli(Axis::y), sz = pauli(Axis::z);
  const Observable obs[] = {
      [sx](double, const StateVector& psi) { return expectation(sx, psi); },
      [sy, sz, wm](double t, const StateVector& psi) {
        // sigma_y after removing the first drive: sigma_y cos(wm t) + sigma_z sin(wm t)
        return std::cos(wm * t) * expectation(sy, psi) + std::sin(wm * t) * expectation(sz, psi);
      }};
  EnsembleOptions opts;
  opts.n_realizations = options.run.n_realizations;
  opts.master_seed = options.run.seed;
  opts.dt = grid.dt;
  opts.record_every = record_every;
  opts.threads = options.run.threads;
  StateVector psi0 = spinor_plus_y();
  const auto ens = run_ensemble(model, options.run.noise, psi0, options.t_max, obs, opts);

  T2Result out;
  out.times = ens.times;
  const std::size_t n = ens.times.size();
  out.coherence.resize(n);
  out.coherence_err.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double mx = ens.mean[0][k], my = ens.mean[1][k];
    const double m = std::hypot(mx, my);
    out.coherence[k] = m;
    out.coherence_err[k] =
        m > 0.0 ? std::hypot(mx * ens.std_error[0][k], my * ens.std_error[1][k]) / m : 0.0;
  }

  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  double tail_mean = 0.0;
  for (std::size_t k = n - tail; k < n; ++k) tail_mean += out.coherence[k];
  tail_mean /= static_cast<double>(tail);
  if (1.0 - tail_mean / out.coherence.front() < 0.05)
    throw NumericalError("decay not observed within t_max = " + std::to_string(options.t_max) + " us");

  std::vector<double> errs = out.coherence_err;
  std::nth_element(errs.begin(), errs.begin() + static_cast<std::ptrdiff_t>(n / 2), errs.end());
  const double floor = 0.25 * errs[n / 2];
  ExponentialFit fit;
  if (floor > 0.0) {
    std::vector<double> sigma(n);
    for (std::size_t k = 0; k < n; ++k) sigma[k] = std::max(out.coherence_err[k], floor);
    fit = fit_exponential(out.times, out.coherence, sigma);
  } else {
    fit = fit_exponential(out.times, out.coherence);
  }
  out.t2 = fit.decay_time;
  out.t2_error = fit.decay_time_error;
  out.amplitude = fit.amplitude;
  out.reduced_chi2 = fit.reduced_chi2;
  out.one_over_e_time = first_crossing(out.times, out.coherence, out.coherence.front() * fid_level());
  return out;
}

double measure_transfer_time(const ProtocolParams& p, const Nucleus& nucleus, const RunSettings& settings) {
  RunSettings run = settings;
  run.noise = NoiseConfig::none();
  const auto curve = polarization_curve(p, nucleus, polarization_window(p, nucleus.g, run.convention), run);
  const auto& y = curve.p_n;
  const auto& t = curve.times;
  // deepest sample of the first dip, bounded with hysteresis (below 0.25 until back above 0.75)
  // so the drive ripple cannot split it
  std::size_t lo = 0;
  while (lo < y.size() && y[lo] >= 0.25) ++lo;
  if (lo < y.size()) {
    std::size_t hi = lo;
    while (hi + 1 < y.size() && y[hi + 1] <= 0.75) ++hi;
    const auto k = static_cast<std::size_t>(std::min_element(y.begin() + static_cast<std::ptrdiff_t>(lo),
                                                             y.begin() + static_cast<std::ptrdiff_t>(hi) + 1) -
                                            y.begin());
    if (k > 0 && k + 1 < y.size()) {
      const double h = t[k] - t[k - 1];
      const double denom = y[k - 1] - 2.0 * y[k] + y[k + 1];
      const double offset = denom > 0.0 ? 0.5 * (y[k - 1] - y[k + 1]) / denom : 0.0;
      return t[k] + offset * h;
    }
  }
  throw NumericalError("no polarization transfer minimum inside the window");
}

}  // namespace hhsim
