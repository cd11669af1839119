#include "hhsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include "hhsim/common.hpp"
#include "hhsim/noise.hpp"
#include "hhsim/power.hpp"
#include "hhsim/sensing.hpp"

namespace hhsim {

namespace {

std::optional<double> mhz(const RunConfig& cfg, std::string_view key) {
  if (auto v = cfg.optional_real(key)) return mhz_to_angular(*v);
  return std::nullopt;
}

void add_common_metadata(CsvTable& t, const RunConfig& cfg) {
  t.add_metadata("version", kVersion);
  t.add_metadata("convention", cfg.text("run.convention"));
  t.add_metadata("seed", std::to_string(cfg.integer("run.seed")));
  t.add_metadata("units", "frequencies in MHz unless named otherwise, times in us");
  for (const auto& [k, v] : cfg.entries()) t.add_metadata(k, v);
}

struct Context {
  const RunConfig& cfg;
  int threads;
  std::vector<std::pair<std::string, std::string>> extra;  // resolved values shared by all tables

  CsvTable table(std::vector<std::string> columns) const {
    CsvTable t(std::move(columns));
    add_common_metadata(t, cfg);
    for (const auto& [k, v] : extra) t.add_metadata(k, v);
    return t;
  }
};

RunSettings settings(Context& ctx) {
  RunSettings s;
  const auto& cfg = ctx.cfg;
  s.convention = parse_convention(cfg.text("run.convention"));
  s.seed = static_cast<std::uint64_t>(cfg.integer("run.seed"));
  const auto n = cfg.integer("run.n_realizations");
  if (n < 1) throw ConfigError("key 'run.n_realizations' must be at least 1");
  s.n_realizations = static_cast<std::size_t>(n);
  s.dt = cfg.real("run.dt_us");
  if (s.dt < 0.0) throw ConfigError("key 'run.dt_us' must be non-negative");
  s.threads = ctx.threads;
  if (!cfg.boolean("noise.enabled")) return s;

  double sigma = 0.0;
  if (auto given = cfg.optional_real("noise.magnetic_sigma")) {
    sigma = *given;
  } else {
    CalibrationOptions opts;
    const auto n_cal = cfg.integer("noise.calibration_realizations");
    if (n_cal < 1) throw ConfigError("key 'noise.calibration_realizations' must be at least 1");
    opts.fid.n_realizations = static_cast<std::size_t>(n_cal);
    opts.fid.seed = s.seed;
    const auto cal = calibrate_sigma_for_t2star(cfg.real("noise.t2star_us"), cfg.real("noise.magnetic_tau_us"), opts);
    sigma = cal.sigma;
    ctx.extra.emplace_back("calibrated_magnetic_sigma", format_number(cal.sigma));
    ctx.extra.emplace_back("calibrated_t2star_us", format_number(cal.achieved_t2star));
  }
  s.noise.magnetic = {cfg.real("noise.magnetic_tau_us"), sigma};
  s.noise.drive_relative = {cfg.real("noise.drive_tau_us"), cfg.real("noise.drive_relative")};
  s.noise.magnetic.validate();
  s.noise.drive_relative.validate();
  return s;
}

std::vector<NamedTable> run_scan_ratio(Context& ctx) {
  const auto& cfg = ctx.cfg;
  RatioScanOptions opts;
  opts.ratios = cfg.real_list("scan.ratios");
  if (opts.ratios.empty()) throw ConfigError("key 'scan.ratios' must list at least one ratio");
  opts.omega1 = mhz_to_angular(cfg.real("protocol.omega1_mhz"));
  ProtocolParams ref;
  ref.kind = ProtocolKind::PM;
  ref.omega1 = opts.omega1;
  ref.omega2 = opts.omega1;
  opts.g = coupling_from_config(cfg, ref);
  opts.shift_min = cfg.real("scan.shift_min");
  opts.shift_max = cfg.real("scan.shift_max");
  opts.shift_points = static_cast<std::size_t>(cfg.integer("scan.shift_points"));
  opts.run = settings(ctx);

  const auto corrected = scan_ratio(true, opts);
  const auto uncorrected = scan_ratio(false, opts);
  auto t = ctx.table({"omega2_over_omega1", "P_N_corrected", "P_N_uncorrected", "P_N_corrected_err",
                      "P_N_uncorrected_err", "shift_corrected_over_omega2", "shift_uncorrected_over_omega2"});
  for (std::size_t i = 0; i < corrected.size(); ++i) {
    t.add_row({corrected[i].ratio, corrected[i].p_n, uncorrected[i].p_n, corrected[i].p_n_err,
               uncorrected[i].p_n_err, corrected[i].shift_over_omega2, uncorrected[i].shift_over_omega2});
  }
  return {{cfg.text("run.name") + ".csv", std::move(t)}};
}

std::vector<NamedTable> run_scan_resonance(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ProtocolParams p = protocol_from_config(cfg);
  const double omega2 = p.omega2.value_or(0.0);
  if (!(omega2 > 0.0)) throw ConfigError("scan-resonance measures shifts in units of omega2, which must be positive");
  const double nominal = resonance_condition(p);
  ResonanceScanOptions opts;
  opts.g = coupling_from_config(cfg, p);
  opts.omega_l_min = nominal + cfg.real("scan.shift_min") * omega2;
  opts.omega_l_max = nominal + cfg.real("scan.shift_max") * omega2;
  opts.n_points = static_cast<std::size_t>(cfg.integer("scan.shift_points"));
  opts.refine = cfg.boolean("scan.refine");
  opts.t_final = cfg.optional_real("scan.t_final_us").value_or(0.0);
  opts.run = settings(ctx);
  const auto scan = scan_resonance(p, opts);

  auto t = ctx.table({"delta_omega_l_over_omega2", "omega_l_mhz", "P_N", "P_N_err"});
  if (scan.best_omega_l) {
    t.add_metadata("best_delta_omega_l_over_omega2", format_number((*scan.best_omega_l - nominal) / omega2));
    t.add_metadata("best_P_N", format_number(scan.best_p_n));
    t.add_metadata("best_time_us", format_number(scan.best_time));
  }
  for (const auto& pt : scan.curve.points)
    t.add_row({(pt.x - nominal) / omega2, angular_to_mhz(pt.x), pt.y, pt.y_err});
  return {{cfg.text("run.name") + ".csv", std::move(t)}};
}

std::vector<NamedTable> run_polarize(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ProtocolParams p = protocol_from_config(cfg);
  const double g = coupling_from_config(cfg, p);
  const double omega_l = mhz(cfg, "system.omega_l_mhz").value_or(resonance_condition(p));
  const RunSettings s = settings(ctx);
  const double t_final = cfg.optional_real("scan.t_final_us").value_or(polarization_window(p, g, s.convention));
  const auto curve = polarization_curve(p, {omega_l, g}, t_final, s);
  auto t = ctx.table({"time_us", "P_N", "P_N_err"});
  t.add_metadata("omega_l_mhz", format_number(angular_to_mhz(omega_l)));
  t.add_metadata("min_P_N", format_number(curve.min_p_n()));
  t.add_metadata("min_time_us", format_number(curve.min_time()));
  for (std::size_t k = 0; k < curve.times.size(); ++k) t.add_row({curve.times[k], curve.p_n[k], curve.p_n_err[k]});
  return {{cfg.text("run.name") + ".csv", std::move(t)}};
}

std::vector<NamedTable> run_coherence(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto ratios = cfg.real_list("coherence.ratios");
  if (ratios.empty()) throw ConfigError("key 'coherence.ratios' must list at least one ratio");
  CoherenceOptions opts;
  opts.t_max = cfg.real("coherence.t_max_us");
  opts.sample_interval = cfg.real("coherence.sample_interval_us");
  opts.run = settings(ctx);
  const double omega1 = mhz_to_angular(cfg.real("protocol.omega1_mhz"));

  auto t = ctx.table({"omega2_over_omega1", "T2_corrected_us", "T2_corrected_err_us", "T2_uncorrected_us",
                      "T2_uncorrected_err_us"});
  t.add_metadata("missing_value", "nan marks a record too short to show decay");
  for (double ratio : ratios) {
    std::vector<CsvTable::Cell> row{ratio};
    for (ProtocolKind kind : {ProtocolKind::PM_BSS, ProtocolKind::PM}) {
      ProtocolParams p;
      p.kind = kind;
      p.omega1 = omega1;
      p.omega2 = ratio * omega1;
      try {
        const auto r = measure_t2(p, opts);
        row.emplace_back(r.t2);
        row.emplace_back(r.t2_error);
      } catch (const NumericalError& e) {
        if (std::string_view(e.what()).find("decay not observed") == std::string_view::npos) throw;
        row.emplace_back(std::nan(""));
        row.emplace_back(std::nan(""));
      }
    }
    t.add_row(std::move(row));
  }
  return {{cfg.text("run.name") + ".csv", std::move(t)}};
}

std::vector<NamedTable> run_sense(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ProtocolParams p = protocol_from_config(cfg);
  const double g = coupling_from_config(cfg, p);
  const auto nuclei_mhz = cfg.real_list("system.nuclei_mhz");
  if (nuclei_mhz.empty()) throw ConfigError("key 'system.nuclei_mhz' must list at least one nucleus");
  std::vector<Nucleus> nuclei;
  for (double f : nuclei_mhz) nuclei.push_back({mhz_to_angular(f), g});

  // control method: the same drive without the spin-locking field
  ProtocolParams control = p;
  control.kind = p.kind == ProtocolKind::Sense_AM ? ProtocolKind::AM : ProtocolKind::PM;
  control.omega_s.reset();
  if (control.kind == ProtocolKind::AM) control.omega3.reset();

  const RunSettings s = settings(ctx);
  std::vector<double> xs;
  const double lo = cfg.real("sense.control_min_mhz"), hi = cfg.real("sense.control_max_mhz");
  const auto coarse = cfg.integer("sense.control_points");
  const auto fine = cfg.integer("sense.control_fine_points");
  const double half = cfg.real("sense.control_fine_halfwidth_mhz");
  if (coarse < 2 || fine < 0 || !(hi > lo)) throw ConfigError("invalid control scan grid in section [sense]");
  for (long long i = 0; i < coarse; ++i) xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(coarse - 1));
  for (double f : nuclei_mhz)
    for (long long i = 0; i < fine; ++i)
      xs.push_back(f - half + (fine > 1 ? 2.0 * half * static_cast<double>(i) / static_cast<double>(fine - 1) : half));
  std::sort(xs.begin(), xs.end());
  // coarse and fine grids may hit the same frequency up to rounding
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return b - a <= 1e-12 * std::abs(b); }),
           xs.end());
  for (double& x : xs) x = mhz_to_angular(x);

  const double t_final = cfg.optional_real("scan.t_final_us").value_or(polarization_window(control, g, s.convention));
  const auto scan = polarization_scan(control, g, xs, t_final, s);

  SensingOptions opts;
  opts.total_time = cfg.real("sense.total_time_us");
  opts.sample_dt = cfg.real("sense.sample_dt_us");
  const auto mode = cfg.text("sense.mode");
  if (mode == "effective") {
    opts.mode = SensingMode::effective;
  } else if (mode == "full_drive") {
    opts.mode = SensingMode::full_drive;
  } else {
    throw ConfigError("key 'sense.mode': expected effective or full_drive, got '" + mode + "'");
  }
  opts.shot_noise = cfg.boolean("sense.shot_noise");
  const auto shots = cfg.integer("sense.shots");
  if (shots < 1) throw ConfigError("key 'sense.shots' must be at least 1");
  opts.shots = static_cast<std::size_t>(shots);
  opts.seed = s.seed;
  opts.dt = s.dt;
  const auto rec = sense_spectrum(p, nuclei, opts);

  auto control_table = ctx.table({"omega_l", "P_N"});
  control_table.add_metadata("control_protocol", std::string(to_string(control.kind)));
  for (const auto& pt : scan.points) control_table.add_row({angular_to_mhz(pt.x), pt.y});
  auto spectrum_table = ctx.table({"frequency", "magnitude"});
  spectrum_table.add_metadata("resolution_mhz", format_number(rec.resolution()));
  for (const auto& pt : rec.spectrum) spectrum_table.add_row({pt.frequency, pt.magnitude});
  const std::string name = cfg.text("run.name");
  return {{name + "-control.csv", std::move(control_table)}, {name + "-spectrum.csv", std::move(spectrum_table)}};
}

std::vector<NamedTable> run_power(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const double r = mhz_to_angular(cfg.real("power.reference_mhz"));
  const double g = mhz_to_angular(cfg.real("power.g_mhz"));
  if (!(r > 0.0) || !(g > 0.0)) throw ConfigError("section [power] needs positive reference_mhz and g_mhz");

  ProtocolParams hh;
  hh.kind = ProtocolKind::HH;
  hh.omega1 = 2.0 * r;
  ProtocolParams pm;
  pm.kind = ProtocolKind::PM;
  pm.omega1 = r;
  pm.omega2 = r;
  ProtocolParams det;
  det.kind = ProtocolKind::Detuned;
  det.omega1 = r;
  det.delta = 10.0 * r;
  ProtocolParams am;
  am.kind = ProtocolKind::AM;
  am.omega0_drive = r;
  am.omega1 = r;
  am.omega2 = 9.0 * r;

  auto t = ctx.table({"protocol", "peak_ratio", "cycle_ratio"});
  t.add_metadata("rows", "PM omega2 = omega1; Detuned delta = 10 omega1; AM omega2 = 9 omega0_drive, omega1 = omega0_drive");
  for (const auto* p : {&hh, &pm, &det, &am}) {
    const auto rep = power_report(*p, resonance_condition(*p), g);
    t.add_row({std::string(to_string(p->kind)), rep.peak_power_ratio, rep.cycle_power_ratio});
  }
  return {{cfg.text("run.name") + ".csv", std::move(t)}};
}

}  // namespace

ProtocolParams protocol_from_config(const RunConfig& cfg) {
  ProtocolParams p;
  p.kind = parse_protocol_kind(cfg.text("protocol.kind"));
  p.omega1 = mhz(cfg, "protocol.omega1_mhz");
  p.omega2 = mhz(cfg, "protocol.omega2_mhz");
  if (auto ratio = cfg.optional_real("protocol.omega2_over_omega1")) {
    if (p.omega2) throw ConfigError("keys 'protocol.omega2_mhz' and 'protocol.omega2_over_omega1' are exclusive");
    if (!p.omega1) throw ConfigError("key 'protocol.omega2_over_omega1' needs protocol.omega1_mhz");
    p.omega2 = *ratio * *p.omega1;
  }
  p.omega0_drive = mhz(cfg, "protocol.omega0_drive_mhz");
  p.omega3 = mhz(cfg, "protocol.omega3_mhz");
  p.delta = mhz(cfg, "protocol.delta_mhz");
  p.omega_s = mhz(cfg, "protocol.omega_s_mhz");
  p.validate();
  return p;
}

double coupling_from_config(const RunConfig& cfg, const ProtocolParams& p) {
  if (auto g = mhz(cfg, "system.g_mhz")) return *g;
  if (auto frac = cfg.optional_real("system.g_over_omega2")) {
    if (!p.omega2) throw ConfigError("key 'system.g_over_omega2' needs omega2");
    return *frac * *p.omega2;
  }
  if (auto frac = cfg.optional_real("system.g_over_omega1")) {
    if (!p.omega1) throw ConfigError("key 'system.g_over_omega1' needs omega1");
    return *frac * *p.omega1;
  }
  throw ConfigError("coupling unset: give system.g_mhz, system.g_over_omega1 or system.g_over_omega2");
}

RunSettings settings_from_config(const RunConfig& cfg, int threads, CsvTable* metadata_sink) {
  Context ctx{cfg, threads, {}};
  auto s = settings(ctx);
  if (metadata_sink)
    for (const auto& [k, v] : ctx.extra) metadata_sink->add_metadata(k, v);
  return s;
}

std::vector<NamedTable> execute(const RunConfig& cfg, int threads) {
  try {
    parse_convention(cfg.text("run.convention"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'run.convention': ") + e.what());
  }
  Context ctx{cfg, std::max(1, threads), {}};
  const std::string experiment = cfg.text("run.experiment");
  if (experiment == "scan-ratio") return run_scan_ratio(ctx);
  if (experiment == "scan-resonance") return run_scan_resonance(ctx);
  if (experiment == "polarize") return run_polarize(ctx);
  if (experiment == "coherence") return run_coherence(ctx);
  if (experiment == "sense") return run_sense(ctx);
  if (experiment == "power") return run_power(ctx);
  throw ConfigError("key 'run.experiment': unknown experiment '" + experiment + "'");
}

std::vector<std::string> run(const RunConfig& cfg, const RunContext& ctx) {
  const auto tables = execute(cfg, ctx.threads);
  std::filesystem::create_directories(ctx.out_dir);
  std::vector<std::string> written;
  for (const auto& t : tables) {
    const auto path = (std::filesystem::path(ctx.out_dir) / t.file_name).string();
    t.table.save(path);
    written.push_back(path);
  }
  return written;
}

}  // namespace hhsim
