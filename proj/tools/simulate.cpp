// simulate: command-line front end of the hhsim library.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhsim/common.hpp"
#include "hhsim/config.hpp"
#include "hhsim/power.hpp"
#include "hhsim/presets.hpp"
#include "hhsim/propagator.hpp"
#include "hhsim/runner.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

hhsim::RunConfig load(const std::string& target, bool smoke) {
  if (const auto* preset = hhsim::find_preset(target)) return hhsim::preset_config(*preset, smoke);
  if (!std::filesystem::exists(target))
    throw hhsim::ConfigError("'" + target + "' is neither a preset nor a readable config file");
  auto cfg = hhsim::RunConfig::load_file(target);
  if (smoke) {
    // A file with the name of a preset inherits that preset's reductions.
    if (const auto* preset = hhsim::find_preset(cfg.text("run.name")))
      for (const auto& [k, v] : preset->smoke) cfg.set(k, v);
  }
  return cfg;
}

int cmd_run(const std::string& target, std::string out_dir, int threads, const std::vector<long long>& seed,
            bool smoke) {
  auto cfg = load(target, smoke);
  if (!seed.empty()) cfg.set("run.seed", std::to_string(seed.front()));
  if (out_dir.empty()) {
    const char* env = std::getenv("SIMULATE_OUT_DIR");
    out_dir = env && *env ? env : ".";
  }
  const int workers = threads > 0 ? threads : hhsim::hardware_threads();
  for (const auto& path : hhsim::run(cfg, {out_dir, workers})) std::cout << path << "\n";
  return 0;
}

int cmd_presets(const std::string& export_dir) {
  for (const auto& p : hhsim::presets()) std::cout << p.name << ": " << p.description << "\n";
  if (!export_dir.empty()) {
    std::filesystem::create_directories(export_dir);
    for (const auto& p : hhsim::presets()) {
      const auto path = std::filesystem::path(export_dir) / (std::string(p.name) + ".cfg");
      std::ofstream out(path);
      if (!out) throw hhsim::ConfigError("cannot write '" + path.string() + "'");
      out << hhsim::preset_config(p).serialize();
    }
  }
  return 0;
}

int cmd_power(const std::string& kind, const std::vector<std::string>& assignments) {
  hhsim::ProtocolParams p;
  p.kind = hhsim::parse_protocol_kind(kind);
  std::optional<double> g_mhz, omega_l_mhz;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw hhsim::ConfigError("expected key=value, got '" + a + "'");
    const std::string key = a.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(a.substr(eq + 1), &used);
      if (used != a.size() - eq - 1) throw std::invalid_argument(a);
    } catch (const std::exception&) {
      throw hhsim::ConfigError("key '" + key + "': not a number");
    }
    const double w = hhsim::mhz_to_angular(value);
    if (key == "omega1") p.omega1 = w;
    else if (key == "omega2") p.omega2 = w;
    else if (key == "omega0_drive") p.omega0_drive = w;
    else if (key == "omega3") p.omega3 = w;
    else if (key == "delta") p.delta = w;
    else if (key == "omega_s") p.omega_s = w;
    else if (key == "g") g_mhz = value;
    else if (key == "omega_l") omega_l_mhz = value;
    else throw hhsim::ConfigError("unknown key '" + key + "'");
  }
  const double g = hhsim::mhz_to_angular(g_mhz.value_or(0.01));
  const double omega_l = omega_l_mhz ? hhsim::mhz_to_angular(*omega_l_mhz) : hhsim::resonance_condition(p);
  const auto rep = hhsim::power_report(p, omega_l, g);
  hhsim::CsvTable t({"protocol", "peak_ratio", "cycle_ratio", "cycle_time_ratio"});
  t.add_metadata("version", hhsim::kVersion);
  t.add_row({std::string(hhsim::to_string(p.kind)), rep.peak_power_ratio, rep.cycle_power_ratio,
             rep.cycle_time_ratio});
  t.write(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven electron-nuclear spin simulator"};
  app.require_subcommand(1);

  std::string target, out_dir, export_dir, kind;
  int threads = 0;
  std::vector<long long> seed;
  bool smoke = false;
  std::vector<std::string> assignments;

  auto* run = app.add_subcommand("run", "run a config file or preset and write CSV output");
  run->add_option("config", target, "config file or preset name")->required();
  run->add_option("--out", out_dir, "output directory (default: $SIMULATE_OUT_DIR or .)");
  run->add_option("--threads", threads, "worker threads, 0 for all cores");
  run->add_option("--seed", seed, "override run.seed")->expected(1);
  run->add_flag("--smoke", smoke, "reduced variant of the preset");

  auto* list = app.add_subcommand("presets", "list shipped presets");
  list->add_option("--export", export_dir, "write every preset as <name>.cfg into this directory");

  auto* power = app.add_subcommand("power", "power ratios of one protocol (frequencies in MHz)");
  power->add_option("protocol", kind, "protocol kind")->required();
  power->add_option("params", assignments, "key=value, e.g. omega1=1 omega2=1 g=0.01");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(target, out_dir, threads, seed, smoke);
    if (list->parsed()) return cmd_presets(export_dir);
    if (power->parsed()) return cmd_power(kind, assignments);
  } catch (const hhsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const hhsim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalExit;
  }
  return 0;
}
