#include "hhsim/presets.hpp"

namespace hhsim {

namespace {

constexpr std::string_view kFig2Strong = R"([run]
name = fig2-strong
experiment = scan-ratio

[protocol]
omega1_mhz = 3.3

[system]
g_over_omega1 = 0.04

[scan]
ratios = 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0
shift_points = 81
)";

constexpr std::string_view kFig2Weak = R"([run]
name = fig2-weak
experiment = scan-ratio
n_realizations = 100

[protocol]
omega1_mhz = 3.3

[system]
g_over_omega1 = 0.01

[noise]
enabled = true

[scan]
ratios = 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0
shift_points = 81
)";

constexpr std::string_view kFig3 = R"([run]
name = fig3
experiment = coherence
n_realizations = 100

[protocol]
omega1_mhz = 3.3

[noise]
enabled = true

[coherence]
ratios = 0.05, 0.1, 0.125, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0
t_max_us = 3000
sample_interval_us = 10
)";

constexpr std::string_view kFig4 = R"([run]
name = fig4
experiment = sense

[protocol]
kind = Sense_AM
omega0_drive_mhz = 1.5
omega1_mhz = 0.1
omega2_mhz = 1
omega_s_mhz = 0.25

[system]
g_over_omega2 = 0.05
nuclei_mhz = 0.5, 1.5, 2.5

[sense]
total_time_us = 2000
sample_dt_us = 0.1
control_min_mhz = 0.2
control_max_mhz = 2.8
control_points = 53
control_fine_halfwidth_mhz = 0.03
control_fine_points = 41
)";

constexpr std::string_view kSuppPolar1 = R"([run]
name = supp-polar1
experiment = scan-resonance

[protocol]
kind = PM_BSS
omega1_mhz = 3.3
omega2_over_omega1 = 1.2

[system]
g_over_omega1 = 0.04

[scan]
shift_min = -0.1
shift_max = 0.1
shift_points = 81
)";

constexpr std::string_view kPowerTable = R"([run]
name = power-table
experiment = power

[power]
reference_mhz = 1
g_mhz = 0.01
)";

const std::vector<Preset> kPresets = {
    {"fig2-strong", "polarization vs Omega2/Omega1, strong coupling g = 0.04 Omega1, noiseless", kFig2Strong,
     {{"scan.ratios", "0.5, 1.5"}, {"scan.shift_points", "25"}}},
    {"fig2-weak", "polarization vs Omega2/Omega1, weak coupling g = 0.01 Omega1 with noise", kFig2Weak,
     {{"scan.ratios", "0.6"}, {"scan.shift_points", "17"}, {"run.n_realizations", "8"},
      {"noise.calibration_realizations", "500"}}},
    {"fig3", "coherence time vs Omega2/Omega1", kFig3,
     {{"coherence.ratios", "0.4"}, {"coherence.t_max_us", "300"}, {"run.n_realizations", "8"},
      {"noise.calibration_realizations", "500"}}},
    {"fig4", "AM control dips and Sense_AM spectrum of three nuclei", kFig4,
     {{"sense.total_time_us", "200"}, {"sense.control_points", "14"}, {"sense.control_fine_points", "7"}}},
    {"supp-polar1", "resonance-shift scan at Omega2=1.2 Omega1", kSuppPolar1, {{"scan.shift_points", "21"}}},
    {"power-table", "peak and cycle power relative to Hartmann-Hahn", kPowerTable, {}},
};

}  // namespace

const std::vector<Preset>& presets() { return kPresets; }

const Preset* find_preset(std::string_view name) {
  for (const auto& p : kPresets)
    if (p.name == name) return &p;
  return nullptr;
}

RunConfig preset_config(const Preset& preset, bool smoke) {
  RunConfig cfg = RunConfig::parse(preset.text, preset.name);
  if (smoke)
    for (const auto& [key, value] : preset.smoke) cfg.set(key, value);
  return cfg;
}

}  // namespace hhsim
