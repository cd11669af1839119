#include "hhsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hhsim/common.hpp"

namespace hhsim {

namespace {

using VT = ValueType;

const std::vector<ConfigKey> kSchema = {
    {"run.name", VT::text, "run", "base name of the output files"},
    {"run.experiment", VT::text, "scan-ratio",
     "scan-ratio | scan-resonance | polarize | coherence | sense | power"},
    {"run.seed", VT::integer, "1", "master seed of all noise streams"},
    {"run.n_realizations", VT::integer, "1", "noise realizations per ensemble"},
    {"run.dt_us", VT::real, "0", "propagation step in us, 0 for 1/40 of the fastest period"},
    {"run.convention", VT::text, "half", "sigma_pm normalization: half | full"},

    {"protocol.kind", VT::text, "PM_BSS", "HH | PM | PM_BSS | Detuned | DetunedDouble | AM | AM_via_PM | Sense_PM | Sense_AM"},
    {"protocol.omega1_mhz", VT::real, "3.3", "first drive Rabi frequency (MHz)"},
    {"protocol.omega2_mhz", VT::real, "", "second drive / modulation rate (MHz)"},
    {"protocol.omega2_over_omega1", VT::real, "", "alternative to omega2_mhz"},
    {"protocol.omega0_drive_mhz", VT::real, "", "AM base amplitude (MHz)"},
    {"protocol.omega3_mhz", VT::real, "", "AM_via_PM modulation rate (MHz)"},
    {"protocol.delta_mhz", VT::real, "", "carrier detuning (MHz)"},
    {"protocol.omega_s_mhz", VT::real, "", "spin-locking drive (MHz)"},

    {"system.g_mhz", VT::real, "", "coupling g (MHz)"},
    {"system.g_over_omega1", VT::real, "0.04", "coupling as a fraction of omega1, used when g_mhz is unset"},
    {"system.g_over_omega2", VT::real, "", "coupling as a fraction of omega2, overrides g_over_omega1"},
    {"system.omega_l_mhz", VT::real, "", "nuclear Larmor frequency (MHz), default: nominal resonance"},
    {"system.nuclei_mhz", VT::real_list, "", "Larmor frequencies of the sensed nuclei (MHz)"},

    {"noise.enabled", VT::boolean, "false", "magnetic and drive OU noise"},
    {"noise.t2star_us", VT::real, "3", "target T2* for the magnetic noise calibration"},
    {"noise.magnetic_tau_us", VT::real, "25", "magnetic noise correlation time"},
    {"noise.magnetic_sigma", VT::real, "", "magnetic noise sd (rad/us), default: calibrated to t2star_us"},
    {"noise.drive_tau_us", VT::real, "500", "drive amplitude noise correlation time"},
    {"noise.drive_relative", VT::real, "0.01", "relative drive amplitude noise sd"},
    {"noise.calibration_realizations", VT::integer, "2000", "FID realizations used by the calibration"},

    {"scan.ratios", VT::real_list, "0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0", "omega2 / omega1 values"},
    {"scan.shift_min", VT::real, "-0.3", "resonance search window start, units of omega2 around the nominal value"},
    {"scan.shift_max", VT::real, "0.5", "resonance search window end, units of omega2"},
    {"scan.shift_points", VT::integer, "81", "grid points of the resonance search"},
    {"scan.refine", VT::boolean, "true", "golden-section refinement of the located minimum"},
    {"scan.t_final_us", VT::real, "", "evolution time per point, default: 1.5 x predicted transfer time"},

    {"coherence.ratios", VT::real_list, "0.1, 0.125, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0", "omega2 / omega1 values"},
    {"coherence.t_max_us", VT::real, "3000", "length of the coherence record"},
    {"coherence.sample_interval_us", VT::real, "10", "spacing of the recorded coherence samples"},

    {"sense.total_time_us", VT::real, "2000", "length of the sensing record"},
    {"sense.sample_dt_us", VT::real, "0.1", "measurement interval"},
    {"sense.mode", VT::text, "effective", "effective | full_drive"},
    {"sense.shot_noise", VT::boolean, "false", "Bernoulli sampling of each measurement"},
    {"sense.shots", VT::integer, "1000", "shots per measurement when shot_noise is on"},
    {"sense.control_min_mhz", VT::real, "0.2", "control scan start (MHz)"},
    {"sense.control_max_mhz", VT::real, "2.8", "control scan end (MHz)"},
    {"sense.control_points", VT::integer, "53", "coarse control scan points"},
    {"sense.control_fine_halfwidth_mhz", VT::real, "0.03", "half width of the fine windows around each nucleus"},
    {"sense.control_fine_points", VT::integer, "41", "points per fine window"},

    {"power.reference_mhz", VT::real, "1", "Omega1 of PM / Detuned and Omega0 of AM in the power table"},
    {"power.g_mhz", VT::real, "0.01", "coupling used for cycle times"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : kSchema)
    if (k.name == name) return &k;
  return nullptr;
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError("key '" + std::string(key) + "': '" + t + "' is not a number");
  return v;
}

void check_value(const ConfigKey& key, const std::string& value) {
  if (value.empty()) return;
  switch (key.type) {
    case VT::real:
      parse_real(key.name, value);
      break;
    case VT::integer: {
      long long v = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("key '" + std::string(key.name) + "': '" + value + "' is not an integer");
      break;
    }
    case VT::boolean:
      if (value != "true" && value != "false")
        throw ConfigError("key '" + std::string(key.name) + "': expected true or false, got '" + value + "'");
      break;
    case VT::real_list: {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) parse_real(key.name, item);
      break;
    }
    case VT::text:
      break;
  }
}

}  // namespace

const std::vector<ConfigKey>& config_schema() { return kSchema; }

RunConfig::RunConfig() {
  for (const auto& k : kSchema) values_.emplace(std::string(k.name), std::string(k.default_value));
}

void RunConfig::set(std::string_view name, std::string_view value) {
  const ConfigKey* key = find_key(name);
  if (!key) throw ConfigError("unknown key '" + std::string(name) + "'");
  std::string v = trim(value);
  check_value(*key, v);
  values_[std::string(name)] = std::move(v);
}

void RunConfig::unset(std::string_view name) { set(name, ""); }

RunConfig RunConfig::parse(std::string_view text, std::string_view origin) {
  RunConfig cfg;
  std::vector<std::string> seen;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    if (line.empty() || line[0] == '#' || line[0] == ';') {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      const bool known = std::any_of(kSchema.begin(), kSchema.end(), [&](const ConfigKey& k) {
        return k.name.substr(0, k.name.find('.')) == section;
      });
      if (!known) throw ConfigError(where + ": unknown section '" + section + "'");
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
      if (section.empty()) throw ConfigError(where + ": key outside of a section");
      const std::string name = section + "." + trim(std::string_view(line).substr(0, eq));
      if (std::find(seen.begin(), seen.end(), name) != seen.end())
        throw ConfigError(where + ": key '" + name + "' given twice");
      seen.push_back(name);
      try {
        cfg.set(name, std::string_view(line).substr(eq + 1));
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
    }
    if (end == text.size()) break;
  }
  return cfg;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const std::string& RunConfig::raw(std::string_view name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw ConfigError("unknown key '" + std::string(name) + "'");
  return it->second;
}

bool RunConfig::has(std::string_view name) const { return !raw(name).empty(); }

double RunConfig::real(std::string_view name) const {
  const auto v = optional_real(name);
  if (!v) throw ConfigError("key '" + std::string(name) + "' must be set");
  return *v;
}

std::optional<double> RunConfig::optional_real(std::string_view name) const {
  const auto& v = raw(name);
  if (v.empty()) return std::nullopt;
  return parse_real(name, v);
}

long long RunConfig::integer(std::string_view name) const {
  const auto& v = raw(name);
  if (v.empty()) throw ConfigError("key '" + std::string(name) + "' must be set");
  return std::stoll(v);
}

bool RunConfig::boolean(std::string_view name) const { return raw(name) == "true"; }

std::string RunConfig::text(std::string_view name) const { return raw(name); }

std::vector<double> RunConfig::real_list(std::string_view name) const {
  std::vector<double> out;
  std::stringstream ss(raw(name));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(name, item));
  return out;
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : kSchema) out.emplace_back(std::string(k.name), raw(k.name));
  return out;
}

std::string RunConfig::serialize() const {
  std::string out;
  std::string section;
  for (const auto& k : kSchema) {
    const auto dot = k.name.find('.');
    const std::string sec(k.name.substr(0, dot));
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += std::string(k.name.substr(dot + 1)) + " = " + raw(k.name) + "\n";
  }
  return out;
}

}  // namespace hhsim
