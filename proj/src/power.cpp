#include "hhsim/power.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hhsim/common.hpp"

namespace hhsim {

namespace {

void require_tuned(const ProtocolParams& p, double omega_l) {
  const double nominal = resonance_condition(p);
  if (std::abs(nominal - omega_l) > 1e-9 * std::max(std::abs(nominal), std::abs(omega_l))) {
    throw ConfigError("untuned protocol: omega_l = " + std::to_string(omega_l) +
                      " rad/us but the resonance is at " + std::to_string(nominal) + " rad/us");
  }
}

}  // namespace

double peak_amplitude(const ProtocolParams& p) {
  p.validate();
  switch (p.kind) {
    case ProtocolKind::HH:
    case ProtocolKind::PM:
    case ProtocolKind::PM_BSS:
    case ProtocolKind::Detuned:
      return std::abs(*p.omega1);
    case ProtocolKind::DetunedDouble:
      return std::hypot(*p.omega1, *p.omega2);
    case ProtocolKind::AM:
    case ProtocolKind::Sense_AM:
      return std::abs(*p.omega0_drive) + std::abs(*p.omega1);
    case ProtocolKind::AM_via_PM:
      return std::abs(*p.omega0_drive);
    case ProtocolKind::Sense_PM:
      return std::abs(*p.omega1) + std::abs(*p.omega_s);
  }
  return 0.0;
}

double mean_square_amplitude(const ProtocolParams& p) {
  p.validate();
  auto sq = [](double v) { return v * v; };
  switch (p.kind) {
    case ProtocolKind::HH:
    case ProtocolKind::PM:
    case ProtocolKind::PM_BSS:
    case ProtocolKind::Detuned:
      return sq(*p.omega1);
    case ProtocolKind::DetunedDouble:
      return sq(*p.omega1) + 0.5 * sq(*p.omega2);
    case ProtocolKind::AM:
    case ProtocolKind::Sense_AM:
      return sq(*p.omega0_drive) + 0.5 * sq(*p.omega1);
    case ProtocolKind::AM_via_PM:
      return sq(*p.omega0_drive);
    case ProtocolKind::Sense_PM:
      return sq(*p.omega1) + 0.5 * sq(*p.omega_s);
  }
  return 0.0;
}

double cycle_time(const ProtocolParams& p, double g) {
  p.validate();
  if (!(g > 0.0)) throw ConfigError("cycle time needs a positive coupling g");
  double c = 0.0;
  switch (p.kind) {
    case ProtocolKind::HH:
      c = g;
      break;
    case ProtocolKind::PM:
    case ProtocolKind::PM_BSS:
      c = 0.5 * g;
      break;
    case ProtocolKind::Detuned:
      c = g * *p.omega1 / std::abs(*p.delta);
      break;
    case ProtocolKind::DetunedDouble:
      c = 0.5 * g * *p.omega1 / std::abs(*p.delta);
      break;
    case ProtocolKind::AM:
    case ProtocolKind::Sense_AM:
      c = g * 0.5 * *p.omega1 / *p.omega2;
      break;
    case ProtocolKind::AM_via_PM:
      c = 0.5 * g * 0.5 * *p.omega2 / *p.omega3;
      break;
    case ProtocolKind::Sense_PM:
      c = 0.25 * g;
      break;
  }
  c = std::abs(c);
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("cycle time undefined for zero effective coupling");
  return kTwoPi / c;
}

double peak_ratio(const ProtocolParams& p, double omega_l) {
  require_tuned(p, omega_l);
  const double peak = peak_amplitude(p);
  return omega_l * omega_l / (peak * peak);
}

double cycle_ratio(const ProtocolParams& p, double omega_l, double g) {
  require_tuned(p, omega_l);
  const double t_hh = kTwoPi / g;
  return omega_l * omega_l * t_hh / (mean_square_amplitude(p) * cycle_time(p, g));
}

PowerReport power_report(const ProtocolParams& p, double omega_l, double g) {
  return {peak_ratio(p, omega_l), cycle_ratio(p, omega_l, g), cycle_time(p, g) * g / kTwoPi};
}

double drive_energy(const ProtocolParams& p, double carrier, double duration, std::size_t samples) {
  if (samples < 2) throw ConfigError("quadrature needs at least two samples");
  const DriveWaveform w = waveform(p);
  auto field = [&](double t) {
    double f = 0.0;
    for (const auto& ch : w.channels) f += ch.amplitude(t) * std::cos((carrier - ch.carrier_detuning) * t + ch.phase(t));
    return f * f;
  };
  // composite Simpson on an even number of intervals
  const std::size_t n = samples % 2 == 0 ? samples : samples + 1;
  const double h = duration / static_cast<double>(n);
  double acc = field(0.0) + field(duration);
  for (std::size_t k = 1; k < n; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * field(static_cast<double>(k) * h);
  return acc * h / 3.0;
}

}  // namespace hhsim
