#include "hhsim/protocols.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "hhsim/common.hpp"

namespace hhsim {

namespace {

struct KindName {
  ProtocolKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ProtocolKind::HH, "HH"},
    {ProtocolKind::PM, "PM"},
    {ProtocolKind::PM_BSS, "PM_BSS"},
    {ProtocolKind::Detuned, "Detuned"},
    {ProtocolKind::DetunedDouble, "DetunedDouble"},
    {ProtocolKind::AM, "AM"},
    {ProtocolKind::AM_via_PM, "AM_via_PM"},
    {ProtocolKind::Sense_PM, "Sense_PM"},
    {ProtocolKind::Sense_AM, "Sense_AM"},
};

double require(const std::optional<double>& v, std::string_view name, ProtocolKind kind) {
  if (!v) {
    throw ConfigError("protocol " + std::string(to_string(kind)) + " requires parameter " + std::string(name));
  }
  return *v;
}

double sin_theta(double omega1, double delta) { return omega1 / std::hypot(omega1, delta); }

// 2 Omega_s * integral_0^t cos(Omega0 s + beta sin(Omega2 s)) ds via the Jacobi-Anger expansion.
double spin_lock_phase(double omega0, double beta, double omega2, double omega_s, double t) {
  constexpr int kHarmonics = 24;
  double acc = 0.0;
  for (int n = -kHarmonics; n <= kHarmonics; ++n) {
    const double jn = bessel_j(n, beta);
    if (jn == 0.0) continue;
    const double w = omega0 + n * omega2;
    acc += std::abs(w) < 1e-12 ? jn * t : jn * std::sin(w * t) / w;
  }
  return 2.0 * omega_s * acc;
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  for (const auto& k : kKindNames)
    if (k.kind == kind) return k.name;
  return "?";
}

ProtocolKind parse_protocol_kind(std::string_view text) {
  for (const auto& k : kKindNames)
    if (k.name == text) return k.kind;
  throw ConfigError("unknown protocol '" + std::string(text) + "'");
}

double ProtocolParams::require_omega1() const { return require(omega1, "omega1", kind); }
double ProtocolParams::require_omega2() const { return require(omega2, "omega2", kind); }
double ProtocolParams::require_omega0_drive() const { return require(omega0_drive, "omega0_drive", kind); }
double ProtocolParams::require_omega3() const { return require(omega3, "omega3", kind); }
double ProtocolParams::require_delta() const { return require(delta, "delta", kind); }
double ProtocolParams::require_omega_s() const { return require(omega_s, "omega_s", kind); }

void ProtocolParams::validate() const {
  switch (kind) {
    case ProtocolKind::HH:
      require_omega1();
      break;
    case ProtocolKind::PM:
    case ProtocolKind::PM_BSS:
      if (!(require_omega1() > 0.0)) throw ConfigError("omega1 must be positive");
      if (require_omega2() < 0.0) throw ConfigError("omega2 must be non-negative");
      break;
    case ProtocolKind::Detuned:
      require_omega1();
      require_delta();
      break;
    case ProtocolKind::DetunedDouble:
      require_omega1();
      require_delta();
      require_omega2();
      break;
    case ProtocolKind::AM:
      require_omega0_drive();
      require_omega1();
      if (!(require_omega2() > 0.0)) throw ConfigError("AM modulation rate omega2 must be positive");
      break;
    case ProtocolKind::AM_via_PM:
      if (require_omega0_drive() == require_omega3())
        throw ConfigError("AM_via_PM requires omega0_drive != omega3");
      require_omega1();
      require_omega2();
      break;
    case ProtocolKind::Sense_PM:
      if (!(require_omega1() > 0.0)) throw ConfigError("omega1 must be positive");
      require_omega2();
      require_omega_s();
      break;
    case ProtocolKind::Sense_AM:
      require_omega0_drive();
      require_omega1();
      if (!(require_omega2() > 0.0)) throw ConfigError("AM modulation rate omega2 must be positive");
      require_omega_s();
      break;
  }
}

BssCorrected bss_correct(double omega1, double omega2) {
  const double w1 = (omega1 + std::sqrt(4.0 * omega1 * omega1 + 3.0 * omega2 * omega2)) / 3.0;
  const double s = omega1 + w1;
  const double w2 = omega2 == 0.0 ? 0.0 : 0.5 * omega2 * (1.0 + s / std::sqrt(omega2 * omega2 + s * s));
  return {w1, w2};
}

double modulation_frequency(const ProtocolParams& p) {
  if (p.kind == ProtocolKind::PM_BSS) return bss_correct(p.require_omega1(), p.require_omega2()).omega1_tilde;
  return p.require_omega1();
}

double DriveWaveform::envelope(double t) const {
  std::complex<double> total{0.0, 0.0};
  for (const auto& ch : channels) total += std::polar(ch.amplitude(t), ch.phase(t));
  return std::abs(total);
}

DriveWaveform waveform(const ProtocolParams& p) {
  p.validate();
  auto constant = [](double v) { return [v](double) { return v; }; };
  DriveWaveform w;
  switch (p.kind) {
    case ProtocolKind::HH:
      w.channels.push_back({constant(p.require_omega1()), constant(0.0), 0.0});
      break;
    case ProtocolKind::PM:
    case ProtocolKind::PM_BSS: {
      const double wm = modulation_frequency(p);
      const double depth = 2.0 * p.require_omega2() / wm;
      w.channels.push_back({constant(p.require_omega1()), [=](double t) { return depth * std::sin(wm * t); }, 0.0});
      break;
    }
    case ProtocolKind::Detuned:
      w.channels.push_back({constant(p.require_omega1()), constant(0.0), p.require_delta()});
      break;
    case ProtocolKind::DetunedDouble: {
      const double delta = p.require_delta();
      const double rate = std::hypot(delta, p.require_omega1());
      const double o2 = p.require_omega2();
      w.channels.push_back({constant(p.require_omega1()), constant(0.0), delta});
      // pi/2 carrier phase: a sigma_y drive in the rotating frame
      w.channels.push_back(
          {[=](double t) { return o2 * std::cos(rate * t); }, constant(std::numbers::pi / 2.0), delta});
      break;
    }
    case ProtocolKind::AM: {
      const double o0 = p.require_omega0_drive(), o1 = p.require_omega1(), o2 = p.require_omega2();
      w.channels.push_back({[=](double t) { return o0 + o1 * std::cos(o2 * t); }, constant(0.0), 0.0});
      break;
    }
    case ProtocolKind::AM_via_PM: {
      const double o0 = p.require_omega0_drive(), o1 = p.require_omega1(), o2 = p.require_omega2(),
                   o3 = p.require_omega3();
      auto phase = [=](double t) {
        const double bracket = o0 * std::cos(o3 * t) * std::sin(o0 * t) - o3 * std::cos(o0 * t) * std::sin(o3 * t);
        return 2.0 * (o1 / o0 * std::sin(o0 * t) + o2 / (o0 * o0 - o3 * o3) * bracket);
      };
      w.channels.push_back({constant(o0), phase, 0.0});
      break;
    }
    case ProtocolKind::Sense_PM: {
      const double o1 = p.require_omega1(), o2 = p.require_omega2(), os = p.require_omega_s();
      auto phase = [=](double t) { return 2.0 * o2 / o1 * std::sin(o1 * t); };
      w.channels.push_back({constant(o1), phase, 0.0});
      w.channels.push_back({[=](double t) { return os * std::cos(o2 * t); }, phase, 0.0});
      break;
    }
    case ProtocolKind::Sense_AM: {
      const double o0 = p.require_omega0_drive(), o1 = p.require_omega1(), o2 = p.require_omega2(),
                   os = p.require_omega_s();
      const double beta = o1 / o2;
      w.channels.push_back({[=](double t) { return o0 + o1 * std::cos(o2 * t); },
                            [=](double t) { return spin_lock_phase(o0, beta, o2, os, t); }, 0.0});
      break;
    }
  }
  return w;
}

double resonance_condition(const ProtocolParams& p) {
  p.validate();
  switch (p.kind) {
    case ProtocolKind::HH:
      return p.require_omega1();
    case ProtocolKind::PM:
    case ProtocolKind::Sense_PM:
      return p.require_omega1() + p.require_omega2();
    case ProtocolKind::PM_BSS: {
      const auto c = bss_correct(p.require_omega1(), p.require_omega2());
      return c.omega1_tilde + c.omega2_tilde;
    }
    case ProtocolKind::Detuned:
      return std::hypot(p.require_omega1(), p.require_delta());
    case ProtocolKind::DetunedDouble:
      return std::hypot(p.require_omega1(), p.require_delta()) + 0.5 * p.require_omega2();
    case ProtocolKind::AM:
    case ProtocolKind::Sense_AM:
      return p.require_omega0_drive() + p.require_omega2();
    case ProtocolKind::AM_via_PM:
      // dressed gap omega0_drive, double-dressed base omega1, first sideband omega3
      return p.require_omega0_drive() + p.require_omega1() + p.require_omega3();
  }
  return 0.0;
}

double effective_coupling(const ProtocolParams& p, double g, SpinConvention convention) {
  p.validate();
  // Flip-flop couplings are written with sigma_pm; scale so the physical rate is fixed.
  const double ladder = 1.0 / convention.flip_flop_element();
  switch (p.kind) {
    case ProtocolKind::HH:
      return g * ladder;
    case ProtocolKind::PM:
    case ProtocolKind::PM_BSS:
      return 0.5 * g * ladder;
    case ProtocolKind::Detuned:
      return g * sin_theta(p.require_omega1(), p.require_delta()) * ladder;
    case ProtocolKind::DetunedDouble:
      return 0.5 * g * sin_theta(p.require_omega1(), p.require_delta()) * ladder;
    case ProtocolKind::AM:
      return g * bessel_j1(p.require_omega1() / p.require_omega2()) * ladder;
    case ProtocolKind::AM_via_PM:
      return 0.5 * g * bessel_j1(p.require_omega2() / p.require_omega3()) * ladder;
    case ProtocolKind::Sense_PM:
      return 0.25 * g;
    case ProtocolKind::Sense_AM:
      return g * bessel_j1(p.require_omega1() / p.require_omega2());
  }
  return 0.0;
}

double predicted_transfer_time(const ProtocolParams& p, double g, SpinConvention convention) {
  const double c = effective_coupling(p, g, convention);
  if (!(c > 0.0)) throw ConfigError("transfer time undefined for zero effective coupling");
  const double element = (p.kind == ProtocolKind::Sense_PM || p.kind == ProtocolKind::Sense_AM)
                             ? 1.0
                             : convention.flip_flop_element();
  return std::numbers::pi / (2.0 * c * element);
}

bool respects_power_cap(const DriveWaveform& w, double omega_max, double t_span, int samples) {
  for (int k = 0; k < samples; ++k) {
    const double t = t_span * k / (samples - 1);
    if (w.envelope(t) > omega_max * (1.0 + 1e-12)) return false;
  }
  return true;
}

double bessel_j(int n, double x) {
  if (std::abs(x) > 5.0) throw ConfigError("Bessel series is only used for |x| <= 5");
  if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
  const double half = 0.5 * x;
  // (x/2)^n / n!
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) || term == 0.0) break;
  }
  return sum;
}

}  // namespace hhsim
