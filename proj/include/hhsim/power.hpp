#pragma once

#include "hhsim/protocols.hpp"

namespace hhsim {

/// Power of each protocol relative to Hartmann-Hahn driving at the same omega_l
/// (HH power / protocol power). P(t) is taken proportional to Omega(t)^2.
struct PowerReport {
  double peak_power_ratio = 0.0;
  double cycle_power_ratio = 0.0;
  double cycle_time_ratio = 0.0;  // T_protocol / T_HH
};

// max_t |Omega(t)| of the drive envelope.
double peak_amplitude(const ProtocolParams& p);
// Time average of Omega(t)^2 over the modulation.
double mean_square_amplitude(const ProtocolParams& p);

/// Duration of one complete electron-nucleus exchange cycle, 2 pi / c for effective
/// coupling c. Detuned and amplitude-modulated couplings use their leading-order forms
/// sin(theta) ~ Omega1/delta and J1(x) ~ x/2.
double cycle_time(const ProtocolParams& p, double g);

// Throw ConfigError ("untuned protocol") unless omega_l matches the nominal resonance.
double peak_ratio(const ProtocolParams& p, double omega_l);
double cycle_ratio(const ProtocolParams& p, double omega_l, double g);
PowerReport power_report(const ProtocolParams& p, double omega_l, double g);

/// Direct quadrature of (sum_k A_k(t) cos((carrier - detuning_k) t + phi_k(t)))^2 over [0, duration].
double drive_energy(const ProtocolParams& p, double carrier, double duration, std::size_t samples);

}  // namespace hhsim
