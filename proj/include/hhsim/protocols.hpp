#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhsim/spin_algebra.hpp"

namespace hhsim {

enum class ProtocolKind { HH, PM, PM_BSS, Detuned, DetunedDouble, AM, AM_via_PM, Sense_PM, Sense_AM };

std::string_view to_string(ProtocolKind kind);
ProtocolKind parse_protocol_kind(std::string_view text);

/// Control parameters, all angular frequencies in rad/us. Which fields are used
/// depends on the kind:
///   HH             omega1
///   PM, PM_BSS     omega1 (drive), omega2 (second drive from the phase modulation)
///   Detuned        omega1, delta
///   DetunedDouble  omega1, delta, omega2 (second drive along y)
///   AM             omega0_drive (base), omega1 (modulation depth), omega2 (modulation rate)
///   AM_via_PM      omega0_drive (drive), omega1, omega2, omega3 (phase-modulated second drive)
///   Sense_PM       omega1, omega2, omega_s (spin-locking drive)
///   Sense_AM       omega0_drive, omega1, omega2, omega_s
struct ProtocolParams {
  ProtocolKind kind = ProtocolKind::HH;
  std::optional<double> omega1;
  std::optional<double> omega2;
  std::optional<double> omega0_drive;
  std::optional<double> omega3;
  std::optional<double> delta;
  std::optional<double> omega_s;
  double carrier = 0.0;  // electron gap omega_0, lab frame only

  double require_omega1() const;
  double require_omega2() const;
  double require_omega0_drive() const;
  double require_omega3() const;
  double require_delta() const;
  double require_omega_s() const;

  // Throws ConfigError when a field needed by `kind` is missing or degenerate.
  void validate() const;
};

struct BssCorrected {
  double omega1_tilde = 0.0;
  double omega2_tilde = 0.0;
};

/// Bloch-Siegert corrected modulation frequency and second-drive strength.
BssCorrected bss_correct(double omega1, double omega2);

// Frequency of the phase modulation: omega1, or its corrected value for PM_BSS.
double modulation_frequency(const ProtocolParams& p);

/// One drive channel on the carrier: amplitude(t) * cos((carrier - detuning) t + phase(t)) sigma_x.
struct DriveChannel {
  std::function<double(double)> amplitude;
  std::function<double(double)> phase;
  double carrier_detuning = 0.0;
};

/// Control field of a protocol. Channels share the carrier; the first channel's
/// phase defines the first interaction picture.
struct DriveWaveform {
  std::vector<DriveChannel> channels;

  double amplitude(double t) const { return channels.front().amplitude(t); }
  double phase(double t) const { return channels.front().phase(t); }
  double carrier_detuning() const { return channels.front().carrier_detuning; }

  // |sum_k A_k(t) exp(i phi_k(t))|, the instantaneous Rabi frequency of the total field.
  double envelope(double t) const;
};

DriveWaveform waveform(const ProtocolParams& p);

/// Nominal resonance Larmor frequency of the protocol.
double resonance_condition(const ProtocolParams& p);

/// Effective flip-flop coupling: the coefficient c of c (sigma_+ I_- + h.c.) written in
/// the given convention. For the default half convention this is g, g/2, g sin(theta),
/// g J1(omega1/omega2), g/4 for HH, PM, Detuned, AM, Sense_PM respectively.
double effective_coupling(const ProtocolParams& p, double g, SpinConvention convention = {});

/// Time for a complete |down,up> -> |up,down> transfer at exact resonance.
double predicted_transfer_time(const ProtocolParams& p, double g, SpinConvention convention = {});

/// True when |Omega(t)| <= omega_max on `samples` equally spaced times in [0, t_span].
bool respects_power_cap(const DriveWaveform& w, double omega_max, double t_span, int samples = 10000);

// Bessel functions of the first kind by ascending series, valid for |x| <= 5.
double bessel_j(int n, double x);
inline double bessel_j0(double x) { return bessel_j(0, x); }
inline double bessel_j1(double x) { return bessel_j(1, x); }

}  // namespace hhsim
