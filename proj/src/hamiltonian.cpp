#include "hhsim/hamiltonian.hpp"

#include <cmath>

#include "hhsim/common.hpp"

namespace hhsim {

SystemParams single_nucleus(double omega_l, double g, double omega0) {
  return {omega0, {Nucleus{omega_l, g}}};
}

HamiltonianModel::HamiltonianModel(SystemParams system, ProtocolParams protocol, Frame frame)
    : system_(std::move(system)), protocol_(std::move(protocol)), frame_(frame) {
  protocol_.validate();
  if (system_.n_spins() > kMaxSpins) throw ConfigError("at most 4 nuclei are supported");
  if (frame_ == Frame::lab && !(system_.omega0 > 0.0))
    throw ConfigError("lab-frame simulation needs a positive electron gap omega0");
  waveform_ = waveform(protocol_);
  if (protocol_.kind == ProtocolKind::PM || protocol_.kind == ProtocolKind::PM_BSS)
    modulation_ = modulation_frequency(protocol_);

  const std::size_t n = system_.n_spins();
  sx_ = embed(Axis::x, 0, n);
  sy_ = embed(Axis::y, 0, n);
  sz_ = embed(Axis::z, 0, n);
  static_part_ = Operator::Zero(sx_.rows(), sx_.cols());
  for (std::size_t k = 0; k < system_.nuclei.size(); ++k) {
    const auto& nuc = system_.nuclei[k];
    static_part_ += 0.5 * nuc.omega_l * embed(Axis::z, k + 1, n);
    static_part_ += nuc.g * (sz_ * embed(Axis::x, k + 1, n));
  }
}

ElectronField HamiltonianModel::electron_field(double t, NoiseSample noise) const {
  const auto& p = protocol_;
  const double scale = 1.0 + noise.drive_relative;
  ElectronField f;

  if (frame_ == Frame::lab) {
    const double carrier = p.carrier > 0.0 ? p.carrier : system_.omega0;
    f.z = 0.5 * system_.omega0 + noise.magnetic;
    for (const auto& ch : waveform_.channels) {
      f.x += scale * ch.amplitude(t) * std::cos((carrier - ch.carrier_detuning) * t + ch.phase(t));
    }
    return f;
  }

  f.z = noise.magnetic;
  switch (p.kind) {
    case ProtocolKind::HH:
      f.x = 0.5 * scale * *p.omega1;
      break;
    case ProtocolKind::PM:
    case ProtocolKind::PM_BSS:
      f.x = 0.5 * scale * *p.omega1;
      f.z -= *p.omega2 * std::cos(modulation_ * t);
      break;
    case ProtocolKind::Detuned:
      f.x = 0.5 * scale * *p.omega1;
      f.z += 0.5 * *p.delta;
      break;
    case ProtocolKind::DetunedDouble: {
      const double rate = std::hypot(*p.delta, *p.omega1);
      f.x = 0.5 * scale * *p.omega1;
      f.y = 0.5 * scale * *p.omega2 * std::cos(rate * t);
      f.z += 0.5 * *p.delta;
      break;
    }
    case ProtocolKind::AM:
      f.x = 0.5 * scale * (*p.omega0_drive + *p.omega1 * std::cos(*p.omega2 * t));
      break;
    case ProtocolKind::AM_via_PM:
      f.x = 0.5 * scale * *p.omega0_drive;
      f.z -= (*p.omega1 + *p.omega2 * std::cos(*p.omega3 * t)) * std::cos(*p.omega0_drive * t);
      break;
    case ProtocolKind::Sense_PM:
      f.x = 0.5 * scale * (*p.omega1 + *p.omega_s * std::cos(*p.omega2 * t));
      f.z -= *p.omega2 * std::cos(*p.omega1 * t);
      break;
    case ProtocolKind::Sense_AM: {
      const double accumulated = *p.omega0_drive * t + (*p.omega1 / *p.omega2) * std::sin(*p.omega2 * t);
      f.x = 0.5 * scale * (*p.omega0_drive + *p.omega1 * std::cos(*p.omega2 * t));
      f.z -= *p.omega_s * std::cos(accumulated);
      break;
    }
  }
  return f;
}

void HamiltonianModel::assemble(double t, NoiseSample noise, Operator& out) const {
  const ElectronField f = electron_field(t, noise);
  out = static_part_ + f.x * sx_ + f.y * sy_ + f.z * sz_;
}

Operator HamiltonianModel::at(double t, NoiseSample noise) const {
  Operator out;
  assemble(t, noise, out);
  return out;
}

double HamiltonianModel::fastest_frequency() const {
  const auto& p = protocol_;
  auto val = [](const std::optional<double>& v) { return v ? std::abs(*v) : 0.0; };

  double nuclear = 0.0;
  for (const auto& nuc : system_.nuclei) nuclear += std::abs(nuc.omega_l) + 2.0 * std::abs(nuc.g);

  // Bounds on |f_x| + |f_y| + |f_z| in the first IP, the total drive amplitude, the
  // drive phase rate, and the fastest explicit modulation.
  double field = 0.0, amplitude = 0.0, phase_rate = 0.0, modulation = 0.0;
  switch (p.kind) {
    case ProtocolKind::HH:
      amplitude = val(p.omega1);
      field = 0.5 * amplitude;
      break;
    case ProtocolKind::PM:
    case ProtocolKind::PM_BSS:
      amplitude = val(p.omega1);
      field = 0.5 * amplitude + val(p.omega2);
      phase_rate = 2.0 * val(p.omega2);
      modulation = modulation_;
      break;
    case ProtocolKind::Detuned:
      amplitude = val(p.omega1);
      field = 0.5 * (amplitude + val(p.delta));
      phase_rate = val(p.delta);
      break;
    case ProtocolKind::DetunedDouble:
      amplitude = val(p.omega1) + val(p.omega2);
      field = 0.5 * (amplitude + val(p.delta));
      phase_rate = val(p.delta);
      modulation = std::hypot(val(p.delta), val(p.omega1));
      break;
    case ProtocolKind::AM:
      amplitude = val(p.omega0_drive) + val(p.omega1);
      field = 0.5 * amplitude;
      modulation = val(p.omega2);
      break;
    case ProtocolKind::AM_via_PM:
      amplitude = val(p.omega0_drive);
      field = 0.5 * amplitude + val(p.omega1) + val(p.omega2);
      phase_rate = 2.0 * (val(p.omega1) + val(p.omega2));
      modulation = val(p.omega0_drive) + val(p.omega3);
      break;
    case ProtocolKind::Sense_PM:
      amplitude = val(p.omega1) + val(p.omega_s);
      field = 0.5 * amplitude + val(p.omega2);
      phase_rate = 2.0 * val(p.omega2);
      modulation = std::max(val(p.omega1), val(p.omega2));
      break;
    case ProtocolKind::Sense_AM:
      amplitude = val(p.omega0_drive) + val(p.omega1);
      field = 0.5 * amplitude + val(p.omega_s);
      phase_rate = 2.0 * val(p.omega_s);
      modulation = val(p.omega0_drive) + val(p.omega1) + val(p.omega2);
      break;
  }
  if (frame_ == Frame::lab) {
    const double carrier = p.carrier > 0.0 ? p.carrier : system_.omega0;
    return system_.omega0 + 2.0 * amplitude + nuclear + carrier + val(p.delta) + phase_rate + modulation;
  }
  return 2.0 * field + nuclear + modulation;
}

double HamiltonianModel::default_dt() const { return kTwoPi / fastest_frequency() / 40.0; }

Operator build_hamiltonian(const SystemParams& system, const ProtocolParams& protocol, Frame frame,
                           NoiseSample noise, double t) {
  return HamiltonianModel(system, protocol, frame).at(t, noise);
}

}  // namespace hhsim
