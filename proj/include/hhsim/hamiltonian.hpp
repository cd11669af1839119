#pragma once

#include <vector>

#include "hhsim/noise.hpp"
#include "hhsim/protocols.hpp"
#include "hhsim/spin_algebra.hpp"

namespace hhsim {

struct Nucleus {
  double omega_l = 0.0;  // Larmor frequency, rad/us
  double g = 0.0;        // coupling in g sigma_z I_x, rad/us
};

/// Electron gap omega0 and the nuclei coupled to the electron.
struct SystemParams {
  double omega0 = 0.0;
  std::vector<Nucleus> nuclei;

  std::size_t n_spins() const { return 1 + nuclei.size(); }
};

SystemParams single_nucleus(double omega_l, double g, double omega0 = 0.0);

enum class Frame { lab, first_ip };

// Coefficients of the electron operator fx sigma_x + fy sigma_y + fz sigma_z.
struct ElectronField {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// H(t) = sum_k [(omega_l,k / 2) I_z,k + g_k sigma_z I_x,k] + f(t) . sigma.
///
/// The first interaction picture is taken with respect to ((omega0 - delta) + phi'(t))/2 sigma_z,
/// where phi is the phase of the first drive channel, followed by the RWA on the carrier.
/// Lab-frame models keep the carrier and need omega0 > 0.
class HamiltonianModel {
 public:
  HamiltonianModel(SystemParams system, ProtocolParams protocol, Frame frame = Frame::first_ip);

  std::size_t n_spins() const { return system_.n_spins(); }
  Eigen::Index dim() const { return static_part_.rows(); }
  Frame frame() const { return frame_; }
  const SystemParams& system() const { return system_; }
  const ProtocolParams& protocol() const { return protocol_; }

  ElectronField electron_field(double t, NoiseSample noise = {}) const;

  // Writes H(t) into `out`, which must already have dim() x dim() shape or be resizable.
  void assemble(double t, NoiseSample noise, Operator& out) const;
  Operator at(double t, NoiseSample noise = {}) const;

  // Upper bound on the frequencies present in H for this frame.
  double fastest_frequency() const;
  // (1/40) of the fastest period.
  double default_dt() const;

 private:
  SystemParams system_;
  ProtocolParams protocol_;
  Frame frame_;
  DriveWaveform waveform_;
  double modulation_ = 0.0;
  Operator static_part_;
  Operator sx_, sy_, sz_;
};

Operator build_hamiltonian(const SystemParams& system, const ProtocolParams& protocol, Frame frame,
                           NoiseSample noise, double t);

}  // namespace hhsim
