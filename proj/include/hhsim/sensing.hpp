#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hhsim/frames.hpp"
#include "hhsim/hamiltonian.hpp"
#include "hhsim/protocols.hpp"
#include "hhsim/spectrum.hpp"

namespace hhsim {

enum class SensingMode {
  effective,   // closed-form flip-flop Hamiltonian in the sensing frame
  full_drive,  // complete first-IP Hamiltonian, mapped into the sensing frame per sample
};

struct SensingOptions {
  double total_time = 1000.0;
  double sample_dt = 0.1;
  SensingMode mode = SensingMode::effective;
  bool shot_noise = false;
  std::size_t shots = 1000;
  std::uint64_t seed = 1;
  double dt = 0.0;              // full_drive propagation step, 0 selects the model default
  std::size_t substeps = 8;     // effective-mode steps per sample
};

/// Sequential measurements: before each sample window the electron is re-prepared in the
/// probe state while the nuclei keep their reduced state; at the end of the window the
/// probe observable is recorded. Nuclei start in |+x>.
struct SensingRecord {
  std::vector<double> sample_times;
  std::vector<double> series;
  std::vector<SpectrumPoint> spectrum;

  double resolution() const;  // 1 / record duration, MHz
};

/// Detuning resonance - omega_l of each nucleus (rad/us).
std::vector<double> sensing_detunings(const ProtocolParams& p, std::span<const Nucleus> nuclei);

/// Frame chain from the sensing frame to the first IP for Sense_PM / Sense_AM.
FrameChain sensing_frame(const ProtocolParams& p, std::span<const Nucleus> nuclei);

/// Throws ConfigError for a non-sensing protocol or when sample_dt aliases a detuning.
SensingRecord sense_spectrum(const ProtocolParams& p, std::span<const Nucleus> nuclei,
                             const SensingOptions& options);

}  // namespace hhsim
