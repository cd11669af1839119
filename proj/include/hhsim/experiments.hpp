#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhsim/hamiltonian.hpp"
#include "hhsim/noise.hpp"
#include "hhsim/protocols.hpp"
#include "hhsim/spin_algebra.hpp"

namespace hhsim {

/// Probability that the nucleus is still |up_z>: |<up,up|psi>|^2 + |<down,up|psi>|^2.
/// Throws std::invalid_argument unless psi is a two-spin state.
double polarization(const StateVector& psi);
// Same quantity from the reduced density matrix of the nucleus.
double polarization_from_density(const Operator& rho);

/// NV state prepared before a transfer: the lower dressed eigenstate of the protocol's drive.
/// HH, AM: |-x>; Detuned: lower eigenstate of omega1 sigma_x + delta sigma_z; PM, AM_via_PM: |up_z>;
/// DetunedDouble: |-y>; PM_BSS: |up_z> tilted towards +x by atan(omega2 / (omega1 + omega1_tilde)).
Eigen::Vector2cd initial_nv_state(const ProtocolParams& p);
// initial_nv_state(p) with the nucleus in |up_z>
StateVector polarization_initial_state(const ProtocolParams& p);

struct RunSettings {
  NoiseConfig noise = NoiseConfig::none();
  std::size_t n_realizations = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  double dt = 0.0;  // 0 selects the model default
  SpinConvention convention{};
};

struct ScanPoint {
  double x = 0.0;
  double y = 0.0;
  double y_err = 0.0;
};

struct ScanResult {
  std::string x_label;
  std::string y_label;
  std::vector<ScanPoint> points;
  std::vector<std::pair<std::string, std::string>> metadata;
};

struct PolarizationCurve {
  std::vector<double> times;
  std::vector<double> p_n;
  std::vector<double> p_n_err;

  std::size_t argmin() const;
  double min_p_n() const { return p_n[argmin()]; }
  double min_time() const { return times[argmin()]; }
};

/// P_N(t) from polarization_initial_state(p) for one nucleus, averaged over the noise ensemble.
PolarizationCurve polarization_curve(const ProtocolParams& p, const Nucleus& nucleus, double t_final,
                                     const RunSettings& settings, std::size_t record_every = 1);

// 3 x the predicted transfer time; the optimal polarization time is the minimum inside it.
double polarization_window(const ProtocolParams& p, double g, SpinConvention convention = {});

/// Optimal-time P_N at each omega_l in `omega_ls` (any order); points are returned sorted.
ScanResult polarization_scan(const ProtocolParams& p, double g, std::vector<double> omega_ls, double t_final,
                             const RunSettings& settings);

struct ResonanceScanOptions {
  double omega_l_min = 0.0;
  double omega_l_max = 0.0;
  std::size_t n_points = 41;
  double g = 0.0;
  double t_final = 0.0;  // 0 selects polarization_window
  bool refine = true;    // golden-section refinement around the grid minimum
  RunSettings run{};
};

struct ResonanceScan {
  ScanResult curve;  // x = omega_l (rad/us), y = P_N at the optimal time
  // Unset when the curve is flat (no coupling).
  std::optional<double> best_omega_l;
  double best_p_n = 1.0;
  double best_time = 0.0;
};

/// Throws NumericalError when the deepest point lies on the boundary of the range.
ResonanceScan scan_resonance(const ProtocolParams& p, const ResonanceScanOptions& options);

/// Full width at half depth of the dip whose minimum is nearest `x_center`, measured
/// between the minimum and the undisturbed level 1. Unset when a side never recovers.
std::optional<double> dip_fwhm(const ScanResult& scan, double x_center);

struct RatioScanOptions {
  std::vector<double> ratios;  // Omega2 / Omega1
  double omega1 = 0.0;
  double g = 0.0;
  double shift_min = -0.3;  // resonance search window around the nominal value, in units of Omega2
  double shift_max = 0.5;
  std::size_t shift_points = 81;
  RunSettings run{};
};

struct RatioPoint {
  double ratio = 0.0;
  double p_n = 1.0;
  double p_n_err = 0.0;
  double omega_l = 0.0;
  double shift_over_omega2 = 0.0;
};

/// For each ratio: locate the resonance without noise, then evaluate the optimal-time P_N
/// with the configured noise. `corrected` selects PM_BSS over PM.
std::vector<RatioPoint> scan_ratio(bool corrected, const RatioScanOptions& options);

struct CoherenceOptions {
  double t_max = 3000.0;
  double sample_interval = 10.0;
  RunSettings run{};
};

struct T2Result {
  double t2 = 0.0;
  double t2_error = 0.0;
  double amplitude = 0.0;
  double reduced_chi2 = 0.0;
  std::optional<double> one_over_e_time;
  std::vector<double> times;
  std::vector<double> coherence;
  std::vector<double> coherence_err;
};

/// Coherence time of the double-dressed electron without nuclei. The electron starts in
/// |+y> of the first IP, an equal superposition of the double-dressed states; the signal is
/// |E[<sigma_x> + i <sigma_y>]| in the frame that removes the first drive, fitted to
/// A exp(-t/T2). Throws NumericalError("decay not observed ...") below 5% decay.
T2Result measure_t2(const ProtocolParams& p, const CoherenceOptions& options);

/// Time of the first transfer dip of the noiseless P_N(t) within the polarization window:
/// the deepest sample between the first drop below 0.25 and the next rise above 0.75,
/// refined by a parabola. Throws NumericalError when P_N never drops below 0.25.
double measure_transfer_time(const ProtocolParams& p, const Nucleus& nucleus, const RunSettings& settings);

}  // namespace hhsim
