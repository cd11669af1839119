#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace hhsim {

using Rng = std::mt19937_64;

/// Ornstein-Uhlenbeck parameters. `sigma` is the stationary standard deviation,
/// `tau` the correlation time in us.
struct OUParams {
  double tau = 1.0;
  double sigma = 0.0;

  void validate() const;
};

/// Classical noise acting on one trajectory: a magnetic field delta_B(t) entering as
/// delta_B * sigma_z on the electron, and a relative drive amplitude error eps(t)
/// scaling every drive amplitude by (1 + eps).
struct NoiseConfig {
  OUParams magnetic{25.0, 0.0};
  OUParams drive_relative{500.0, 0.0};

  bool enabled() const { return magnetic.sigma > 0.0 || drive_relative.sigma > 0.0; }

  static NoiseConfig none() { return {}; }
  // tau_B = 25 us, tau_Omega = 500 us, 1% relative amplitude error.
  static NoiseConfig defaults(double magnetic_sigma) {
    return {{25.0, magnetic_sigma}, {500.0, 0.01}};
  }
};

inline constexpr double kDefaultT2Star = 3.0;
inline constexpr double kDefaultMagneticTau = 25.0;

// Independent generator for (master_seed, realization, stream).
Rng make_rng(std::uint64_t master_seed, std::uint64_t realization, std::uint64_t stream);

double standard_normal(Rng& rng);

/// Exact OU update over `dt`: prev * e^{-dt/tau} + n * sigma * sqrt(1 - e^{-2 dt/tau}).
double ou_step(double prev, double dt, const OUParams& p, Rng& rng);

/// A stationary OU realization, started from a draw of the stationary distribution.
class OUProcess {
 public:
  OUProcess(const OUParams& params, Rng rng);

  double value() const { return value_; }
  double advance(double dt);

 private:
  OUParams params_;
  Rng rng_;
  double value_ = 0.0;
};

struct NoiseSample {
  double magnetic = 0.0;
  double drive_relative = 0.0;
};

/// Per-trajectory noise, sampled piecewise constant on the propagation grid.
class NoiseSource {
 public:
  NoiseSource(const NoiseConfig& config, std::uint64_t master_seed, std::uint64_t realization);

  // Value held during the current step; advance() moves to the next step.
  NoiseSample current() const;
  void advance(double dt);

 private:
  std::optional<OUProcess> magnetic_;
  std::optional<OUProcess> drive_;
};

/// Ensemble free-induction decay <sigma_x>(t) of an undriven electron under H = delta_B sigma_z.
struct FidCurve {
  std::vector<double> times;
  std::vector<double> coherence;
};

struct FidOptions {
  std::size_t n_realizations = 2000;
  std::uint64_t seed = 1;
  double dt = 0.0;  // 0 selects min(t_max / 400, tau / 10)
};

FidCurve simulate_fid(const OUParams& magnetic, double t_max, const FidOptions& options = {});

// Closed form for a Gaussian OU field: exp(-4 sigma^2 tau^2 (t/tau - 1 + e^{-t/tau})).
double fid_coherence_analytic(const OUParams& magnetic, double t);

std::optional<double> first_crossing(const std::vector<double>& x, const std::vector<double>& y,
                                     double level);

inline double fid_level() { return 0.36787944117144233; }  // 1/e

struct CalibrationOptions {
  FidOptions fid{};
  double sigma_max = -1.0;  // negative: bracket automatically
  int max_iterations = 40;
  double relative_tolerance = 1e-4;
};

struct Calibration {
  double sigma = 0.0;
  double achieved_t2star = 0.0;
  int iterations = 0;
};

/// Bisection on sigma so that the simulated FID first crosses 1/e at `target_t2star`.
/// Throws NumericalError when the target cannot be bracketed or bisection does not converge.
Calibration calibrate_sigma_for_t2star(double target_t2star, double tau,
                                       const CalibrationOptions& options = {});

}  // namespace hhsim
