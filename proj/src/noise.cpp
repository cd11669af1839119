#include "hhsim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hhsim/common.hpp"

namespace hhsim {

void OUParams::validate() const {
  if (!(tau > 0.0)) throw ConfigError("OU correlation time must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("OU standard deviation must be non-negative");
}

Rng make_rng(std::uint64_t master_seed, std::uint64_t realization, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(realization), static_cast<std::uint32_t>(realization >> 32),
                    static_cast<std::uint32_t>(stream), 0x6f75u};
  return Rng(seq);
}

double standard_normal(Rng& rng) {
  // Marsaglia polar method; std::normal_distribution is implementation defined.
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  while (true) {
    const double u = 2.0 * static_cast<double>(rng() >> 11) * kScale - 1.0;
    const double v = 2.0 * static_cast<double>(rng() >> 11) * kScale - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double ou_step(double prev, double dt, const OUParams& p, Rng& rng) {
  if (dt == 0.0) return prev;
  const double decay = std::exp(-dt / p.tau);
  return prev * decay + standard_normal(rng) * p.sigma * std::sqrt(1.0 - decay * decay);
}

OUProcess::OUProcess(const OUParams& params, Rng rng) : params_(params), rng_(std::move(rng)) {
  params_.validate();
  value_ = params_.sigma * standard_normal(rng_);
}

double OUProcess::advance(double dt) {
  value_ = ou_step(value_, dt, params_, rng_);
  return value_;
}

NoiseSource::NoiseSource(const NoiseConfig& config, std::uint64_t master_seed, std::uint64_t realization) {
  if (config.magnetic.sigma > 0.0) magnetic_.emplace(config.magnetic, make_rng(master_seed, realization, 0));
  if (config.drive_relative.sigma > 0.0)
    drive_.emplace(config.drive_relative, make_rng(master_seed, realization, 1));
}

NoiseSample NoiseSource::current() const {
  return {magnetic_ ? magnetic_->value() : 0.0, drive_ ? drive_->value() : 0.0};
}

void NoiseSource::advance(double dt) {
  if (magnetic_) magnetic_->advance(dt);
  if (drive_) drive_->advance(dt);
}

namespace {

struct UnitPhasePaths {
  std::vector<double> times;
  // phases[k * n + i]: integral of a unit-sigma OU path i up to times[k]
  std::vector<double> phases;
  std::size_t n = 0;
};

UnitPhasePaths unit_phase_paths(double tau, double t_max, const FidOptions& options) {
  const double dt = options.dt > 0.0 ? options.dt : std::min(t_max / 400.0, tau / 10.0);
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt));
  UnitPhasePaths out;
  out.n = options.n_realizations;
  out.times.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out.times[k] = static_cast<double>(k) * dt;
  out.phases.assign((steps + 1) * out.n, 0.0);
  const OUParams unit{tau, 1.0};
  for (std::size_t i = 0; i < out.n; ++i) {
    OUProcess process(unit, make_rng(options.seed, i, 7));
    double phase = 0.0;
    double prev = process.value();
    for (std::size_t k = 1; k <= steps; ++k) {
      const double next = process.advance(dt);
      phase += 0.5 * (prev + next) * dt;
      prev = next;
      out.phases[k * out.n + i] = phase;
    }
  }
  return out;
}

std::vector<double> coherence_for(const UnitPhasePaths& paths, double sigma) {
  std::vector<double> c(paths.times.size(), 0.0);
  for (std::size_t k = 0; k < paths.times.size(); ++k) {
    double acc = 0.0;
    const double* row = &paths.phases[k * paths.n];
    for (std::size_t i = 0; i < paths.n; ++i) acc += std::cos(2.0 * sigma * row[i]);
    c[k] = acc / static_cast<double>(paths.n);
  }
  return c;
}

}  // namespace

FidCurve simulate_fid(const OUParams& magnetic, double t_max, const FidOptions& options) {
  magnetic.validate();
  const auto paths = unit_phase_paths(magnetic.tau, t_max, options);
  return {paths.times, coherence_for(paths, magnetic.sigma)};
}

double fid_coherence_analytic(const OUParams& magnetic, double t) {
  const double tau = magnetic.tau;
  const double s2 = magnetic.sigma * magnetic.sigma;
  return std::exp(-4.0 * s2 * tau * tau * (t / tau - 1.0 + std::exp(-t / tau)));
}

std::optional<double> first_crossing(const std::vector<double>& x, const std::vector<double>& y,
                                     double level) {
  for (std::size_t k = 1; k < y.size(); ++k) {
    if (y[k - 1] > level && y[k] <= level) {
      const double f = (y[k - 1] - level) / (y[k - 1] - y[k]);
      return x[k - 1] + f * (x[k] - x[k - 1]);
    }
  }
  return std::nullopt;
}

Calibration calibrate_sigma_for_t2star(double target_t2star, double tau, const CalibrationOptions& options) {
  if (!(target_t2star > 0.0) || !(tau > 0.0))
    throw ConfigError("T2* calibration needs positive target and correlation time");

  const double t_max = 4.0 * target_t2star;
  FidOptions fid = options.fid;
  if (fid.dt <= 0.0) fid.dt = std::min(target_t2star / 100.0, tau / 10.0);
  const auto paths = unit_phase_paths(tau, t_max, fid);

  // Returns +inf when the curve never reaches 1/e inside t_max.
  auto decay_time = [&](double sigma) {
    if (sigma <= 0.0) return std::numeric_limits<double>::infinity();
    const auto c = coherence_for(paths, sigma);
    const auto t = first_crossing(paths.times, c, fid_level());
    return t ? *t : std::numeric_limits<double>::infinity();
  };

  double lo = 0.0;
  double hi = 0.0;
  if (options.sigma_max >= 0.0) {
    hi = options.sigma_max;
    if (!(decay_time(hi) <= target_t2star))
      throw NumericalError("T2* target of " + std::to_string(target_t2star) +
                           " us is not reachable with sigma <= " + std::to_string(hi));
  } else {
    // Quasi-static guess, then expand until the decay is fast enough.
    hi = 1.0 / (std::sqrt(2.0) * target_t2star);
    int expansions = 0;
    while (!(decay_time(hi) <= target_t2star)) {
      lo = hi;
      hi *= 2.0;
      if (++expansions > 60) throw NumericalError("could not bracket sigma for T2* calibration");
    }
  }

  Calibration result;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double t = decay_time(mid);
    result = {mid, t, it};
    if (std::isfinite(t) && std::abs(t - target_t2star) <= options.relative_tolerance * target_t2star)
      return result;
    if (t > target_t2star) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (std::isfinite(result.achieved_t2star) &&
      std::abs(result.achieved_t2star - target_t2star) <= 1e-2 * target_t2star)
    return result;
  throw NumericalError("T2* calibration did not converge after " + std::to_string(options.max_iterations) +
                       " bisection iterations");
}

}  // namespace hhsim
