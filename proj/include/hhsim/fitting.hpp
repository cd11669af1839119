#pragma once

#include <span>

namespace hhsim {

struct ExponentialFit {
  double amplitude = 0.0;
  double decay_time = 0.0;
  double amplitude_error = 0.0;
  double decay_time_error = 0.0;
  double reduced_chi2 = 0.0;
  int iterations = 0;
};

/// Weighted least-squares fit of y = A exp(-t / T) by Levenberg-Marquardt.
/// `sigma` holds per-point standard deviations; an empty span fits unweighted and
/// scales the parameter errors by the residual variance.
/// Throws NumericalError when the fit does not converge.
ExponentialFit fit_exponential(std::span<const double> t, std::span<const double> y,
                               std::span<const double> sigma = {});

}  // namespace hhsim
