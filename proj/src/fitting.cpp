#include "hhsim/fitting.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "hhsim/common.hpp"

namespace hhsim {

namespace {

struct Problem {
  std::span<const double> t, y;
  std::vector<double> w;  // 1 / sigma^2

  double chi2(double a, double tau) const {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = y[i] - a * std::exp(-t[i] / tau);
      s += w[i] * r * r;
    }
    return s;
  }

  // J^T W J and J^T W r at (a, tau)
  void normal_equations(double a, double tau, Eigen::Matrix2d& jtj, Eigen::Vector2d& jtr) const {
    jtj.setZero();
    jtr.setZero();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = std::exp(-t[i] / tau);
      const Eigen::Vector2d j{e, a * e * t[i] / (tau * tau)};
      const double r = y[i] - a * e;
      jtj += w[i] * j * j.transpose();
      jtr += w[i] * r * j;
    }
  }
};

// Log-linear start from the positive samples.
std::pair<double, double> initial_guess(std::span<const double> t, std::span<const double> y) {
  double st = 0, sl = 0, stt = 0, stl = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (y[i] <= 0.0) continue;
    const double l = std::log(y[i]);
    st += t[i];
    sl += l;
    stt += t[i] * t[i];
    stl += t[i] * l;
    ++n;
  }
  const double span = t.back() - t.front();
  if (n < 2) return {y.front(), span > 0.0 ? span : 1.0};
  const double denom = n * stt - st * st;
  const double slope = denom != 0.0 ? (n * stl - st * sl) / denom : 0.0;
  const double intercept = (sl - slope * st) / n;
  const double tau = slope < 0.0 ? -1.0 / slope : 10.0 * (span > 0.0 ? span : 1.0);
  return {std::exp(intercept), tau};
}

}  // namespace

ExponentialFit fit_exponential(std::span<const double> t, std::span<const double> y, std::span<const double> sigma) {
  if (t.size() != y.size() || (!sigma.empty() && sigma.size() != t.size()))
    throw ConfigError("fit inputs must have equal length");
  if (t.size() < 3) throw NumericalError("exponential fit needs at least three points");

  Problem prob{t, y, std::vector<double>(t.size(), 1.0)};
  if (!sigma.empty()) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(sigma[i] > 0.0)) throw ConfigError("fit uncertainties must be positive");
      prob.w[i] = 1.0 / (sigma[i] * sigma[i]);
    }
  }

  auto [a, tau] = initial_guess(t, y);
  double lambda = 1e-3;
  double chi2 = prob.chi2(a, tau);
  Eigen::Matrix2d jtj;
  Eigen::Vector2d jtr;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= 500; ++it) {
    prob.normal_equations(a, tau, jtj, jtr);
    Eigen::Matrix2d damped = jtj;
    damped.diagonal() *= 1.0 + lambda;
    const Eigen::Vector2d step = damped.ldlt().solve(jtr);
    const double a_new = a + step(0);
    const double tau_new = tau + step(1);
    const double chi2_new = tau_new > 0.0 ? prob.chi2(a_new, tau_new) : HUGE_VAL;
    if (chi2_new <= chi2) {
      const bool small = std::abs(step(0)) <= 1e-10 * (std::abs(a) + 1e-12) &&
                         std::abs(step(1)) <= 1e-10 * std::abs(tau);
      const bool flat = chi2 - chi2_new <= 1e-14 * (chi2 + 1e-300);
      a = a_new;
      tau = tau_new;
      chi2 = chi2_new;
      lambda = std::max(lambda / 10.0, 1e-12);
      if (small || flat) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) {
        converged = true;  // no further decrease possible from here
        break;
      }
    }
  }
  if (!converged || !std::isfinite(a) || !std::isfinite(tau)) throw NumericalError("exponential fit did not converge");

  prob.normal_equations(a, tau, jtj, jtr);
  const double dof = static_cast<double>(t.size()) - 2.0;
  ExponentialFit fit;
  fit.amplitude = a;
  fit.decay_time = tau;
  fit.reduced_chi2 = dof > 0 ? chi2 / dof : 0.0;
  fit.iterations = it;
  Eigen::Matrix2d cov = jtj.inverse();
  if (sigma.empty()) cov *= fit.reduced_chi2;
  fit.amplitude_error = std::sqrt(std::max(cov(0, 0), 0.0));
  fit.decay_time_error = std::sqrt(std::max(cov(1, 1), 0.0));
  return fit;
}

}  // namespace hhsim
