#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hhsim/common.hpp"
#include "hhsim/fitting.hpp"
#include "hhsim/noise.hpp"

using namespace hhsim;

TEST_CASE("zero step leaves the value unchanged") {
  Rng rng = make_rng(1, 0, 0);
  const OUParams p{25.0, 0.3};
  CHECK(ou_step(0.7, 0.0, p, rng) == 0.7);
}

TEST_CASE("ou chain statistics") {
  const OUParams p{10.0, 0.5};
  const double dt = 1.0;
  Rng rng = make_rng(42, 0, 0);

  SUBCASE("mean from zero") {
    const std::size_t n = 100000;
    double x = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += (x = ou_step(x, dt, p, rng));
    // the chain is correlated over tau/dt steps; widen the iid bound accordingly
    const double bound = 3.0 * p.sigma / std::sqrt(static_cast<double>(n)) * std::sqrt(2.0 * p.tau / dt);
    CHECK(std::abs(sum / static_cast<double>(n)) < bound);
  }

  SUBCASE("stationary variance and lag autocorrelation") {
    const std::size_t n = 1000000;
    OUProcess proc(p, make_rng(7, 3, 0));
    std::vector<double> xs(n);
    for (auto& x : xs) x = proc.advance(dt);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    CHECK(std::abs(var / (p.sigma * p.sigma) - 1.0) < 0.03);
    for (std::size_t lag : {1, 5, 10}) {
      double c = 0.0;
      for (std::size_t k = 0; k + lag < n; ++k) c += (xs[k] - mean) * (xs[k + lag] - mean);
      c /= static_cast<double>(n - lag) * var;
      const double expected = std::exp(-static_cast<double>(lag) * dt / p.tau);
      CHECK(std::abs(c / expected - 1.0) < 0.05);
    }
  }
}

TEST_CASE("identical streams are bit identical") {
  const OUParams p{25.0, 1.0};
  OUProcess a(p, make_rng(9, 4, 1)), b(p, make_rng(9, 4, 1)), c(p, make_rng(9, 5, 1));
  bool differs = false;
  for (int k = 0; k < 1000; ++k) {
    const double va = a.advance(0.01), vb = b.advance(0.01), vc = c.advance(0.01);
    CHECK(va == vb);
    differs = differs || va != vc;
  }
  CHECK(differs);
}

TEST_CASE("zero sigma is the zero process") {
  OUProcess z(OUParams{5.0, 0.0}, make_rng(1, 1, 1));
  for (int k = 0; k < 10; ++k) CHECK(z.advance(0.1) == 0.0);
  NoiseSource src(NoiseConfig::none(), 1, 0);
  CHECK(src.current().magnetic == 0.0);
  CHECK(src.current().drive_relative == 0.0);
}

TEST_CASE("invalid OU parameters") {
  CHECK_THROWS_AS(OUParams({0.0, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(OUParams({1.0, -1.0}).validate(), ConfigError);
}

TEST_CASE("noise sources are deterministic per realization") {
  const NoiseConfig cfg = NoiseConfig::defaults(0.25);
  NoiseSource a(cfg, 11, 2), b(cfg, 11, 2);
  for (int k = 0; k < 100; ++k) {
    CHECK(a.current().magnetic == b.current().magnetic);
    CHECK(a.current().drive_relative == b.current().drive_relative);
    a.advance(0.05);
    b.advance(0.05);
  }
}

TEST_CASE("simulated FID follows the Gaussian OU closed form") {
  const OUParams p{25.0, 0.25};
  FidOptions opts;
  opts.n_realizations = 4000;
  const auto fid = simulate_fid(p, 8.0, opts);
  // 4000 samples of a bounded cosine: standard error below 1/sqrt(2 n) ~ 0.011
  for (std::size_t k = 0; k < fid.times.size(); k += 20)
    CHECK(std::abs(fid.coherence[k] - fid_coherence_analytic(p, fid.times[k])) < 0.04);
}

TEST_CASE("calibration hits the target T2*") {
  CalibrationOptions opts;
  opts.fid.n_realizations = 2000;
  const auto cal = calibrate_sigma_for_t2star(3.0, 25.0, opts);
  CHECK(cal.sigma > 0.0);
  // re-simulate with an independent seed
  FidOptions check;
  check.n_realizations = 2000;
  check.seed = 99;
  check.dt = 0.01;
  const auto fid = simulate_fid({25.0, cal.sigma}, 9.0, check);
  const auto t = first_crossing(fid.times, fid.coherence, fid_level());
  REQUIRE(t.has_value());
  CHECK(std::abs(*t / 3.0 - 1.0) < 0.05);
}

TEST_CASE("calibration rejects sigma fixed at zero") {
  CalibrationOptions opts;
  opts.fid.n_realizations = 200;
  opts.sigma_max = 0.0;
  CHECK_THROWS_AS(calibrate_sigma_for_t2star(3.0, 25.0, opts), NumericalError);
  CHECK_THROWS_AS(calibrate_sigma_for_t2star(-1.0, 25.0), ConfigError);
}

double fid_coherence_at(const FidCurve& fid, double t) {
  const auto it = std::lower_bound(fid.times.begin(), fid.times.end(), t);
  return fid.coherence[static_cast<std::size_t>(it - fid.times.begin())];
}

TEST_CASE("short correlation gives an exponential decay") {
  // motional narrowing: tau << T2* makes exp(-t / T2) with 1/T2 = 4 sigma^2 tau
  CalibrationOptions opts;
  opts.fid.n_realizations = 2000;
  const double tau = 0.01;
  const auto cal = calibrate_sigma_for_t2star(3.0, tau, opts);
  FidOptions fo;
  fo.n_realizations = 2000;
  fo.dt = 0.001;
  const auto fid = simulate_fid({tau, cal.sigma}, 9.0, fo);
  std::vector<double> t, y;
  for (std::size_t k = 0; k < fid.times.size(); k += 100) {
    t.push_back(fid.times[k]);
    y.push_back(fid.coherence[k]);
  }
  const auto fit = fit_exponential(t, y);
  CHECK(fit.reduced_chi2 < 1e-3);
  CHECK(std::abs(fit.decay_time / 3.0 - 1.0) < 0.05);
  // log coherence doubles from t = 3 to t = 6; a Gaussian decay would quadruple it
  const double at3 = std::log(fid_coherence_at(fid, 3.0)), at6 = std::log(fid_coherence_at(fid, 6.0));
  CHECK(std::abs(at6 / at3 - 2.0) < 0.3);
}
