#include <doctest.h>

#include <cmath>

#include "hhsim/common.hpp"
#include "hhsim/power.hpp"

using namespace hhsim;

namespace {

struct Case {
  ProtocolParams p;
  double peak;
  double cycle;
};

std::vector<Case> table(double r) {
  ProtocolParams pm, det, am;
  pm.kind = ProtocolKind::PM;
  pm.omega1 = pm.omega2 = r;
  det.kind = ProtocolKind::Detuned;
  det.omega1 = r;
  det.delta = 10.0 * r;
  am.kind = ProtocolKind::AM;
  am.omega0_drive = am.omega1 = r;
  am.omega2 = 9.0 * r;
  // AM: T_AM = 4 pi omega2 / (omega1 g), cycle = 100 r^2 T_HH / (1.5 r^2 T_AM)
  return {{pm, 4.0, 2.0}, {det, 101.0, 10.1}, {am, 25.0, 100.0 / (1.5 * 18.0)}};
}

}  // namespace

TEST_CASE("closed-form power ratios") {
  for (double r : {0.3, 1.0, 20.0})
    for (double g : {0.001, 0.05}) {
      for (const auto& c : table(r)) {
        const double wl = resonance_condition(c.p);
        CHECK(peak_ratio(c.p, wl) == doctest::Approx(c.peak).epsilon(1e-9));
        CHECK(cycle_ratio(c.p, wl, g) == doctest::Approx(c.cycle).epsilon(1e-9));
        const auto rep = power_report(c.p, wl, g);
        CHECK(rep.peak_power_ratio >= 1.0);
        CHECK(rep.cycle_power_ratio > 0.0);
      }
    }
  CHECK(std::abs(table(1.0)[2].cycle - 3.7) < 0.05);
}

TEST_CASE("HH is its own reference") {
  ProtocolParams hh;
  hh.omega1 = 2.0;
  const auto rep = power_report(hh, 2.0, 0.01);
  CHECK(rep.peak_power_ratio == 1.0);
  CHECK(rep.cycle_power_ratio == doctest::Approx(1.0));
  CHECK(rep.cycle_time_ratio == doctest::Approx(1.0));
}

TEST_CASE("untuned protocols are rejected") {
  const auto c = table(1.0)[0];
  CHECK_THROWS_WITH_AS(peak_ratio(c.p, 2.1), doctest::Contains("untuned"), ConfigError);
  CHECK_THROWS_AS(cycle_ratio(c.p, 1.9, 0.01), ConfigError);
  CHECK_THROWS_AS(cycle_time(c.p, 0.0), ConfigError);
}

TEST_CASE("quadrature of the carrier field matches the closed-form mean square") {
  // cos^2 of the carrier averages to 1/2
  const double r = 1.0, carrier = 400.0;
  for (const auto& c : table(r)) {
    const double period = kTwoPi / r;  // common period of every modulation in the table
    const double duration = 20.0 * period;
    const double energy = drive_energy(c.p, carrier, duration, 400000);
    const double expected = 0.5 * mean_square_amplitude(c.p) * duration;
    CHECK(std::abs(energy / expected - 1.0) < 1e-3);
  }
  CHECK_THROWS_AS(drive_energy(table(1.0)[0].p, 1.0, 1.0, 1), ConfigError);
}
