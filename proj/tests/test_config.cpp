#include <doctest.h>

#include "hhsim/common.hpp"
#include "hhsim/config.hpp"
#include "hhsim/presets.hpp"

using namespace hhsim;

TEST_CASE("defaults and typed access") {
  const RunConfig cfg;
  CHECK(cfg.text("run.convention") == "half");
  CHECK(cfg.real("system.g_over_omega1") == 0.04);
  CHECK_FALSE(cfg.optional_real("system.g_mhz").has_value());
  CHECK_THROWS_WITH_AS(cfg.real("system.g_mhz"), doctest::Contains("system.g_mhz"), ConfigError);
  CHECK_THROWS_AS(cfg.real("system.nope"), ConfigError);
}

TEST_CASE("parsing") {
  const auto cfg = RunConfig::parse(
      "# comment\n[run]\nname = demo\nseed = 12\n; other comment\n\n[protocol]\nkind = PM\n"
      "omega1_mhz = 3.3\n[scan]\nratios = 0.5, 1.0 ,1.5\nrefine = false\n");
  CHECK(cfg.text("run.name") == "demo");
  CHECK(cfg.integer("run.seed") == 12);
  CHECK(cfg.real("protocol.omega1_mhz") == 3.3);
  CHECK(cfg.real_list("scan.ratios") == std::vector<double>{0.5, 1.0, 1.5});
  CHECK_FALSE(cfg.boolean("scan.refine"));
}

TEST_CASE("errors name the key and line") {
  CHECK_THROWS_WITH_AS(RunConfig::parse("[run]\nname = a\nbogus = 1\n", "f.cfg"),
                       doctest::Contains("f.cfg:3"), ConfigError);
  CHECK_THROWS_WITH_AS(RunConfig::parse("[run]\nname = a\nbogus = 1\n"), doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_WITH_AS(RunConfig::parse("[nowhere]\n"), doctest::Contains("nowhere"), ConfigError);
  CHECK_THROWS_WITH_AS(RunConfig::parse("[run]\nseed = 1\nseed = 2\n"), doctest::Contains("twice"), ConfigError);
  CHECK_THROWS_WITH_AS(RunConfig::parse("[run]\nseed = x\n"), doctest::Contains("run.seed"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[run]\nseed\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("name = a\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[protocol]\nomega1_mhz = 1.0.0\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[scan]\nrefine = yes\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load_file("/nonexistent/dir/x.cfg"), ConfigError);
}

TEST_CASE("set and unset") {
  RunConfig cfg;
  cfg.set("system.g_mhz", "0.1");
  CHECK(cfg.has("system.g_mhz"));
  cfg.unset("system.g_mhz");
  CHECK_FALSE(cfg.has("system.g_mhz"));
  CHECK_THROWS_AS(cfg.set("system.g_mhz", "abc"), ConfigError);
  CHECK_THROWS_AS(cfg.set("run.unknown", "1"), ConfigError);
}

TEST_CASE("serialize round-trips") {
  RunConfig cfg;
  cfg.set("protocol.kind", "AM");
  cfg.set("scan.ratios", "0.1, 0.2");
  const auto again = RunConfig::parse(cfg.serialize());
  CHECK(again == cfg);
  CHECK(again.serialize() == cfg.serialize());
}

TEST_CASE("every preset validates and round-trips") {
  CHECK(presets().size() == 6);
  for (const char* name : {"fig2-strong", "fig2-weak", "fig3", "fig4", "supp-polar1", "power-table"}) {
    const Preset* p = find_preset(name);
    REQUIRE(p != nullptr);
    for (bool smoke : {false, true}) {
      const auto cfg = preset_config(*p, smoke);
      CHECK(RunConfig::parse(cfg.serialize()) == cfg);
    }
  }
  CHECK(find_preset("fig3")->description == "coherence time vs Omega2/Omega1");
  CHECK(find_preset("supp-polar1")->description == "resonance-shift scan at Omega2=1.2 Omega1");
  CHECK(find_preset("fig5") == nullptr);
}
