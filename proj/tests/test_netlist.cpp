#include <doctest.h>

#include <random>

#include "pwr/activity.hpp"
#include "pwr/characterization.hpp"
#include "pwr/design.hpp"
#include "pwr/errors.hpp"
#include "support/fixtures.hpp"
#include "support/random_design.hpp"

using namespace pwr;

TEST_CASE("three-island fixture parses with its island voltages") {
  Design d = testing::load_fixture("soc.net", "soc.intent");
  REQUIRE(d.islands.size() == 3);
  CHECK(d.find_island("xtensa")->vdd == 0.8);
  CHECK(d.find_island("mem")->vdd == 0.8);
  CHECK(d.find_island("usb")->vdd == 1.2);
  CHECK(d.cells.size() == 3);
  CHECK(d.find_cell("sram")->kind == CellKind::Sram);
  CHECK(d.find_net("clk_net")->driver.is_port());
  CHECK(d.find_net("clk_net")->loads.size() == 2);
  CHECK(validate_design(d).empty());
}

TEST_CASE("empty netlist with one island") {
  Design d = parse_design("", "island a vdd=1.0 switchable=0 retention=0\n");
  CHECK(d.islands.size() == 1);
  CHECK(d.cells.empty());
  CHECK(d.nets.empty());
}

TEST_CASE("parse errors name the line and token") {
  const char* intent = "island a vdd=1.0 switchable=0 retention=0\n";

  SUBCASE("unknown island") {
    try {
      parse_design("# header\ncell x kind=std island=gpu cap_ff=1 gates=1\n", intent);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("unknown island") != std::string::npos);
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("bad number") {
    try {
      parse_design("cell x kind=std island=a cap_ff=abc gates=1\n", intent);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 33);
      CHECK(e.token() == "abc");
    }
  }
  SUBCASE("duplicate cell") {
    CHECK_THROWS_AS(parse_design("cell x kind=std island=a cap_ff=1 gates=1\n"
                                 "cell x kind=std island=a cap_ff=1 gates=1\n",
                                 intent),
                    ParseError);
  }
  SUBCASE("duplicate island") {
    CHECK_THROWS_AS(parse_design("", "island a vdd=1 switchable=0 retention=0\n"
                                     "island a vdd=1 switchable=0 retention=0\n"),
                    ParseError);
  }
  SUBCASE("unknown attribute") {
    CHECK_THROWS_WITH_AS(parse_design("cell x kind=std island=a cap_ff=1 gates=1 color=red\n", intent),
                         doctest::Contains("unknown attribute"), ParseError);
  }
  SUBCASE("unknown keyword") {
    CHECK_THROWS_AS(parse_design("wire x\n", intent), ParseError);
  }
  SUBCASE("unknown kind") {
    CHECK_THROWS_AS(parse_design("cell x kind=flop island=a cap_ff=1 gates=1\n", intent), ParseError);
  }
  SUBCASE("retention without switchable is rejected") {
    CHECK_THROWS_WITH_AS(parse_design("", "island a vdd=1 switchable=0 retention=1\n"),
                         doctest::Contains("retention requires switchable"), ParseError);
  }
  SUBCASE("dangling load") {
    CHECK_THROWS_WITH_AS(parse_design("cell x kind=std island=a cap_ff=1 gates=1\n"
                                      "net n driver=x.Y loads=y.A\n",
                                      intent),
                         doctest::Contains("unresolved load"), ParseError);
  }
}

TEST_CASE("validate_design reports each broken rule") {
  Design d = testing::load_fixture("soc.net", "soc.intent");

  SUBCASE("missing driver cell") {
    d.nets.push_back({"n1", {"ghost", "Y"}, {{"cpu", "X"}}});
    auto errors = validate_design(d);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].message() == "net n1: unresolved driver");
  }
  SUBCASE("retention on a non-switchable island") {
    d.find_island("mem")->retention = true;
    auto errors = validate_design(d);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].object == "island mem");
    CHECK(errors[0].rule == "retention requires switchable");
  }
  SUBCASE("second pim") {
    d.cells.push_back({"p1", CellKind::Pim, "usb", 0, 1, false});
    d.cells.push_back({"p2", CellKind::Pim, "usb", 0, 1, false});
    auto errors = validate_design(d);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].rule == "more than one pim cell");
  }
  SUBCASE("net without loads that is not an output") {
    d.nets.push_back({"floating", {"cpu", "Z"}, {}});
    CHECK(validate_design(d).size() == 1);
    d.ports.push_back({"floating", PortDir::Out, 1.2});
    CHECK(validate_design(d).empty());
  }
  SUBCASE("gate count and capacitance bounds") {
    d.find_cell("cpu")->gate_count = 0;
    d.find_cell("usbc")->cap_ff = -1;
    CHECK(validate_design(d).size() == 2);
  }
}

TEST_CASE("parse and serialize round-trip on random designs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Design d = testing::random_design(rng);
    for (auto& c : d.cells) c.has_sleep_pin = (c.gate_count % 3) == 0;
    REQUIRE(validate_design(d).empty());
    Design back = parse_design(serialize_netlist(d), serialize_intent(d));
    CHECK(back == d);
    CHECK(validate_design(back).empty());
    CHECK(serialize_netlist(back) == serialize_netlist(d));
  }
}

TEST_CASE("activity is toggles per clock cycle") {
  Design d = testing::load_fixture("soc.net", "soc.intent");

  SUBCASE("30 toggles in 1000 ns at 150 MHz") {
    auto a = parse_activity("net cpu_addr toggles=30 duration_ns=1000\n", 150.0, d);
    CHECK(a.sa("cpu_addr") == doctest::Approx(30.0 / 150.0).epsilon(1e-12));
  }
  SUBCASE("zero toggles") {
    auto a = parse_activity("net cpu_addr toggles=0 duration_ns=1000\n", 150.0, d);
    CHECK(a.sa("cpu_addr") == 0.0);
  }
  SUBCASE("clock-like net sits at the cap") {
    auto a = parse_activity("net clk_net toggles=300 duration_ns=1000\n", 150.0, d);
    CHECK(a.sa("clk_net") == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("absent nets are idle") {
    auto a = parse_activity("", 150.0, d);
    CHECK(a.sa("usb_irq") == 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_activity("net cpu_addr toggles=-1 duration_ns=1000\n", 150.0, d), ParseError);
    CHECK_THROWS_AS(parse_activity("net cpu_addr toggles=1 duration_ns=0\n", 150.0, d), ParseError);
    CHECK_THROWS_AS(parse_activity("net nope toggles=1 duration_ns=10\n", 150.0, d), ParseError);
    CHECK_THROWS_AS(parse_activity("net cpu_addr toggles=301 duration_ns=1000\n", 150.0, d), ParseError);
    CHECK_THROWS_AS(parse_activity("", 0.0, d), PreconditionError);
  }
}

TEST_CASE("splitting an observation window leaves activity unchanged") {
  Design d = testing::load_fixture("soc.net", "soc.intent");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> toggles(0, 150);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int i = 0; i < 200; ++i) {
    const int t = toggles(rng) * 2;
    const double dur = 1000.0;
    const double f = frac(rng);
    const int t1 = static_cast<int>(t * f);
    const double d1 = dur * static_cast<double>(t1) / (t == 0 ? 1 : t);
    auto whole = parse_activity("net cpu_addr toggles=" + std::to_string(t) + " duration_ns=1000\n", 150.0, d);
    if (t1 == 0 || t1 == t) continue;
    auto split = parse_activity("net cpu_addr toggles=" + std::to_string(t1) + " duration_ns=" +
                                    std::to_string(d1) + "\nnet cpu_addr toggles=" + std::to_string(t - t1) +
                                    " duration_ns=" + std::to_string(dur - d1) + "\n",
                                150.0, d);
    CHECK(split.sa("cpu_addr") == doctest::Approx(whole.sa("cpu_addr")).epsilon(1e-9));
  }
}

TEST_CASE("characterization table") {
  SUBCASE("processor rows") {
    CharTable t = parse_characterization(
        "op xtensa vdd=1.2 fmax_mhz=155 area_um2=141429 cap_factor=1\n"
        "op xtensa vdd=1.0 fmax_mhz=155 area_um2=165424 cap_factor=1\n"
        "op xtensa vdd=0.8 fmax_mhz=151 area_um2=183551 cap_factor=1\n");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.find("xtensa", 0.8)->fmax_mhz == 151);
    CHECK(t.find("xtensa", 1.0)->area_um2 == 165424);
    CHECK(t.find("xtensa", 0.9) == nullptr);
  }
  SUBCASE("empty file") { CHECK(parse_characterization("# nothing\n").rows.empty()); }
  SUBCASE("duplicate key") {
    CHECK_THROWS_AS(parse_characterization("op xtensa vdd=1.0 fmax_mhz=1 area_um2=1 cap_factor=1\n"
                                           "op xtensa vdd=1.0 fmax_mhz=2 area_um2=1 cap_factor=1\n"),
                    ParseError);
  }
  SUBCASE("non-positive values") {
    CHECK_THROWS_AS(parse_characterization("op x vdd=1.0 fmax_mhz=0 area_um2=1 cap_factor=1\n"), ParseError);
    CHECK_THROWS_AS(parse_characterization("op x vdd=1.0 fmax_mhz=1 area_um2=-5 cap_factor=1\n"), ParseError);
  }
  SUBCASE("calibration lines are left for the calibration table") {
    CharTable t = parse_characterization("calib nand2 temp=25 source=model factor=40\n");
    CHECK(t.rows.empty());
  }
}
