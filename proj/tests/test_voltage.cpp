#include <doctest.h>

#include <algorithm>
#include <random>

#include "pwr/characterization.hpp"
#include "pwr/errors.hpp"
#include "pwr/voltage.hpp"
#include "support/fixtures.hpp"

using namespace pwr;

namespace {

CharTable xtensa_table() { return parse_characterization(testing::read_fixture("xtensa.char")); }

// Oracle: brute-force scan for the lowest feasible vdd, then smallest area.
std::optional<OperatingPoint> scan(const CharTable& t, std::string_view cls, double f) {
  std::optional<OperatingPoint> best;
  for (const auto& r : t.rows) {
    if (r.island_class != cls || r.fmax_mhz < f) continue;
    if (!best || std::make_pair(r.vdd, r.area_um2) < std::make_pair(best->vdd, best->area_um2)) best = r;
  }
  return best;
}

}  // namespace

TEST_CASE("minimum voltage selection on the processor table") {
  const CharTable t = xtensa_table();
  CHECK(select_min_voltage(t, "xtensa", 150).vdd == 0.8);
  CHECK(select_min_voltage(t, "xtensa", 151).vdd == 0.8);
  CHECK(select_min_voltage(t, "xtensa", 152).vdd == 1.0);
  CHECK(select_min_voltage(t, "xtensa", 155).vdd == 1.0);
  CHECK(select_min_voltage(t, "mem", 181).vdd == 0.8);

  try {
    select_min_voltage(t, "xtensa", 160);
    FAIL("expected infeasible");
  } catch (const InfeasibleError& e) {
    CHECK(e.best_fmax_mhz() == 155.0);
  }
  CHECK_THROWS_AS(select_min_voltage(t, "dsp", 100), PreconditionError);
}

TEST_CASE("equal voltages prefer the smaller area") {
  CharTable t;
  t.rows = {{"c", 1.0, 200, 900, 1}, {"c", 1.0, 210, 800, 1}, {"c", 1.2, 300, 100, 1}};
  CHECK(select_min_voltage(t, "c", 150).area_um2 == 800);
  CHECK(select_min_voltage(t, "c", 205).area_um2 == 800);
  CHECK(select_min_voltage(t, "c", 250).vdd == 1.2);
}

TEST_CASE("selection properties over random tables") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> vstep(5, 13);
  std::uniform_real_distribution<double> freq(50, 400);
  for (int iter = 0; iter < 300; ++iter) {
    CharTable t;
    const int n = 1 + iter % 7;
    for (int i = 0; i < n; ++i) t.rows.push_back({"c", vstep(rng) / 10.0, freq(rng), freq(rng) * 1000, 1.0});
    const double f = freq(rng);
    const auto expected = scan(t, "c", f);

    CharTable shuffled = t;
    std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
    if (expected) {
      CHECK(select_min_voltage(t, "c", f) == *expected);
      CHECK(select_min_voltage(shuffled, "c", f) == *expected);
      const double lower = f * 0.8;
      CHECK(select_min_voltage(t, "c", lower).vdd <= expected->vdd);
    } else {
      CHECK_THROWS_AS(select_min_voltage(t, "c", f), InfeasibleError);
      CHECK_THROWS_AS(select_min_voltage(shuffled, "c", f), InfeasibleError);
    }
  }
}

TEST_CASE("assigning voltages to the SoC") {
  const Design d = testing::load_fixture("soc.net", "soc_uniform.intent");
  const CharTable t = xtensa_table();

  SUBCASE("usb pinned, processor and memory at 150 MHz") {
    auto plan = assign_voltages(d, t, {{"xtensa", 150}, {"mem", 150}}, {{"usb", 1.2}});
    CHECK(plan.find("usb")->vdd == 1.2);
    CHECK(plan.find("usb")->pinned);
    CHECK(plan.find("xtensa")->vdd == 0.8);
    CHECK(plan.find("mem")->vdd == 0.8);
    CHECK(plan.baseline_vdd == 1.2);
    CHECK(plan.design.find_island("xtensa")->vdd == 0.8);
    CHECK(d.find_island("xtensa")->vdd == 1.2);
  }
  SUBCASE("all islands pinned needs no table") {
    auto plan = assign_voltages(d, CharTable{}, {}, {{"usb", 1.2}, {"xtensa", 0.9}, {"mem", 1.0}});
    CHECK(plan.find("usb")->vdd == 1.2);
    CHECK(plan.find("xtensa")->vdd == 0.9);
    CHECK(plan.find("mem")->vdd == 1.0);
  }
  SUBCASE("pins win over requirements") {
    auto plan = assign_voltages(d, t, {{"xtensa", 150}, {"mem", 150}, {"usb", 10}}, {{"usb", 1.2}, {"xtensa", 1.0}});
    CHECK(plan.find("xtensa")->vdd == 1.0);
    CHECK(plan.find("xtensa")->point);
  }
  SUBCASE("infeasible islands are all diagnosed") {
    try {
      assign_voltages(d, t, {{"xtensa", 160}, {"mem", 200}}, {{"usb", 1.2}});
      FAIL("expected infeasible");
    } catch (const InfeasibleError& e) {
      const std::string what = e.what();
      CHECK(what.find("xtensa") != std::string::npos);
      CHECK(what.find("mem") != std::string::npos);
      CHECK(e.best_fmax_mhz() == 181.0);
    }
  }
  SUBCASE("missing requirement") {
    CHECK_THROWS_AS(assign_voltages(d, t, {{"xtensa", 150}}, {{"usb", 1.2}}), PreconditionError);
    CHECK_THROWS_AS(assign_voltages(d, t, {{"ghost", 150}}, {}), PreconditionError);
  }
}

TEST_CASE("savings against the single-voltage baseline") {
  const Design d = testing::load_fixture("soc.net", "soc_uniform.intent");
  const CharTable t = xtensa_table();
  const ActivityProfile a = parse_activity(testing::read_fixture("soc.activity"), 150, d);

  auto row_for = [&](double f_xtensa) {
    auto plan = assign_voltages(d, t, {{"xtensa", f_xtensa}, {"mem", 150}}, {{"usb", 1.2}});
    auto report = power_savings_summary(1.2, plan, t, a, {1.0, 150});
    for (const auto& r : report.rows)
      if (r.island == "xtensa") return r;
    FAIL("no xtensa row");
    return SavingsRow{};
  };

  SUBCASE("1.0 V build") {
    auto r = row_for(152);
    CHECK(r.vdd_to == 1.0);
    CHECK(r.theoretical == doctest::Approx(0.3056).epsilon(1e-3));
    CHECK(std::abs(r.actual - 0.17) <= 0.005);
    CHECK(r.actual < r.theoretical);
    CHECK(r.within_theoretical);
    CHECK(*r.area_delta == doctest::Approx(0.170).epsilon(0.002));
  }
  SUBCASE("0.8 V build") {
    auto r = row_for(150);
    CHECK(r.vdd_to == 0.8);
    CHECK(std::abs(r.actual - 0.53) <= 0.005);
    CHECK(r.actual < r.theoretical);
    CHECK(*r.area_delta == doctest::Approx(0.298).epsilon(0.002));
    CHECK(r.planned_dynamic_w < r.baseline_dynamic_w);
    CHECK(r.planned_dynamic_w / r.baseline_dynamic_w == doctest::Approx(1.0 - r.actual).epsilon(1e-9));
  }
  SUBCASE("level shifters priced on the receiving island") {
    auto plan = assign_voltages(d, t, {{"xtensa", 150}, {"mem", 150}}, {{"usb", 1.2}});
    auto report = power_savings_summary(1.2, plan, t, a, {1.0, 150});
    int total = 0;
    for (const auto& r : report.rows) total += r.levelshifters_added;
    CHECK(total == 1);
    for (const auto& r : report.rows)
      if (r.island == "usb") CHECK(r.levelshifters_added == 1);
  }
  SUBCASE("unchanged supply saves nothing") {
    auto plan = assign_voltages(d, t, {}, {{"usb", 1.2}, {"xtensa", 1.2}, {"mem", 1.2}});
    auto report = power_savings_summary(1.2, plan, t, a, {1.0, 150});
    for (const auto& r : report.rows) {
      CHECK(r.actual == 0.0);
      CHECK(r.theoretical == 0.0);
      REQUIRE(r.area_delta);
      CHECK(*r.area_delta == 0.0);
    }
  }
  SUBCASE("missing baseline row") {
    CharTable partial = t;
    std::erase_if(partial.rows, [](const OperatingPoint& p) { return p.island_class == "xtensa" && p.vdd == 1.2; });
    auto plan = assign_voltages(d, partial, {{"xtensa", 150}, {"mem", 150}}, {{"usb", 1.2}}, 1.2);
    CHECK_THROWS_AS(power_savings_summary(1.2, plan, partial, a, {1.0, 150}), PreconditionError);
  }
}

TEST_CASE("actual savings never exceed theoretical when capacitance grows") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Design d;
  d.islands.push_back({"c", 1.2, false, false});
  for (int i = 0; i < 300; ++i) {
    const double v = 0.5 + 0.7 * u(rng);
    const double cf = 1.0 + u(rng);
    CharTable t;
    t.rows = {{"c", 1.2, 100, 1000, 1.0}, {"c", v, 100, 1000, cf}};
    auto plan = assign_voltages(d, t, {}, {{"c", v}}, 1.2);
    auto r = power_savings_summary(1.2, plan, t, ActivityProfile{100, {}}, {1.0, 100}).rows.at(0);
    CHECK(r.actual <= r.theoretical + 1e-12);
    CHECK(r.within_theoretical);
    if (cf > 1.0 && v < 1.2 - 1e-9) CHECK(r.actual < r.theoretical);
  }
}
