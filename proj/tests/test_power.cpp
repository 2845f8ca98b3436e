#include <doctest.h>

#include <cmath>
#include <random>

#include "pwr/crossing.hpp"
#include "pwr/errors.hpp"
#include "pwr/power.hpp"
#include "support/fixtures.hpp"

using namespace pwr;

namespace {

Design one_net_design(double vdd, double cap_ff) {
  Design d;
  d.islands.push_back({"a", vdd, false, false});
  d.cells.push_back({"drv", CellKind::Std, "a", cap_ff, 1, false});
  d.cells.push_back({"rcv", CellKind::Std, "a", 0.0, 1, false});
  d.nets.push_back({"n", {"drv", "Y"}, {{"rcv", "A"}}});
  return d;
}

ActivityProfile activity_for(const Design& d, double sa, double f_mhz) {
  ActivityProfile a;
  a.f_clk_mhz = f_mhz;
  for (const auto& n : d.nets) a.nets[n.name] = {0, 1.0, sa};
  return a;
}

}  // namespace

TEST_CASE("dynamic power of a single net") {
  Design d = one_net_design(1.2, 10.0);
  auto r = dynamic_power(d, activity_for(d, 0.2, 150.0), {1.0, 150.0});
  // 10 fF * (1.2 V)^2 * 150 MHz * 0.2
  const double expected = 1e-14 * 1.44 * 1.5e8 * 0.2;
  CHECK(r.total_dynamic_w() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.432e-6).epsilon(1e-12));
  CHECK(r.islands[0].dynamic_w == r.total_dynamic_w());
}

TEST_CASE("dynamic power with no activity is zero") {
  Design d = testing::load_fixture("soc.net", "soc.intent");
  auto r = dynamic_power(d, ActivityProfile{150.0, {}}, {1.0, 150.0});
  CHECK(r.total_dynamic_w() == 0.0);
}

TEST_CASE("dynamic power scales with the square of the supply") {
  Design lo = one_net_design(1.0, 10.0);
  Design hi = one_net_design(1.2, 10.0);
  const double p_lo = dynamic_power(lo, activity_for(lo, 0.2, 150), {1.0, 150}).total_dynamic_w();
  const double p_hi = dynamic_power(hi, activity_for(hi, 0.2, 150), {1.0, 150}).total_dynamic_w();
  CHECK(p_lo / p_hi == doctest::Approx((1.0 / 1.2) * (1.0 / 1.2)).epsilon(1e-12));
  CHECK(p_lo / p_hi == doctest::Approx(0.6944).epsilon(1e-4));
}

TEST_CASE("dynamic power parameter sweeps") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double v = 0.5 + u(rng) * 0.5;
    const double c = u(rng) * 50;
    const double sa = u(rng);
    const double f = 100 * u(rng);
    const double k = u(rng) / 2.0;
    auto power = [&](double vv, double cc, double ss, double ff) {
      Design d = one_net_design(vv, cc);
      return dynamic_power(d, activity_for(d, ss, ff), {k, ff}).total_dynamic_w();
    };
    const double base = power(v, c, sa / 2, f);
    CHECK(power(v, c, sa, f) == doctest::Approx(2 * base).epsilon(1e-12));
    CHECK(power(v, 3 * c, sa / 2, f) == doctest::Approx(3 * base).epsilon(1e-12));
    CHECK(power(v, c, sa / 2, 1.5 * f) == doctest::Approx(1.5 * base).epsilon(1e-12));
    CHECK(power(2 * v, c, sa / 2, f) == doctest::Approx(4 * base).epsilon(1e-12));
  }
}

TEST_CASE("capacitance of a cell is shared by the nets it drives") {
  Design d = one_net_design(1.0, 10.0);
  d.nets.push_back({"m", {"drv", "Z"}, {{"rcv", "B"}}});
  ActivityProfile a = activity_for(d, 0.0, 100.0);
  a.nets["n"].sa = 1.0;
  const double p = dynamic_power(d, a, {1.0, 100.0}).total_dynamic_w();
  CHECK(p == doctest::Approx(5e-15 * 1.0 * 1e8).epsilon(1e-12));
}

TEST_CASE("dynamic power preconditions") {
  Design d = one_net_design(1.0, 1.0);
  CHECK_THROWS_AS(dynamic_power(d, activity_for(d, 0.1, 100), {1.5, 100}), PreconditionError);
  CHECK_THROWS_AS(dynamic_power(d, activity_for(d, 0.1, 100), {1.0, 0}), PreconditionError);
  ActivityProfile stray{100, {{"ghost", {1, 1, 0.1}}}};
  CHECK_THROWS_AS(dynamic_power(d, stray, {1.0, 100}), PreconditionError);
}

TEST_CASE("theoretical reduction from voltage scaling") {
  CHECK(theoretical_reduction(1.2, 1.0) == doctest::Approx(0.305).epsilon(0.001 / 0.305));
  CHECK(theoretical_reduction(1.2, 0.8) == doctest::Approx(0.555).epsilon(0.001 / 0.555));
  CHECK(theoretical_reduction(0.9, 0.9) == 0.0);
  CHECK_THROWS_AS(theoretical_reduction(1.0, 1.2), PreconditionError);
  CHECK_THROWS_AS(theoretical_reduction(1.0, 0.0), PreconditionError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng);
    if (b > a) std::swap(a, b);
    CHECK(theoretical_reduction(a, b) + (b / a) * (b / a) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("gate-bias leakage model") {
  const LeakageModel m;
  CHECK(leakage_current_per_gate(0.0, 25.0, m) == doctest::Approx(0.5e-6).epsilon(1e-12));

  const double at_bias = leakage_current_per_gate(-0.3, 25.0, m);
  CHECK(at_bias == doctest::Approx(1.92e-9).epsilon(0.01));
  CHECK(0.5e-6 / at_bias == doctest::Approx(260.0).epsilon(0.01));

  // Half the bias is half the decades.
  const double mid = leakage_current_per_gate(-0.15, 25.0, m);
  CHECK(mid == doctest::Approx(0.5e-6 / std::sqrt(0.5e-6 / at_bias)).epsilon(1e-9));
  CHECK(mid == doctest::Approx(31e-9).epsilon(0.01));

  CHECK(leakage_current_per_gate(0.0, 35.0, m) == doctest::Approx(1.0e-6).epsilon(1e-12));
  CHECK_THROWS_AS(leakage_current_per_gate(0.1, 25.0, m), PreconditionError);
}

TEST_CASE("leakage is monotone and its reduction factor is separable") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> volts(-0.6, 0.0);
  std::uniform_real_distribution<double> temps(-40.0, 150.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int i = 0; i < 300; ++i) {
    LeakageModel m;
    m.i0_per_gate_25c *= scale(rng);
    const double t = temps(rng);
    const double v = volts(rng);
    const double lower = v - 0.01;
    CHECK(leakage_current_per_gate(lower, t, m) < leakage_current_per_gate(v, t, m));
    CHECK(leakage_current_per_gate(v, t + 1.0, m) > leakage_current_per_gate(v, t, m));
    const double ratio = leakage_current_per_gate(0.0, t, m) / leakage_current_per_gate(v, t, m);
    CHECK(ratio == doctest::Approx(leakage_reduction_factor(v, LeakageModel{})).epsilon(1e-9));
  }
}

TEST_CASE("sub-threshold slope fit") {
  SUBCASE("two anchor points") {
    const double s = fit_subthreshold_slope({{0.0, 0.5e-6}, {-0.3, 0.5e-6 / 260.0}});
    CHECK(s == doctest::Approx(300.0 / std::log10(260.0)).epsilon(1e-12));
    CHECK(std::abs(s - 124.2) <= 0.1);
  }
  SUBCASE("one decade over 100 mV") {
    CHECK(fit_subthreshold_slope({{-0.1, 1e-9}, {0.0, 1e-8}}) == doctest::Approx(100.0).epsilon(1e-12));
  }
  SUBCASE("points sampled from the model recover its slope") {
    LeakageModel m;
    m.slope_mv_per_decade = 87.5;
    std::vector<LeakagePoint> pts;
    for (int i = 0; i <= 10; ++i) pts.push_back({-0.04 * i, leakage_current_per_gate(-0.04 * i, 60.0, m)});
    CHECK(fit_subthreshold_slope(pts) == doctest::Approx(87.5).epsilon(1e-9));
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(fit_subthreshold_slope({{0.0, 1e-6}}), PreconditionError);
    CHECK_THROWS_AS(fit_subthreshold_slope({{0.0, 1e-6}, {0.0, 2e-6}}), PreconditionError);
    CHECK_THROWS_AS(fit_subthreshold_slope({{0.0, 1e-6}, {-0.1, 0.0}}), PreconditionError);
    CHECK_THROWS_AS(fit_subthreshold_slope({{0.0, 1e-9}, {-0.1, 1e-6}}), PreconditionError);
  }
}

TEST_CASE("static power of the 108k-gate block") {
  Design d = testing::load_fixture("static.net", "static.intent");
  const LeakageModel m;

  auto awake = static_power(d, {}, 25.0, m);
  CHECK(awake.total_static_w() == doctest::Approx(208e-6).epsilon(1e-9));
  CHECK(awake.manager_w == 0.0);

  auto asleep = static_power(d, {"logic"}, 25.0, m);
  const double expected = 208e-6 / leakage_reduction_factor(-0.3, m) + 4.1e-6;
  CHECK(asleep.total_static_w() == doctest::Approx(expected).epsilon(1e-9));
  CHECK(asleep.total_static_w() == doctest::Approx(4.9e-6).epsilon(0.02));
  CHECK(1.0 - asleep.total_static_w() / awake.total_static_w() == doctest::Approx(0.976).epsilon(0.002));
  CHECK(asleep.islands[0].asleep);
  CHECK(asleep.islands[0].static_active_w == 0.0);
}

TEST_CASE("static power edge cases") {
  const LeakageModel m;
  SUBCASE("nothing to leak") {
    Design d;
    d.islands.push_back({"a", 1.0, true, false});
    CHECK(static_power(d, {}, 25.0, m).total_static_w() == 0.0);
  }
  SUBCASE("sleeping a non-switchable island") {
    Design d = testing::load_fixture("static.net", "static.intent");
    CHECK_THROWS_AS(static_power(d, {"pm"}, 25.0, m), PreconditionError);
    CHECK_THROWS_AS(static_power(d, {"nope"}, 25.0, m), PreconditionError);
  }
  SUBCASE("sleeping an island without sleep pins") {
    Design d = testing::load_fixture("gated.net", "gated.intent");
    CHECK_THROWS_AS(static_power(d, {"logic"}, 25.0, m), PreconditionError);
    Design fixed = insert_sleep_pins(apply_power_fixes(d, analyze_crossings(d)), "logic");
    CHECK_NOTHROW(static_power(fixed, {"logic"}, 25.0, m));
  }
  SUBCASE("temperature doubles leakage every 10 C") {
    Design d = testing::load_fixture("static.net", "static.intent");
    CHECK(static_power(d, {}, 45.0, m).total_static_w() == doctest::Approx(4 * 208e-6).epsilon(1e-9));
  }
}

TEST_CASE("test-chip calibration factors") {
  using enum DeviceClass;
  using enum CalibrationSource;
  CHECK(calibrated_reduction_factor(Nand2, 25, Model) == 33.9);
  CHECK(calibrated_reduction_factor(Nand2, 25, Silicon) == 78.6);
  CHECK(calibrated_reduction_factor(Nand2, 125, Model) == 197.0);
  CHECK(calibrated_reduction_factor(Nand2, 125, Silicon) == 326.0);
  CHECK(calibrated_reduction_factor(Sram, 125, Model) == 8.1);
  CHECK(calibrated_reduction_factor(Sram, 125, Silicon) == 10.0);
  CHECK(719e-6 / calibrated_reduction_factor(Sram, 125, Silicon) == doctest::Approx(71.9e-6));
  CHECK_THROWS_AS(calibrated_reduction_factor(Sram, 25, Model), PreconditionError);

  for (const auto& e : CalibrationTable::builtin().entries()) CHECK(e.factor > 1.0);

  auto t = CalibrationTable::builtin();
  t.merge("op x vdd=1 fmax_mhz=1 area_um2=1 cap_factor=1\ncalib sram temp=25 source=model factor=5.5\n"
          "calib nand2 temp=25 source=silicon factor=80\n");
  CHECK(t.factor(Sram, 25, Model) == 5.5);
  CHECK(t.factor(Nand2, 25, Silicon) == 80.0);
  CHECK_THROWS_AS(t.merge("calib nand2 temp=25 source=model factor=0.5\n"), ParseError);
  CHECK_THROWS_AS(t.merge("calib nor3 temp=25 source=model factor=2\n"), ParseError);
}

TEST_CASE("leakage mechanism taxonomy") {
  const auto& table = leakage_mechanisms();
  REQUIRE(table.size() == 5);
  using enum Severity;
  CHECK(table[0].id == "I1");
  CHECK(table[0].severity == std::array{Minor, Minor, Minor});
  CHECK(table[1].severity == std::array{Minor, Major, MajorPlus});
  CHECK(table[2].severity == std::array{Minor, Relevant, Significant});
  CHECK(table[3].severity == std::array{Minor, Minor, Minor});
  CHECK(table[4].severity == std::array{Minor, Minor, Minor});
}
