#pragma once

// Dynamic and static (gate-bias) power models.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pwr/activity.hpp"
#include "pwr/design.hpp"

namespace pwr {

struct DynamicPowerParams {
  double k = 1.0;
  double f_clk_mhz = 0.0;
};

// Sub-threshold leakage of the per-cell NMOS sleep device:
//   I(v, T) = i0 * 2^((T - 25) / temp_doubling_c) * 10^(v / slope)
struct LeakageModel {
  double i0_per_gate_25c = 0.5e-6;         // A, gate at 0 V
  double slope_mv_per_decade = 124.2;      // two-point fit of 0 V and -0.3 V
  double temp_doubling_c = 10.0;
  double manager_overhead_w = 4.1e-6;      // PIM plus bias generator while any island sleeps
  double bias_v = -0.3;
  double gate_leakage_power_w = 208e-6 / 108000.0;  // per gate, awake, 25 C

  void validate() const;
};

double leakage_current_per_gate(double v_slp, double temp_c, const LeakageModel& model);

// I(0 V) / I(v); independent of i0 and temperature.
double leakage_reduction_factor(double v_slp, const LeakageModel& model);

struct LeakagePoint {
  double v_slp = 0.0;
  double current_a = 0.0;
};

// Least-squares slope of log10(I) against v, returned in mV/decade.
double fit_subthreshold_slope(const std::vector<LeakagePoint>& points);

// Fraction of power removed by scaling the supply from v_from to v_to at
// fixed capacitance, frequency and activity.
double theoretical_reduction(double v_from, double v_to);

struct IslandPower {
  std::string island;
  bool asleep = false;
  double dynamic_w = 0.0;
  double static_active_w = 0.0;  // leakage while powered
  double static_sleep_w = 0.0;   // leakage while gate-biased off

  double total_w() const { return dynamic_w + static_active_w + static_sleep_w; }
};

struct PowerAssumptions {
  double k = 1.0;
  double f_clk_mhz = 0.0;
  double temp_c = 25.0;
  double bias_v = -0.3;
};

struct PowerReport {
  std::vector<IslandPower> islands;
  double manager_w = 0.0;
  PowerAssumptions assumptions;

  double total_dynamic_w() const;
  double total_static_w() const;  // both static columns plus the manager
  double total_w() const { return total_dynamic_w() + total_static_w(); }
};

// P_net = k * C_net * V_driver^2 * f * SA_net, summed per driving island.
// A cell's cap_ff is split evenly over the nets it drives.
PowerReport dynamic_power(const Design& design, const ActivityProfile& activity, const DynamicPowerParams& params);

// Awake islands leak gates * gate_leakage_power * temperature factor.
// Sleeping islands leak that divided by the bias reduction factor, and the
// manager overhead is charged once if any island sleeps and a pim exists.
PowerReport static_power(const Design& design, const std::set<std::string, std::less<>>& sleeping,
                         double temp_c, const LeakageModel& model);

// Column-wise merge of a dynamic and a static report over the same design.
PowerReport combine(const PowerReport& dynamic, const PowerReport& stat);

enum class DeviceClass { Nand2, Sram };
enum class CalibrationSource { Model, Silicon };

std::string_view to_string(DeviceClass c);
std::string_view to_string(CalibrationSource s);
std::optional<DeviceClass> device_class_from_string(std::string_view text);
std::optional<CalibrationSource> calibration_source_from_string(std::string_view text);

struct CalibrationEntry {
  DeviceClass device = DeviceClass::Nand2;
  int temp_c = 25;
  CalibrationSource source = CalibrationSource::Model;
  double factor = 1.0;

  friend bool operator==(const CalibrationEntry&, const CalibrationEntry&) = default;
};

// Measured and modeled leakage reduction factors from the gate-bias test chip.
class CalibrationTable {
 public:
  static CalibrationTable builtin();

  // Entries from `calib` lines override or extend this table.
  void merge(std::string_view characterization_text);

  double factor(DeviceClass device, int temp_c, CalibrationSource source) const;
  const std::vector<CalibrationEntry>& entries() const { return entries_; }

 private:
  void set(const CalibrationEntry& entry);
  std::vector<CalibrationEntry> entries_;
};

double calibrated_reduction_factor(DeviceClass device, int temp_c, CalibrationSource source,
                                   const CalibrationTable& table = CalibrationTable::builtin());

enum class Severity { Minor, Relevant, Significant, Major, MajorPlus };

std::string_view to_string(Severity s);

struct LeakageMechanism {
  std::string_view id;
  std::string_view name;
  std::array<Severity, 3> severity;  // 180, 130, 90 nm
};

inline constexpr std::array<int, 3> kProcessNodesNm = {180, 130, 90};

const std::array<LeakageMechanism, 5>& leakage_mechanisms();

}  // namespace pwr
