#pragma once

// Minimum-voltage selection per island and savings against a single-voltage
// baseline.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwr/activity.hpp"
#include "pwr/characterization.hpp"
#include "pwr/design.hpp"
#include "pwr/power.hpp"

namespace pwr {

// Lowest-vdd row of the class whose fmax meets f_req; equal vdd prefers the
// smaller area. Throws InfeasibleError carrying the best fmax on offer.
OperatingPoint select_min_voltage(const CharTable& table, std::string_view island_class, double f_req_mhz);

struct IslandAssignment {
  std::string island;
  std::optional<double> f_req_mhz;
  bool pinned = false;
  double vdd = 0.0;
  std::optional<OperatingPoint> point;  // absent for uncharacterized pins
};

struct VoltagePlan {
  std::vector<IslandAssignment> islands;
  double baseline_vdd = 0.0;
  Design design;  // input design with the planned island voltages

  const IslandAssignment* find(std::string_view island) const;
};

using IslandValues = std::map<std::string, double, std::less<>>;

// Islands are looked up in the table by their own name. Pinned islands keep
// their voltage; every other island needs a frequency requirement. The
// baseline defaults to the highest vdd in the table.
VoltagePlan assign_voltages(const Design& design, const CharTable& table, const IslandValues& f_req_mhz,
                            const IslandValues& pinned_vdd, std::optional<double> baseline_vdd = std::nullopt);

struct SavingsRow {
  std::string island;
  double vdd_from = 0.0;
  double vdd_to = 0.0;
  double theoretical = 0.0;  // fraction
  double actual = 0.0;       // fraction, includes the capacitance change
  std::optional<double> area_delta;  // fraction; absent when uncharacterized
  int levelshifters_added = 0;
  int iso_added = 0;
  double baseline_dynamic_w = 0.0;
  double planned_dynamic_w = 0.0;
  bool within_theoretical = true;  // actual <= theoretical whenever capacitance did not shrink
};

struct SavingsReport {
  double baseline_vdd = 0.0;
  std::vector<SavingsRow> rows;
};

SavingsReport power_savings_summary(double baseline_vdd, const VoltagePlan& plan, const CharTable& table,
                                    const ActivityProfile& activity, const DynamicPowerParams& params);

}  // namespace pwr
