#include "pwr/voltage.hpp"

#include <algorithm>
#include <cmath>

#include "pwr/crossing.hpp"
#include "pwr/errors.hpp"
#include "pwr/text_format.hpp"

namespace pwr {

namespace {
bool same_voltage(double a, double b) { return std::abs(a - b) <= 1e-9; }
}  // namespace

OperatingPoint select_min_voltage(const CharTable& table, std::string_view island_class, double f_req_mhz) {
  auto rows = table.rows_for(island_class);
  if (rows.empty())
    throw PreconditionError("no characterization rows for class " + std::string(island_class));
  const OperatingPoint* best = nullptr;
  double best_fmax = 0.0;
  for (const OperatingPoint* r : rows) {
    best_fmax = std::max(best_fmax, r->fmax_mhz);
    if (r->fmax_mhz < f_req_mhz) continue;
    if (!best || r->vdd < best->vdd || (same_voltage(r->vdd, best->vdd) && r->area_um2 < best->area_um2)) best = r;
  }
  if (!best)
    throw InfeasibleError("class " + std::string(island_class) + " cannot reach " + text::format_number(f_req_mhz) +
                              " MHz (best fmax " + text::format_number(best_fmax) + " MHz)",
                          best_fmax);
  return *best;
}

const IslandAssignment* VoltagePlan::find(std::string_view island) const {
  for (const auto& a : islands)
    if (a.island == island) return &a;
  return nullptr;
}

VoltagePlan assign_voltages(const Design& design, const CharTable& table, const IslandValues& f_req_mhz,
                            const IslandValues& pinned_vdd, std::optional<double> baseline_vdd) {
  for (const auto& [name, v] : pinned_vdd) {
    if (!design.find_island(name)) throw PreconditionError("pinned island " + name + " does not exist");
    if (!(v > 0.0)) throw PreconditionError("pinned voltage for " + name + " must be positive");
  }
  for (const auto& [name, f] : f_req_mhz)
    if (!design.find_island(name)) throw PreconditionError("frequency requirement for unknown island " + name);

  VoltagePlan plan;
  plan.design = design;
  std::string diagnosis;
  double best_fmax = 0.0;
  for (const auto& island : design.islands) {
    IslandAssignment a;
    a.island = island.name;
    if (auto it = f_req_mhz.find(island.name); it != f_req_mhz.end()) a.f_req_mhz = it->second;
    if (auto it = pinned_vdd.find(island.name); it != pinned_vdd.end()) {
      a.pinned = true;
      a.vdd = it->second;
      if (const OperatingPoint* p = table.find(island.name, a.vdd)) a.point = *p;
    } else if (a.f_req_mhz) {
      try {
        a.point = select_min_voltage(table, island.name, *a.f_req_mhz);
        a.vdd = a.point->vdd;
      } catch (const InfeasibleError& e) {
        diagnosis += (diagnosis.empty() ? "" : "; ") + std::string(e.what());
        best_fmax = std::max(best_fmax, e.best_fmax_mhz());
        continue;
      }
    } else {
      throw PreconditionError("island " + island.name + " has neither a frequency requirement nor a pinned vdd");
    }
    plan.design.find_island(island.name)->vdd = a.vdd;
    plan.islands.push_back(std::move(a));
  }
  if (!diagnosis.empty()) throw InfeasibleError(diagnosis, best_fmax);

  if (baseline_vdd) {
    plan.baseline_vdd = *baseline_vdd;
  } else {
    for (const auto& r : table.rows) plan.baseline_vdd = std::max(plan.baseline_vdd, r.vdd);
    for (const auto& a : plan.islands) plan.baseline_vdd = std::max(plan.baseline_vdd, a.vdd);
  }
  return plan;
}

SavingsReport power_savings_summary(double baseline_vdd, const VoltagePlan& plan, const CharTable& table,
                                    const ActivityProfile& activity, const DynamicPowerParams& params) {
  if (!(baseline_vdd > 0.0)) throw PreconditionError("baseline voltage must be positive");
  for (const auto& island : plan.design.islands)
    if (!plan.find(island.name)) throw PreconditionError("plan does not cover island " + island.name);

  Design baseline = plan.design;
  for (auto& island : baseline.islands) island.vdd = baseline_vdd;
  const PowerReport base_power = dynamic_power(baseline, activity, params);
  const PowerReport plan_power = dynamic_power(plan.design, activity, params);

  std::map<std::string, std::pair<int, int>, std::less<>> added;
  for (const auto& issue : analyze_crossings(plan.design)) {
    auto& counts = added[issue.receiver_island];
    (issue.kind == CrossingKind::NeedsLevelShifter ? counts.first : counts.second)++;
  }

  SavingsReport report;
  report.baseline_vdd = baseline_vdd;
  for (std::size_t i = 0; i < plan.design.islands.size(); ++i) {
    const Island& island = plan.design.islands[i];
    const IslandAssignment& a = *plan.find(island.name);
    SavingsRow row;
    row.island = island.name;
    row.vdd_from = baseline_vdd;
    row.vdd_to = a.vdd;
    const double ratio = a.vdd / baseline_vdd;
    row.theoretical = 1.0 - ratio * ratio;

    double cap_ratio = 1.0;
    if (a.point) {
      if (same_voltage(a.vdd, baseline_vdd)) {
        row.area_delta = 0.0;
      } else {
        const OperatingPoint* base = table.find(a.point->island_class, baseline_vdd);
        if (!base)
          throw PreconditionError("missing baseline row for " + a.point->island_class + " at " +
                                  text::format_number(baseline_vdd) + " V");
        cap_ratio = a.point->cap_factor / base->cap_factor;
        row.area_delta = a.point->area_um2 / base->area_um2 - 1.0;
      }
    } else if (same_voltage(a.vdd, baseline_vdd)) {
      row.area_delta = 0.0;
    }
    row.actual = 1.0 - cap_ratio * ratio * ratio;
    row.within_theoretical = cap_ratio < 1.0 || row.actual <= row.theoretical + 1e-12;

    if (auto it = added.find(island.name); it != added.end()) {
      row.levelshifters_added = it->second.first;
      row.iso_added = it->second.second;
    }
    row.baseline_dynamic_w = base_power.islands[i].dynamic_w;
    row.planned_dynamic_w = plan_power.islands[i].dynamic_w * cap_ratio;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace pwr
