#include "pwr/power.hpp"

#include <cmath>
#include <map>

#include "pwr/crossing.hpp"
#include "pwr/errors.hpp"
#include "pwr/text_format.hpp"

namespace pwr {

void LeakageModel::validate() const {
  if (!(i0_per_gate_25c > 0.0)) throw PreconditionError("i0_per_gate_25c must be positive");
  if (!(slope_mv_per_decade > 0.0)) throw PreconditionError("slope_s must be positive");
  if (!(temp_doubling_c > 0.0)) throw PreconditionError("temp_doubling_c must be positive");
  if (!(bias_v <= 0.0)) throw PreconditionError("bias_v must not be positive");
  if (!(manager_overhead_w >= 0.0)) throw PreconditionError("manager_overhead_w must be non-negative");
  if (!(gate_leakage_power_w >= 0.0)) throw PreconditionError("gate_leakage_power_w must be non-negative");
}

namespace {

double temperature_factor(double temp_c, const LeakageModel& m) {
  return std::exp2((temp_c - 25.0) / m.temp_doubling_c);
}

}  // namespace

double leakage_current_per_gate(double v_slp, double temp_c, const LeakageModel& m) {
  if (v_slp > 0.0) throw PreconditionError("sleep gate voltage must not be positive");
  m.validate();
  return m.i0_per_gate_25c * temperature_factor(temp_c, m) * std::pow(10.0, v_slp / (m.slope_mv_per_decade * 1e-3));
}

double leakage_reduction_factor(double v_slp, const LeakageModel& m) {
  if (v_slp > 0.0) throw PreconditionError("sleep gate voltage must not be positive");
  return std::pow(10.0, -v_slp / (m.slope_mv_per_decade * 1e-3));
}

double fit_subthreshold_slope(const std::vector<LeakagePoint>& points) {
  if (points.size() < 2) throw PreconditionError("slope fit needs at least two points");
  double mean_v = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    if (!(p.current_a > 0.0)) throw PreconditionError("slope fit needs positive currents");
    mean_v += p.v_slp;
    mean_y += std::log10(p.current_a);
  }
  mean_v /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dv = p.v_slp - mean_v;
    sxx += dv * dv;
    sxy += dv * (std::log10(p.current_a) - mean_y);
  }
  if (sxx <= 0.0) throw PreconditionError("slope fit needs distinct voltages");
  const double decades_per_volt = sxy / sxx;
  if (!(decades_per_volt > 0.0)) throw PreconditionError("leakage does not increase with gate voltage");
  return 1000.0 / decades_per_volt;
}

double theoretical_reduction(double v_from, double v_to) {
  if (!(v_to > 0.0)) throw PreconditionError("target voltage must be positive");
  if (v_to > v_from) throw PreconditionError("target voltage exceeds source voltage");
  const double ratio = v_to / v_from;
  return 1.0 - ratio * ratio;
}

double PowerReport::total_dynamic_w() const {
  double sum = 0.0;
  for (const auto& i : islands) sum += i.dynamic_w;
  return sum;
}

double PowerReport::total_static_w() const {
  double sum = manager_w;
  for (const auto& i : islands) sum += i.static_active_w + i.static_sleep_w;
  return sum;
}

PowerReport dynamic_power(const Design& d, const ActivityProfile& activity, const DynamicPowerParams& p) {
  if (!(p.k >= 0.0 && p.k <= 1.0)) throw PreconditionError("k must lie in [0, 1]");
  if (!(p.f_clk_mhz > 0.0)) throw PreconditionError("clock frequency must be positive");
  if (auto errors = validate_design(d); !errors.empty())
    throw PreconditionError("design is not valid: " + errors.front().message());
  for (const auto& [name, rec] : activity.nets)
    if (!d.find_net(name)) throw PreconditionError("activity references unknown net " + name);

  std::map<std::string, int, std::less<>> nets_driven;
  for (const auto& n : d.nets)
    if (!n.driver.is_port()) ++nets_driven[n.driver.object];

  PowerReport report;
  report.assumptions.k = p.k;
  report.assumptions.f_clk_mhz = p.f_clk_mhz;
  std::map<std::string, std::size_t, std::less<>> index;
  for (const auto& island : d.islands) {
    index[island.name] = report.islands.size();
    report.islands.push_back({island.name});
  }

  const double f_hz = p.f_clk_mhz * 1e6;
  for (const auto& n : d.nets) {
    if (n.driver.is_port()) continue;
    const CellInstance* cell = d.find_cell(n.driver.object);
    const Island* island = d.find_island(cell->island);
    const double c_farad = cell->cap_ff * 1e-15 / nets_driven[cell->name];
    const double v = island->vdd;
    report.islands[index[island->name]].dynamic_w += p.k * c_farad * v * v * f_hz * activity.sa(n.name);
  }
  return report;
}

PowerReport static_power(const Design& d, const std::set<std::string, std::less<>>& sleeping, double temp_c,
                         const LeakageModel& m) {
  m.validate();
  if (auto errors = validate_design(d); !errors.empty())
    throw PreconditionError("design is not valid: " + errors.front().message());
  for (const auto& name : sleeping) {
    const Island* island = d.find_island(name);
    if (!island) throw PreconditionError("unknown island " + name);
    if (!island->switchable) throw PreconditionError("island not switchable: " + name);
  }
  if (!sleeping.empty()) {
    for (const auto& issue : analyze_crossings(d))
      if (sleeping.count(issue.driver_island))
        throw PreconditionError("sleeping island " + issue.driver_island + " fails power intent on net " + issue.net);
    for (const auto& cell : d.cells)
      if (sleeping.count(cell.island) && takes_sleep_pin(cell.kind) && !cell.has_sleep_pin)
        throw PreconditionError("sleeping island " + cell.island + " has cell " + cell.name + " without a sleep pin");
  }

  PowerReport report;
  report.assumptions.temp_c = temp_c;
  report.assumptions.bias_v = m.bias_v;
  std::map<std::string, std::size_t, std::less<>> index;
  for (const auto& island : d.islands) {
    index[island.name] = report.islands.size();
    report.islands.push_back({island.name, sleeping.count(island.name) > 0});
  }

  const double per_gate = m.gate_leakage_power_w * temperature_factor(temp_c, m);
  const double reduction = leakage_reduction_factor(m.bias_v, m);
  for (const auto& cell : d.cells) {
    if (cell.kind == CellKind::Pim) continue;
    auto& row = report.islands[index[cell.island]];
    const double awake = static_cast<double>(cell.gate_count) * per_gate;
    if (!row.asleep)
      row.static_active_w += awake;
    else
      row.static_sleep_w += cell.has_sleep_pin ? awake / reduction : awake;
  }
  if (!sleeping.empty() && d.power_manager()) report.manager_w = m.manager_overhead_w;
  return report;
}

PowerReport combine(const PowerReport& dyn, const PowerReport& stat) {
  PowerReport out = stat;
  out.assumptions.k = dyn.assumptions.k;
  out.assumptions.f_clk_mhz = dyn.assumptions.f_clk_mhz;
  for (const auto& row : dyn.islands)
    for (auto& o : out.islands)
      if (o.island == row.island) o.dynamic_w = row.dynamic_w;
  return out;
}

std::string_view to_string(DeviceClass c) { return c == DeviceClass::Nand2 ? "nand2" : "sram"; }
std::string_view to_string(CalibrationSource s) { return s == CalibrationSource::Model ? "model" : "silicon"; }

std::optional<DeviceClass> device_class_from_string(std::string_view text) {
  if (text == "nand2") return DeviceClass::Nand2;
  if (text == "sram") return DeviceClass::Sram;
  return std::nullopt;
}

std::optional<CalibrationSource> calibration_source_from_string(std::string_view text) {
  if (text == "model") return CalibrationSource::Model;
  if (text == "silicon") return CalibrationSource::Silicon;
  return std::nullopt;
}

CalibrationTable CalibrationTable::builtin() {
  using enum DeviceClass;
  using enum CalibrationSource;
  CalibrationTable t;
  t.entries_ = {
      {Nand2, 25, Model, 33.9}, {Nand2, 25, Silicon, 78.6}, {Nand2, 125, Model, 197.0},
      {Nand2, 125, Silicon, 326.0}, {Sram, 125, Model, 8.1}, {Sram, 125, Silicon, 10.0},
  };
  return t;
}

void CalibrationTable::set(const CalibrationEntry& entry) {
  for (auto& e : entries_) {
    if (e.device == entry.device && e.temp_c == entry.temp_c && e.source == entry.source) {
      e.factor = entry.factor;
      return;
    }
  }
  entries_.push_back(entry);
}

void CalibrationTable::merge(std::string_view characterization_text) {
  std::vector<CalibrationEntry> parsed;
  for (const auto& line : text::tokenize(characterization_text)) {
    const auto& kw = line.tokens[0];
    if (kw.text == "op") continue;
    if (kw.text != "calib")
      throw ParseError("unexpected statement in characterization file", line.number, kw.column, kw.text);
    if (line.tokens.size() < 2) throw ParseError("missing device class", line.number, kw.column);
    const auto& cls = line.tokens[1];
    auto device = device_class_from_string(cls.text);
    if (!device) throw ParseError("unknown device class", line.number, cls.column, cls.text);
    text::Attributes attrs(line, 2);
    const auto temp = attrs.integer("temp");
    const auto& src_tok = attrs.require("source");
    auto source = calibration_source_from_string(src_tok.text);
    if (!source) throw ParseError("source must be model or silicon", line.number, src_tok.column, src_tok.text);
    const double factor = attrs.number("factor");
    attrs.finish();
    if (!(factor > 1.0)) throw ParseError("calibration factor must exceed 1", line.number);
    CalibrationEntry entry{*device, static_cast<int>(temp), *source, factor};
    for (const auto& p : parsed)
      if (p.device == entry.device && p.temp_c == entry.temp_c && p.source == entry.source)
        throw ParseError("duplicate calibration entry", line.number, cls.column, cls.text);
    parsed.push_back(entry);
  }
  for (const auto& e : parsed) set(e);
}

double CalibrationTable::factor(DeviceClass device, int temp_c, CalibrationSource source) const {
  for (const auto& e : entries_)
    if (e.device == device && e.temp_c == temp_c && e.source == source) return e.factor;
  throw PreconditionError("no calibration entry for " + std::string(to_string(device)) + " at " +
                          std::to_string(temp_c) + " C (" + std::string(to_string(source)) + ")");
}

double calibrated_reduction_factor(DeviceClass device, int temp_c, CalibrationSource source,
                                   const CalibrationTable& table) {
  return table.factor(device, temp_c, source);
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Minor: return "minor";
    case Severity::Relevant: return "relevant";
    case Severity::Significant: return "significant";
    case Severity::Major: return "major";
    case Severity::MajorPlus: return "major+";
  }
  return "minor";
}

const std::array<LeakageMechanism, 5>& leakage_mechanisms() {
  using enum Severity;
  static const std::array<LeakageMechanism, 5> table = {{
      {"I1", "reverse bias junction", {Minor, Minor, Minor}},
      {"I2", "sub-threshold", {Minor, Major, MajorPlus}},
      {"I3", "gate oxide tunneling", {Minor, Relevant, Significant}},
      {"I4", "hot-carrier injection", {Minor, Minor, Minor}},
      {"I5", "off state leakage", {Minor, Minor, Minor}},
  }};
  return table;
}

}  // namespace pwr
