#include "pwr/pwr.h"

#include <set>
#include <string>

#include "pwr/activity.hpp"
#include "pwr/characterization.hpp"
#include "pwr/crossing.hpp"
#include "pwr/design.hpp"
#include "pwr/errors.hpp"
#include "pwr/pim.hpp"
#include "pwr/power.hpp"
#include "pwr/report.hpp"
#include "pwr/voltage.hpp"

struct pwr_design {
  pwr::Design value;
};

struct pwr_buffer {
  std::string text;
};

struct pwr_config {
  pwr::ToolConfig value;
};

namespace {

thread_local std::string last_error;

pwr_status fail(pwr_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename F>
pwr_status guarded(F&& body) {
  try {
    body();
    return PWR_OK;
  } catch (const pwr::ParseError& e) {
    return fail(PWR_ERR_PARSE, e.what());
  } catch (const pwr::InfeasibleError& e) {
    return fail(PWR_ERR_INFEASIBLE, e.what());
  } catch (const pwr::PreconditionError& e) {
    return fail(PWR_ERR_PRECONDITION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PWR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PWR_ERR_INTERNAL, e.what());
  }
}

std::optional<pwr::Format> to_format(pwr_format f) {
  switch (f) {
    case PWR_FORMAT_TEXT: return pwr::Format::Text;
    case PWR_FORMAT_JSON: return pwr::Format::Json;
    case PWR_FORMAT_CSV: return pwr::Format::Csv;
  }
  return std::nullopt;
}

pwr_buffer* make_buffer(std::string text) { return new pwr_buffer{std::move(text)}; }

const pwr::ToolConfig& config_or_default(const pwr_config* c) {
  static const pwr::ToolConfig defaults{};
  return c ? c->value : defaults;
}

}  // namespace

extern "C" {

const char* pwr_version(void) { return pwr::kToolVersion.data(); }

const char* pwr_last_error(void) { return last_error.c_str(); }

const char* pwr_status_name(pwr_status status) {
  switch (status) {
    case PWR_OK: return "ok";
    case PWR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PWR_ERR_PARSE: return "parse error";
    case PWR_ERR_PRECONDITION: return "precondition failed";
    case PWR_ERR_INFEASIBLE: return "infeasible";
    case PWR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pwr_buffer_data(const pwr_buffer* buffer) { return buffer ? buffer->text.c_str() : nullptr; }
size_t pwr_buffer_size(const pwr_buffer* buffer) { return buffer ? buffer->text.size() : 0; }
void pwr_buffer_free(pwr_buffer* buffer) { delete buffer; }

pwr_status pwr_config_parse(const char* text, pwr_config** out) {
  if (!out) return fail(PWR_ERR_INVALID_ARGUMENT, "null output handle");
  return guarded([&] { *out = new pwr_config{text ? pwr::parse_config(text) : pwr::ToolConfig{}}; });
}

void pwr_config_free(pwr_config* config) { delete config; }

pwr_status pwr_design_parse(const char* netlist_text, const char* intent_text, pwr_design** out) {
  if (!netlist_text || !intent_text || !out) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new pwr_design{pwr::parse_design(netlist_text, intent_text)}; });
}

void pwr_design_free(pwr_design* design) { delete design; }

pwr_status pwr_design_serialize(const pwr_design* design, pwr_buffer** netlist, pwr_buffer** intent) {
  if (!design) return fail(PWR_ERR_INVALID_ARGUMENT, "null design");
  return guarded([&] {
    if (netlist) *netlist = make_buffer(pwr::serialize_netlist(design->value));
    if (intent) *intent = make_buffer(pwr::serialize_intent(design->value));
  });
}

pwr_status pwr_design_counts(const pwr_design* design, size_t* islands, size_t* cells, size_t* nets, size_t* ports) {
  if (!design) return fail(PWR_ERR_INVALID_ARGUMENT, "null design");
  if (islands) *islands = design->value.islands.size();
  if (cells) *cells = design->value.cells.size();
  if (nets) *nets = design->value.nets.size();
  if (ports) *ports = design->value.ports.size();
  return PWR_OK;
}

pwr_status pwr_check(const pwr_design* design, const pwr_config* config, pwr_format format, pwr_buffer** report,
                     size_t* violations) {
  auto fmt = to_format(format);
  if (!design) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  if (!fmt) return fail(PWR_ERR_INVALID_ARGUMENT, "unknown format");
  return guarded([&] {
    auto found = pwr::verify_power_intent(design->value, config_or_default(config).crossing);
    if (report) *report = make_buffer(pwr::emit_report(pwr::make_violation_report(found), *fmt));
    if (violations) *violations = found.size();
  });
}

pwr_status pwr_fix(const pwr_design* design, const pwr_config* config, pwr_design** fixed, size_t* cells_added) {
  if (!design || !fixed) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& options = config_or_default(config).crossing;
    auto issues = pwr::analyze_crossings(design->value, options);
    pwr::Design d = pwr::apply_power_fixes(design->value, issues);
    for (const auto& island : design->value.islands)
      if (island.switchable) d = pwr::insert_sleep_pins(d, island.name);
    if (cells_added) *cells_added = d.cells.size() - design->value.cells.size();
    *fixed = new pwr_design{std::move(d)};
  });
}

pwr_status pwr_insert_sleep_pins(const pwr_design* design, const char* island, pwr_design** out) {
  if (!design || !island || !out) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new pwr_design{pwr::insert_sleep_pins(design->value, island)}; });
}

void pwr_power_options_init(pwr_power_options* options) {
  if (!options) return;
  options->f_clk_mhz = 0.0;
  options->k = 1.0;
  options->temp_c = 25.0;
  options->sleeping = nullptr;
  options->sleeping_count = 0;
}

pwr_status pwr_power(const pwr_design* design, const char* activity_text, const pwr_power_options* options,
                     const pwr_config* config, pwr_format format, pwr_buffer** report) {
  auto fmt = to_format(format);
  if (!design || !options || !report) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  if (!fmt) return fail(PWR_ERR_INVALID_ARGUMENT, "unknown format");
  if (options->sleeping_count && !options->sleeping) return fail(PWR_ERR_INVALID_ARGUMENT, "null island list");
  return guarded([&] {
    std::set<std::string, std::less<>> sleeping;
    for (size_t i = 0; i < options->sleeping_count; ++i) {
      if (!options->sleeping[i]) throw pwr::PreconditionError("null island name");
      sleeping.insert(options->sleeping[i]);
    }
    auto activity = pwr::parse_activity(activity_text ? activity_text : "", options->f_clk_mhz, design->value);
    auto dyn = pwr::dynamic_power(design->value, activity, {options->k, options->f_clk_mhz});
    auto stat = pwr::static_power(design->value, sleeping, options->temp_c, config_or_default(config).leakage);
    *report = make_buffer(pwr::emit_report(pwr::make_power_report(pwr::combine(dyn, stat)), *fmt));
  });
}

void pwr_optimize_options_init(pwr_optimize_options* options) {
  if (!options) return;
  options->freq_mhz = 0.0;
  options->pins = nullptr;
  options->pin_count = 0;
  options->baseline_vdd = 0.0;
  options->activity_text = nullptr;
  options->f_clk_mhz = 0.0;
  options->k = 1.0;
}

pwr_status pwr_optimize(const pwr_design* design, const char* characterization_text,
                        const pwr_optimize_options* options, pwr_format format, pwr_buffer** report) {
  auto fmt = to_format(format);
  if (!design || !characterization_text || !options || !report) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  if (!fmt) return fail(PWR_ERR_INVALID_ARGUMENT, "unknown format");
  if (options->pin_count && !options->pins) return fail(PWR_ERR_INVALID_ARGUMENT, "null pin list");
  return guarded([&] {
    auto table = pwr::parse_characterization(characterization_text);
    pwr::IslandValues pins;
    for (size_t i = 0; i < options->pin_count; ++i) {
      if (!options->pins[i].island) throw pwr::PreconditionError("null island name in pin list");
      pins[options->pins[i].island] = options->pins[i].vdd;
    }
    pwr::IslandValues reqs;
    if (options->freq_mhz > 0.0)
      for (const auto& island : design->value.islands)
        if (!pins.count(island.name)) reqs[island.name] = options->freq_mhz;

    std::optional<double> baseline;
    if (options->baseline_vdd > 0.0) baseline = options->baseline_vdd;
    auto plan = pwr::assign_voltages(design->value, table, reqs, pins, baseline);

    const double f_clk = options->f_clk_mhz > 0.0 ? options->f_clk_mhz : options->freq_mhz;
    pwr::ActivityProfile activity;
    pwr::DynamicPowerParams params{options->k, f_clk > 0.0 ? f_clk : 1.0};
    if (options->activity_text) activity = pwr::parse_activity(options->activity_text, params.f_clk_mhz, design->value);
    auto savings = pwr::power_savings_summary(plan.baseline_vdd, plan, table, activity, params);
    *report = make_buffer(pwr::emit_report(pwr::make_optimize_report(plan, savings), *fmt));
  });
}

pwr_status pwr_sleep_sim(const char* script_text, const pwr_config* config, pwr_format format, pwr_buffer** trace,
                         pwr_buffer** vcd) {
  auto fmt = to_format(format);
  if (!script_text || !trace) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  if (!fmt) return fail(PWR_ERR_INVALID_ARGUMENT, "unknown format");
  return guarded([&] {
    auto result = pwr::pim_run_script(config_or_default(config).pim, pwr::parse_pim_script(script_text));
    std::string text = *fmt == pwr::Format::Text ? pwr::format_trace(result)
                                                 : pwr::emit_report(pwr::make_trace_report(result), *fmt);
    std::string dump = vcd ? pwr::format_vcd(result) : std::string{};
    *trace = make_buffer(std::move(text));
    if (vcd) *vcd = make_buffer(std::move(dump));
  });
}

pwr_status pwr_taxonomy(pwr_format format, pwr_buffer** report) {
  auto fmt = to_format(format);
  if (!report) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  if (!fmt) return fail(PWR_ERR_INVALID_ARGUMENT, "unknown format");
  return guarded([&] { *report = make_buffer(pwr::emit_report(pwr::make_taxonomy_report(), *fmt)); });
}

pwr_status pwr_leakage_sweep(const pwr_config* config, double temp_c, double v_min, double v_step, pwr_buffer** csv) {
  if (!csv) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto r = pwr::make_leakage_sweep(config_or_default(config).leakage, temp_c, v_min, v_step);
    *csv = make_buffer(pwr::emit_report(r, pwr::Format::Csv));
  });
}

pwr_status pwr_characterization_plot(const char* characterization_text, pwr_buffer** csv) {
  if (!characterization_text || !csv) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto r = pwr::make_characterization_plot(pwr::parse_characterization(characterization_text));
    *csv = make_buffer(pwr::emit_report(r, pwr::Format::Csv));
  });
}

pwr_status pwr_theoretical_reduction(double v_from, double v_to, double* fraction) {
  if (!fraction) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *fraction = pwr::theoretical_reduction(v_from, v_to); });
}

pwr_status pwr_leakage_current(const pwr_config* config, double v_slp, double temp_c, double* amperes) {
  if (!amperes) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(
      [&] { *amperes = pwr::leakage_current_per_gate(v_slp, temp_c, config_or_default(config).leakage); });
}

pwr_status pwr_calibration_factor(const char* calibration_text, const char* device, int temp_c, const char* source,
                                  double* factor) {
  if (!device || !source || !factor) return fail(PWR_ERR_INVALID_ARGUMENT, "null argument");
  auto dev = pwr::device_class_from_string(device);
  auto src = pwr::calibration_source_from_string(source);
  if (!dev) return fail(PWR_ERR_INVALID_ARGUMENT, std::string("unknown device class ") + device);
  if (!src) return fail(PWR_ERR_INVALID_ARGUMENT, std::string("unknown calibration source ") + source);
  return guarded([&] {
    auto table = pwr::CalibrationTable::builtin();
    if (calibration_text) table.merge(calibration_text);
    *factor = pwr::calibrated_reduction_factor(*dev, temp_c, *src, table);
  });
}

}  // extern "C"
