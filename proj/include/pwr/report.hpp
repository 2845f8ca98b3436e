#pragma once

// Tabular reports shared by every subcommand, and the key=value tool config.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pwr/crossing.hpp"
#include "pwr/pim.hpp"
#include "pwr/power.hpp"
#include "pwr/voltage.hpp"

namespace pwr {

inline constexpr std::string_view kToolVersion = "0.1.0";

// monostate is an absent value: "-" in text, empty in csv, null in json.
using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

struct Report {
  std::string kind;
  std::string version = std::string(kToolVersion);
  std::vector<std::pair<std::string, Value>> assumptions;
  std::vector<Table> tables;
};

enum class Format { Text, Json, Csv };

std::optional<Format> format_from_string(std::string_view text);

// Text rounds numbers to 4 significant digits; json and csv carry the
// shortest representation that reads back exactly.
std::string emit_report(const Report& report, Format format);

// Reads back what emit_report(.., Format::Csv) wrote. Cells that parse as
// numbers come back as double, true/false as bool, empty as monostate.
Report parse_report_csv(std::string_view text);

Report make_violation_report(const std::vector<Violation>& violations);
Report make_issue_report(const std::vector<CrossingIssue>& issues);
Report make_power_report(const PowerReport& power);
Report make_optimize_report(const VoltagePlan& plan, const SavingsReport& savings);
Report make_trace_report(const Trace& trace);
Report make_taxonomy_report();
Report make_leakage_sweep(const LeakageModel& model, double temp_c, double v_min, double v_step);
Report make_characterization_plot(const CharTable& table);

struct ToolConfig {
  LeakageModel leakage;
  PimConfig pim;
  CrossingOptions crossing;
};

// `key=value` lines. Unknown keys are a parse error.
ToolConfig parse_config(std::string_view text);

}  // namespace pwr
