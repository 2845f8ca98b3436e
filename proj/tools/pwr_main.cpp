// pwr: command-line front end over the C API.
//
// Exit codes: 0 success / clean check, 1 usage or input error,
// 2 check found violations, 3 infeasible voltage optimization.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pwr/pwr.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolations = 2;
constexpr int kExitInfeasible = 3;

struct BufferDeleter {
  void operator()(pwr_buffer* b) const { pwr_buffer_free(b); }
};
struct DesignDeleter {
  void operator()(pwr_design* d) const { pwr_design_free(d); }
};
struct ConfigDeleter {
  void operator()(pwr_config* c) const { pwr_config_free(c); }
};
using Buffer = std::unique_ptr<pwr_buffer, BufferDeleter>;
using DesignHandle = std::unique_ptr<pwr_design, DesignDeleter>;
using ConfigHandle = std::unique_ptr<pwr_config, ConfigDeleter>;

// Thrown to unwind with a specific exit code after the message is printed.
struct Exit {
  int code;
};

int exit_code_for(pwr_status status) { return status == PWR_ERR_INFEASIBLE ? kExitInfeasible : kExitError; }

void check(pwr_status status, const std::string& what) {
  if (status == PWR_OK) return;
  std::cerr << "pwr: " << what << ": " << pwr_last_error() << '\n';
  throw Exit{exit_code_for(status)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "pwr: cannot open " << path << '\n';
    throw Exit{kExitError};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const pwr_buffer* buffer) {
  std::ofstream out(path, std::ios::binary);
  out.write(pwr_buffer_data(buffer), static_cast<std::streamsize>(pwr_buffer_size(buffer)));
  if (!out) {
    std::cerr << "pwr: cannot write " << path << '\n';
    throw Exit{kExitError};
  }
}

void print(const pwr_buffer* buffer) {
  std::fwrite(pwr_buffer_data(buffer), 1, pwr_buffer_size(buffer), stdout);
}

DesignHandle load_design(const std::string& netlist, const std::string& intent) {
  const std::string netlist_text = read_file(netlist);
  const std::string intent_text = read_file(intent);
  pwr_design* d = nullptr;
  check(pwr_design_parse(netlist_text.c_str(), intent_text.c_str(), &d), netlist);
  return DesignHandle(d);
}

ConfigHandle load_config(const std::string& path) {
  pwr_config* c = nullptr;
  if (path.empty()) {
    check(pwr_config_parse(nullptr, &c), "config");
  } else {
    const std::string text = read_file(path);
    check(pwr_config_parse(text.c_str(), &c), path);
  }
  return ConfigHandle(c);
}

pwr_format parse_format(const std::string& name) {
  if (name == "text") return PWR_FORMAT_TEXT;
  if (name == "json") return PWR_FORMAT_JSON;
  return PWR_FORMAT_CSV;
}

struct Options {
  std::string netlist;
  std::string intent;
  std::string activity;
  std::string characterization;
  std::string out;
  std::string script;
  std::string config;
  std::string vcd;
  std::string plot;
  std::string format = "text";
  double fclk_mhz = 0.0;
  double k = 1.0;
  double temp_c = 25.0;
  double freq_mhz = 0.0;
  double baseline_v = 0.0;
  std::vector<std::string> sleep;
  std::vector<std::string> pins;
};

int run_check(const Options& o) {
  auto design = load_design(o.netlist, o.intent);
  auto config = load_config(o.config);
  pwr_buffer* report = nullptr;
  size_t violations = 0;
  check(pwr_check(design.get(), config.get(), parse_format(o.format), &report, &violations), "check");
  Buffer owned(report);
  print(report);
  return violations == 0 ? kExitOk : kExitViolations;
}

int run_fix(const Options& o) {
  auto design = load_design(o.netlist, o.intent);
  auto config = load_config(o.config);
  pwr_design* fixed = nullptr;
  size_t added = 0;
  check(pwr_fix(design.get(), config.get(), &fixed, &added), "fix");
  DesignHandle owned_design(fixed);
  pwr_buffer* netlist = nullptr;
  check(pwr_design_serialize(fixed, &netlist, nullptr), "serialize");
  Buffer owned(netlist);
  write_file(o.out, netlist);
  std::cout << "wrote " << o.out << " (" << added << " cells added)\n";
  return kExitOk;
}

int run_power(const Options& o) {
  auto design = load_design(o.netlist, o.intent);
  auto config = load_config(o.config);
  std::string activity;
  if (!o.activity.empty()) activity = read_file(o.activity);
  std::vector<const char*> sleeping;
  for (const auto& s : o.sleep) sleeping.push_back(s.c_str());

  pwr_power_options opts;
  pwr_power_options_init(&opts);
  opts.f_clk_mhz = o.fclk_mhz;
  opts.k = o.k;
  opts.temp_c = o.temp_c;
  opts.sleeping = sleeping.data();
  opts.sleeping_count = sleeping.size();

  pwr_buffer* report = nullptr;
  check(pwr_power(design.get(), o.activity.empty() ? nullptr : activity.c_str(), &opts, config.get(),
                  parse_format(o.format), &report),
        "power");
  Buffer owned(report);
  print(report);

  if (!o.plot.empty()) {
    pwr_buffer* sweep = nullptr;
    check(pwr_leakage_sweep(config.get(), o.temp_c, -0.4, 0.01, &sweep), "leakage sweep");
    Buffer owned_sweep(sweep);
    write_file(o.plot, sweep);
  }
  return kExitOk;
}

int run_optimize(const Options& o) {
  auto design = load_design(o.netlist, o.intent);
  const std::string table = read_file(o.characterization);
  std::string activity;
  if (!o.activity.empty()) activity = read_file(o.activity);

  std::vector<std::string> names;
  std::vector<pwr_pin> pins;
  names.reserve(o.pins.size());
  for (const auto& arg : o.pins) {
    auto eq = arg.find('=');
    double v = 0.0;
    try {
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument(arg);
      std::size_t used = 0;
      v = std::stod(arg.substr(eq + 1), &used);
      if (used != arg.size() - eq - 1) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      std::cerr << "pwr: --pin expects ISLAND=VOLTS, got " << arg << '\n';
      throw Exit{kExitError};
    }
    names.push_back(arg.substr(0, eq));
    pins.push_back({names.back().c_str(), v});
  }

  pwr_optimize_options opts;
  pwr_optimize_options_init(&opts);
  opts.freq_mhz = o.freq_mhz;
  opts.pins = pins.data();
  opts.pin_count = pins.size();
  opts.baseline_vdd = o.baseline_v;
  opts.activity_text = o.activity.empty() ? nullptr : activity.c_str();
  opts.f_clk_mhz = o.fclk_mhz;
  opts.k = o.k;

  pwr_buffer* report = nullptr;
  check(pwr_optimize(design.get(), table.c_str(), &opts, parse_format(o.format), &report), "optimize");
  Buffer owned(report);
  print(report);

  if (!o.plot.empty()) {
    pwr_buffer* csv = nullptr;
    check(pwr_characterization_plot(table.c_str(), &csv), "characterization plot");
    Buffer owned_csv(csv);
    write_file(o.plot, csv);
  }
  return kExitOk;
}

int run_sleep_sim(const Options& o) {
  const std::string script = read_file(o.script);
  auto config = load_config(o.config);
  pwr_buffer* trace = nullptr;
  pwr_buffer* vcd = nullptr;
  check(pwr_sleep_sim(script.c_str(), config.get(), parse_format(o.format), &trace, o.vcd.empty() ? nullptr : &vcd),
        "sleep-sim");
  Buffer owned_trace(trace);
  Buffer owned_vcd(vcd);
  print(trace);
  if (vcd) write_file(o.vcd, vcd);
  return kExitOk;
}

int run_taxonomy(const Options& o) {
  pwr_buffer* report = nullptr;
  check(pwr_taxonomy(parse_format(o.format), &report), "taxonomy");
  Buffer owned(report);
  print(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power-intent analysis, repair and power estimation for multi-voltage designs", "pwr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pwr_version()));

  Options o;
  const auto formats = CLI::IsMember({"text", "json", "csv"});

  auto add_design = [&](CLI::App* sub) {
    sub->add_option("--netlist", o.netlist, "Netlist file")->required()->check(CLI::ExistingFile);
    sub->add_option("--intent", o.intent, "Power-intent file")->required()->check(CLI::ExistingFile);
  };

  auto* check_cmd = app.add_subcommand("check", "Report power-intent violations (exit 2 when any)");
  add_design(check_cmd);
  check_cmd->add_option("--config", o.config, "key=value overrides")->check(CLI::ExistingFile);
  check_cmd->add_option("--format", o.format, "text, json or csv")->check(formats);

  auto* fix_cmd = app.add_subcommand("fix", "Insert level shifters, isolation cells and sleep pins");
  add_design(fix_cmd);
  fix_cmd->add_option("--out", o.out, "Output netlist")->required();
  fix_cmd->add_option("--config", o.config, "key=value overrides")->check(CLI::ExistingFile);

  auto* power_cmd = app.add_subcommand("power", "Dynamic and static power per island");
  add_design(power_cmd);
  power_cmd->add_option("--activity", o.activity, "Toggle-count file")->check(CLI::ExistingFile);
  power_cmd->add_option("--fclk-mhz", o.fclk_mhz, "Clock frequency")->required()->check(CLI::PositiveNumber);
  power_cmd->add_option("--k", o.k, "Switching constant in [0, 1]")->check(CLI::Range(0.0, 1.0));
  power_cmd->add_option("--temp-c", o.temp_c, "Junction temperature");
  power_cmd->add_option("--sleep", o.sleep, "Islands held in sleep")->expected(1, -1);
  power_cmd->add_option("--config", o.config, "key=value overrides")->check(CLI::ExistingFile);
  power_cmd->add_option("--plot-csv", o.plot, "Write a leakage vs sleep-bias sweep");
  power_cmd->add_option("--format", o.format, "text, json or csv")->check(formats);

  auto* opt_cmd = app.add_subcommand("optimize", "Minimum voltage per island and savings vs baseline");
  add_design(opt_cmd);
  opt_cmd->add_option("--char", o.characterization, "Characterization table")->required()->check(CLI::ExistingFile);
  opt_cmd->add_option("--freq-mhz", o.freq_mhz, "Required frequency for unpinned islands")
      ->required()
      ->check(CLI::PositiveNumber);
  opt_cmd->add_option("--pin", o.pins, "ISLAND=VOLTS fixed supply")->expected(1, -1);
  opt_cmd->add_option("--baseline-v", o.baseline_v, "Single-voltage baseline")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--activity", o.activity, "Toggle-count file for absolute watts")->check(CLI::ExistingFile);
  opt_cmd->add_option("--fclk-mhz", o.fclk_mhz, "Clock for the activity file")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--k", o.k, "Switching constant in [0, 1]")->check(CLI::Range(0.0, 1.0));
  opt_cmd->add_option("--plot-csv", o.plot, "Write voltage vs area and relative power");
  opt_cmd->add_option("--format", o.format, "text, json or csv")->check(formats);

  auto* sim_cmd = app.add_subcommand("sleep-sim", "Run a register script against the sleep controller");
  sim_cmd->add_option("--script", o.script, "Script file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--config", o.config, "key=value overrides")->check(CLI::ExistingFile);
  sim_cmd->add_option("--vcd", o.vcd, "Also write a value-change dump");
  sim_cmd->add_option("--format", o.format, "text, json or csv")->check(formats);

  auto* tax_cmd = app.add_subcommand("taxonomy", "Leakage mechanisms by process node");
  tax_cmd->add_option("--format", o.format, "text, json or csv")->check(formats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*check_cmd) return run_check(o);
    if (*fix_cmd) return run_fix(o);
    if (*power_cmd) return run_power(o);
    if (*opt_cmd) return run_optimize(o);
    if (*sim_cmd) return run_sleep_sim(o);
    if (*tax_cmd) return run_taxonomy(o);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitError;
}
