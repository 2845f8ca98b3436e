#include "pwr/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "pwr/errors.hpp"
#include "pwr/text_format.hpp"

namespace pwr {

namespace {

std::string render(const Value& v, Format format) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return format == Format::Text ? "-" : "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format == Format::Text ? text::format_significant(x, 4) : text::format_number(x);
        } else {
          return x;
        }
      },
      v);
}

nlohmann::ordered_json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>)
          return nullptr;
        else
          return x;
      },
      v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

Value csv_value(const std::string& cell) {
  if (cell.empty()) return std::monostate{};
  if (cell == "true") return true;
  if (cell == "false") return false;
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), d);
  if (ec == std::errc{} && ptr == cell.data() + cell.size()) return d;
  return cell;
}

Value optional_value(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

std::optional<Format> format_from_string(std::string_view text) {
  if (text == "text") return Format::Text;
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  return std::nullopt;
}

std::string emit_report(const Report& r, Format format) {
  if (format == Format::Json) {
    nlohmann::ordered_json j;
    j["kind"] = r.kind;
    j["version"] = r.version;
    j["assumptions"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.assumptions) j["assumptions"][k] = to_json(v);
    j["tables"] = nlohmann::ordered_json::object();
    for (const auto& t : r.tables) {
      auto rows = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = to_json(row[c]);
        rows.push_back(std::move(obj));
      }
      j["tables"][t.name] = std::move(rows);
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  if (format == Format::Csv) {
    out << "# kind=" << r.kind << "\n# version=" << r.version << '\n';
    for (const auto& [k, v] : r.assumptions) out << "# " << k << '=' << render(v, format) << '\n';
    for (const auto& t : r.tables) {
      out << "# table=" << t.name << '\n';
      for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << csv_escape(t.columns[c]);
      out << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(render(row[c], format));
        out << '\n';
      }
    }
    return out.str();
  }

  out << "# " << r.kind << " report (pwr " << r.version << ")\n";
  if (!r.assumptions.empty()) {
    out << '#';
    for (const auto& [k, v] : r.assumptions) out << ' ' << k << '=' << render(v, format);
    out << '\n';
  }
  for (std::size_t ti = 0; ti < r.tables.size(); ++ti) {
    const Table& t = r.tables[ti];
    if (r.tables.size() > 1) out << (ti ? "\n" : "") << '[' << t.name << "]\n";
    std::vector<std::vector<std::string>> cells;
    cells.push_back(t.columns);
    for (const auto& row : t.rows) {
      std::vector<std::string> line;
      for (const auto& v : row) line.push_back(render(v, format));
      cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(t.columns.size(), 0);
    for (const auto& line : cells)
      for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    for (const auto& line : cells) {
      std::string s;
      for (std::size_t c = 0; c < line.size(); ++c) {
        s += line[c];
        if (c + 1 < line.size()) s += std::string(width[c] - line[c].size() + 2, ' ');
      }
      out << s << '\n';
    }
  }
  return out.str();
}

Report parse_report_csv(std::string_view text) {
  Report r;
  r.version.clear();
  bool expect_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      std::string_view body = line.substr(2);
      auto eq = body.find('=');
      if (eq == std::string_view::npos) throw ParseError("malformed csv comment");
      std::string key(body.substr(0, eq));
      std::string value(body.substr(eq + 1));
      if (key == "kind") {
        r.kind = value;
      } else if (key == "version") {
        r.version = value;
      } else if (key == "table") {
        r.tables.push_back({value, {}, {}});
        expect_header = true;
      } else {
        r.assumptions.emplace_back(key, csv_value(value));
      }
      continue;
    }
    if (r.tables.empty()) throw ParseError("csv row outside a table");
    Table& t = r.tables.back();
    auto cells = csv_split(line);
    if (expect_header) {
      t.columns = std::move(cells);
      expect_header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) throw ParseError("csv row width does not match header");
    std::vector<Value> row;
    for (const auto& c : cells) row.push_back(csv_value(c));
    t.rows.push_back(std::move(row));
  }
  return r;
}

Report make_violation_report(const std::vector<Violation>& violations) {
  Report r;
  r.kind = "check";
  Table t{"violations", {"kind", "object", "message"}, {}};
  for (const auto& v : violations)
    t.rows.push_back({std::string(v.kind == ViolationKind::Crossing ? "crossing" : "missing_sleep_pin"), v.object,
                      v.message});
  r.tables.push_back(std::move(t));
  return r;
}

Report make_issue_report(const std::vector<CrossingIssue>& issues) {
  Report r;
  r.kind = "crossings";
  Table t{"issues", {"net", "driver_island", "receiver_island", "kind", "rationale"}, {}};
  for (const auto& i : issues)
    t.rows.push_back({i.net, i.driver_island, i.receiver_island, std::string(to_string(i.kind)), i.rationale});
  r.tables.push_back(std::move(t));
  return r;
}

Report make_power_report(const PowerReport& p) {
  Report r;
  r.kind = "power";
  r.assumptions = {{"k", p.assumptions.k},
                   {"f_clk_mhz", p.assumptions.f_clk_mhz},
                   {"temp_c", p.assumptions.temp_c},
                   {"bias_v", p.assumptions.bias_v}};
  Table t{"islands", {"island", "asleep", "dynamic_w", "static_active_w", "static_sleep_w", "total_w"}, {}};
  for (const auto& i : p.islands)
    t.rows.push_back({i.island, i.asleep, i.dynamic_w, i.static_active_w, i.static_sleep_w, i.total_w()});
  if (!p.islands.empty()) {
    if (p.manager_w > 0.0)
      t.rows.push_back({std::string("(manager)"), std::monostate{}, 0.0, 0.0, p.manager_w, p.manager_w});
    double active = 0.0;
    double sleep = p.manager_w;
    for (const auto& i : p.islands) {
      active += i.static_active_w;
      sleep += i.static_sleep_w;
    }
    t.rows.push_back({std::string("TOTAL"), std::monostate{}, p.total_dynamic_w(), active, sleep, p.total_w()});
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report make_optimize_report(const VoltagePlan& plan, const SavingsReport& savings) {
  Report r;
  r.kind = "optimize";
  r.assumptions = {{"baseline_vdd", savings.baseline_vdd}};
  Table p{"plan", {"island", "f_req_mhz", "pinned", "vdd", "fmax_mhz", "area_um2", "cap_factor"}, {}};
  for (const auto& a : plan.islands) {
    p.rows.push_back({a.island, optional_value(a.f_req_mhz), a.pinned, a.vdd,
                      a.point ? Value(a.point->fmax_mhz) : Value(std::monostate{}),
                      a.point ? Value(a.point->area_um2) : Value(std::monostate{}),
                      a.point ? Value(a.point->cap_factor) : Value(std::monostate{})});
  }
  Table s{"savings",
          {"island", "vdd_from", "vdd_to", "theoretical_pct", "actual_pct", "area_delta_pct", "levelshifters_added",
           "iso_added", "baseline_dynamic_w", "planned_dynamic_w", "within_theoretical"},
          {}};
  for (const auto& row : savings.rows) {
    s.rows.push_back({row.island, row.vdd_from, row.vdd_to, row.theoretical * 100.0, row.actual * 100.0,
                      row.area_delta ? Value(*row.area_delta * 100.0) : Value(std::monostate{}),
                      std::int64_t{row.levelshifters_added}, std::int64_t{row.iso_added}, row.baseline_dynamic_w,
                      row.planned_dynamic_w, row.within_theoretical});
  }
  r.tables.push_back(std::move(p));
  r.tables.push_back(std::move(s));
  return r;
}

Report make_trace_report(const Trace& trace) {
  Report r;
  r.kind = "sleep-sim";
  Table t{"trace", {"time_ns", "event"}, {}};
  for (const auto& e : trace) t.rows.push_back({e.time_ns, std::string(to_string(e.event))});
  r.tables.push_back(std::move(t));
  return r;
}

Report make_taxonomy_report() {
  Report r;
  r.kind = "taxonomy";
  Table t{"mechanisms", {"id", "mechanism"}, {}};
  for (int node : kProcessNodesNm) t.columns.push_back(std::to_string(node) + "nm");
  for (const auto& m : leakage_mechanisms()) {
    std::vector<Value> row{std::string(m.id), std::string(m.name)};
    for (auto s : m.severity) row.emplace_back(std::string(to_string(s)));
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report make_leakage_sweep(const LeakageModel& model, double temp_c, double v_min, double v_step) {
  if (!(v_step > 0.0) || v_min > 0.0) throw PreconditionError("sweep needs v_min <= 0 and a positive step");
  Report r;
  r.kind = "leakage-sweep";
  r.assumptions = {{"temp_c", temp_c}, {"slope_mv_per_decade", model.slope_mv_per_decade}};
  Table t{"sweep", {"v_slp", "current_a", "reduction"}, {}};
  const auto steps = static_cast<int>(std::floor(-v_min / v_step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double v = -v_step * i;
    t.rows.push_back({v, leakage_current_per_gate(v, temp_c, model), leakage_reduction_factor(v, model)});
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report make_characterization_plot(const CharTable& table) {
  Report r;
  r.kind = "characterization";
  Table t{"points", {"island_class", "vdd", "fmax_mhz", "area_um2", "relative_dynamic_power"}, {}};
  for (const auto& row : table.rows) {
    double ref_v = 0.0;
    double ref_cap = 1.0;
    for (const auto* other : table.rows_for(row.island_class)) {
      if (other->vdd > ref_v) {
        ref_v = other->vdd;
        ref_cap = other->cap_factor;
      }
    }
    const double ratio = row.vdd / ref_v;
    t.rows.push_back({row.island_class, row.vdd, row.fmax_mhz, row.area_um2, row.cap_factor / ref_cap * ratio * ratio});
  }
  r.tables.push_back(std::move(t));
  return r;
}

ToolConfig parse_config(std::string_view text) {
  ToolConfig cfg;
  for (const auto& line : text::tokenize(text)) {
    if (line.tokens.size() != 1)
      throw ParseError("expected one key=value per line", line.number, line.tokens[1].column, line.tokens[1].text);
    text::Attributes attrs(line, 0);
    auto num = [&](std::string_view key, double& slot) {
      if (auto v = attrs.optional_number(key)) slot = *v;
    };
    auto flag = [&](std::string_view key, bool& slot) {
      if (auto v = attrs.optional_flag(key)) slot = *v;
    };
    num("i0_per_gate_25c", cfg.leakage.i0_per_gate_25c);
    num("slope_s", cfg.leakage.slope_mv_per_decade);
    num("temp_doubling_c", cfg.leakage.temp_doubling_c);
    num("manager_overhead_w", cfg.leakage.manager_overhead_w);
    num("bias_v", cfg.leakage.bias_v);
    num("gate_leakage_power_w", cfg.leakage.gate_leakage_power_w);
    num("t_iso_on", cfg.pim.t_iso_on);
    num("t_save", cfg.pim.t_save);
    num("t_bias_on", cfg.pim.t_bias_on);
    num("t_bias_off", cfg.pim.t_bias_off);
    num("t_restore", cfg.pim.t_restore);
    num("t_iso_off", cfg.pim.t_iso_off);
    flag("explicit_bit", cfg.pim.explicit_bit);
    flag("assume_transmission_gates", cfg.crossing.assume_transmission_gates);
    attrs.finish();
  }
  cfg.leakage.validate();
  cfg.pim.validate();
  return cfg;
}

}  // namespace pwr
