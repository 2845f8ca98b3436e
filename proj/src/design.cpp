#include "pwr/design.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "pwr/errors.hpp"
#include "pwr/text_format.hpp"

namespace pwr {

namespace {

constexpr std::pair<CellKind, std::string_view> kKindNames[] = {
    {CellKind::Std, "std"},   {CellKind::LevelShifter, "levelshifter"}, {CellKind::Iso, "iso"},
    {CellKind::RetFF, "retff"}, {CellKind::Sram, "sram"},               {CellKind::Pim, "pim"},
};

template <typename T>
auto find_by_name(T& items, std::string_view name) -> decltype(&items.front()) {
  for (auto& item : items)
    if (item.name == name) return &item;
  return nullptr;
}

PinRef parse_pin_ref(const text::Token& tok, std::string_view text, const text::Line& line) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    if (text.empty()) throw ParseError("empty endpoint", line.number, tok.column);
    return {std::string(text), {}};
  }
  if (dot == 0 || dot + 1 == text.size() || text.find('.', dot + 1) != std::string_view::npos)
    throw ParseError("bad endpoint, expected <cell>.<pin>", line.number, tok.column, std::string(text));
  return {std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

void check_name(const text::Line& line) {
  if (line.tokens.size() < 2)
    throw ParseError("missing name after", line.number, line.tokens[0].column, line.tokens[0].text);
  const auto& name = line.tokens[1];
  if (name.text.find('=') != std::string::npos || name.text.find('.') != std::string::npos ||
      name.text.find(',') != std::string::npos)
    throw ParseError("invalid name", line.number, name.column, name.text);
}

}  // namespace

std::string_view to_string(CellKind kind) {
  for (auto [k, name] : kKindNames)
    if (k == kind) return name;
  return "std";
}

std::optional<CellKind> cell_kind_from_string(std::string_view text) {
  for (auto [k, name] : kKindNames)
    if (name == text) return k;
  return std::nullopt;
}

const Island* Design::find_island(std::string_view name) const { return find_by_name(islands, name); }
const CellInstance* Design::find_cell(std::string_view name) const { return find_by_name(cells, name); }
const Net* Design::find_net(std::string_view name) const { return find_by_name(nets, name); }
const Port* Design::find_port(std::string_view name) const { return find_by_name(ports, name); }
Island* Design::find_island(std::string_view name) { return find_by_name(islands, name); }
CellInstance* Design::find_cell(std::string_view name) { return find_by_name(cells, name); }
Net* Design::find_net(std::string_view name) { return find_by_name(nets, name); }

const CellInstance* Design::power_manager() const {
  for (const auto& c : cells)
    if (c.kind == CellKind::Pim) return &c;
  return nullptr;
}

std::vector<DesignError> validate_design(const Design& d) {
  std::vector<DesignError> errors;
  auto report = [&](std::string object, std::string rule) {
    errors.push_back({std::move(object), std::move(rule)});
  };

  std::set<std::string_view> seen;
  for (const auto& island : d.islands) {
    const std::string obj = "island " + island.name;
    if (!seen.insert(island.name).second) report(obj, "duplicate name");
    if (!(island.vdd > 0.0)) report(obj, "vdd must be positive");
    if (island.retention && !island.switchable) report(obj, "retention requires switchable");
  }

  seen.clear();
  int pim_count = 0;
  for (const auto& cell : d.cells) {
    const std::string obj = "cell " + cell.name;
    if (!seen.insert(cell.name).second) report(obj, "duplicate name");
    if (!d.find_island(cell.island)) report(obj, "unknown island " + cell.island);
    if (!(cell.cap_ff >= 0.0)) report(obj, "cap_ff must be non-negative");
    if (cell.gate_count < 1) report(obj, "gate count must be at least 1");
    if (cell.kind == CellKind::Pim && ++pim_count == 2) report(obj, "more than one pim cell");
  }

  seen.clear();
  for (const auto& port : d.ports) {
    const std::string obj = "port " + port.name;
    if (!seen.insert(port.name).second) report(obj, "duplicate name");
    if (!(port.vdd > 0.0)) report(obj, "vdd must be positive");
  }

  seen.clear();
  for (const auto& net : d.nets) {
    const std::string obj = "net " + net.name;
    if (!seen.insert(net.name).second) report(obj, "duplicate name");
    if (net.driver.is_port()) {
      const Port* p = d.find_port(net.driver.object);
      if (!p)
        report(obj, "unresolved driver");
      else if (p->dir != PortDir::In)
        report(obj, "driver port " + p->name + " is not an input");
    } else if (!d.find_cell(net.driver.object)) {
      report(obj, "unresolved driver");
    }
    for (const auto& load : net.loads) {
      if (load.is_port()) {
        const Port* p = d.find_port(load.object);
        if (!p)
          report(obj, "unresolved load " + load.str());
        else if (p->dir != PortDir::Out)
          report(obj, "load port " + p->name + " is not an output");
      } else if (!d.find_cell(load.object)) {
        report(obj, "unresolved load " + load.str());
      }
    }
    if (net.loads.empty()) {
      const Port* p = d.find_port(net.name);
      if (!p || p->dir != PortDir::Out) report(obj, "no loads");
    }
  }
  return errors;
}

Design parse_design(std::string_view netlist_text, std::string_view intent_text) {
  Design d;
  std::map<std::string, int> origin;  // "<category> <name>" -> source line

  for (const auto& line : text::tokenize(intent_text)) {
    const auto& kw = line.tokens[0];
    if (kw.text != "island") throw ParseError("unexpected statement in intent file", line.number, kw.column, kw.text);
    check_name(line);
    text::Attributes attrs(line, 2);
    Island island;
    island.name = line.tokens[1].text;
    island.vdd = attrs.number("vdd");
    island.switchable = attrs.flag("switchable");
    island.retention = attrs.flag("retention");
    attrs.finish();
    if (d.find_island(island.name))
      throw ParseError("duplicate name", line.number, line.tokens[1].column, island.name);
    origin.emplace("island " + island.name, line.number);
    d.islands.push_back(std::move(island));
  }

  for (const auto& line : text::tokenize(netlist_text)) {
    const auto& kw = line.tokens[0];
    if (kw.text == "cell") {
      check_name(line);
      text::Attributes attrs(line, 2);
      CellInstance cell;
      cell.name = line.tokens[1].text;
      const auto& kind_tok = attrs.require("kind");
      auto kind = cell_kind_from_string(kind_tok.text);
      if (!kind) throw ParseError("unknown cell kind", line.number, kind_tok.column, kind_tok.text);
      cell.kind = *kind;
      cell.island = attrs.string("island");
      cell.cap_ff = attrs.number("cap_ff");
      cell.gate_count = attrs.integer("gates");
      cell.has_sleep_pin = attrs.optional_flag("sleep").value_or(false);
      attrs.finish();
      if (d.find_cell(cell.name))
        throw ParseError("duplicate name", line.number, line.tokens[1].column, cell.name);
      origin.emplace("cell " + cell.name, line.number);
      d.cells.push_back(std::move(cell));
    } else if (kw.text == "net") {
      check_name(line);
      text::Attributes attrs(line, 2);
      Net net;
      net.name = line.tokens[1].text;
      const auto& drv = attrs.require("driver");
      net.driver = parse_pin_ref(drv, drv.text, line);
      if (const text::Token* loads = attrs.find("loads")) {
        std::string_view rest = loads->text;
        while (true) {
          auto comma = rest.find(',');
          net.loads.push_back(parse_pin_ref(*loads, rest.substr(0, comma), line));
          if (comma == std::string_view::npos) break;
          rest = rest.substr(comma + 1);
        }
      }
      attrs.finish();
      if (d.find_net(net.name))
        throw ParseError("duplicate name", line.number, line.tokens[1].column, net.name);
      origin.emplace("net " + net.name, line.number);
      d.nets.push_back(std::move(net));
    } else if (kw.text == "port") {
      check_name(line);
      text::Attributes attrs(line, 2);
      Port port;
      port.name = line.tokens[1].text;
      const auto& dir = attrs.require("dir");
      if (dir.text == "in")
        port.dir = PortDir::In;
      else if (dir.text == "out")
        port.dir = PortDir::Out;
      else
        throw ParseError("port direction must be in or out", line.number, dir.column, dir.text);
      port.vdd = attrs.number("vdd");
      attrs.finish();
      if (d.find_port(port.name))
        throw ParseError("duplicate name", line.number, line.tokens[1].column, port.name);
      origin.emplace("port " + port.name, line.number);
      d.ports.push_back(std::move(port));
    } else {
      throw ParseError("unexpected statement in netlist file", line.number, kw.column, kw.text);
    }
  }

  auto errors = validate_design(d);
  if (!errors.empty()) {
    const auto& first = errors.front();
    auto it = origin.find(first.object);
    throw ParseError(first.message(), it == origin.end() ? 0 : it->second);
  }
  return d;
}

std::string serialize_netlist(const Design& d) {
  std::ostringstream out;
  for (const auto& c : d.cells) {
    out << "cell " << c.name << " kind=" << to_string(c.kind) << " island=" << c.island
        << " cap_ff=" << text::format_number(c.cap_ff) << " gates=" << c.gate_count;
    if (c.has_sleep_pin) out << " sleep=1";
    out << '\n';
  }
  for (const auto& p : d.ports)
    out << "port " << p.name << " dir=" << (p.dir == PortDir::In ? "in" : "out")
        << " vdd=" << text::format_number(p.vdd) << '\n';
  for (const auto& n : d.nets) {
    out << "net " << n.name << " driver=" << n.driver.str();
    if (!n.loads.empty()) {
      out << " loads=";
      for (std::size_t i = 0; i < n.loads.size(); ++i) out << (i ? "," : "") << n.loads[i].str();
    }
    out << '\n';
  }
  return out.str();
}

std::string serialize_intent(const Design& d) {
  std::ostringstream out;
  for (const auto& i : d.islands)
    out << "island " << i.name << " vdd=" << text::format_number(i.vdd) << " switchable=" << i.switchable
        << " retention=" << i.retention << '\n';
  return out.str();
}

}  // namespace pwr
