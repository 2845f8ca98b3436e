#pragma once

// Flat structural netlist plus power intent.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pwr {

enum class CellKind { Std, LevelShifter, Iso, RetFF, Sram, Pim };

std::string_view to_string(CellKind kind);
std::optional<CellKind> cell_kind_from_string(std::string_view text);

// Level shifters and isolation cells: the cells power-intent repair inserts.
inline bool is_boundary_cell(CellKind kind) {
  return kind == CellKind::LevelShifter || kind == CellKind::Iso;
}

struct Island {
  std::string name;
  double vdd = 0.0;
  bool switchable = false;
  bool retention = false;

  friend bool operator==(const Island&, const Island&) = default;
};

struct CellInstance {
  std::string name;
  CellKind kind = CellKind::Std;
  std::string island;
  double cap_ff = 0.0;
  std::int64_t gate_count = 1;
  bool has_sleep_pin = false;

  friend bool operator==(const CellInstance&, const CellInstance&) = default;
};

// A net endpoint. An empty pin names a top-level port instead of a cell pin.
struct PinRef {
  std::string object;
  std::string pin;

  bool is_port() const { return pin.empty(); }
  std::string str() const { return pin.empty() ? object : object + "." + pin; }

  friend bool operator==(const PinRef&, const PinRef&) = default;
};

struct Net {
  std::string name;
  PinRef driver;
  std::vector<PinRef> loads;

  friend bool operator==(const Net&, const Net&) = default;
};

enum class PortDir { In, Out };

struct Port {
  std::string name;
  PortDir dir = PortDir::In;
  double vdd = 0.0;

  friend bool operator==(const Port&, const Port&) = default;
};

// Pin name through which a cell's sleep device gate is driven.
inline constexpr std::string_view kSleepPin = "SLPB";

struct Design {
  std::vector<Island> islands;
  std::vector<CellInstance> cells;
  std::vector<Net> nets;
  std::vector<Port> ports;

  const Island* find_island(std::string_view name) const;
  const CellInstance* find_cell(std::string_view name) const;
  const Net* find_net(std::string_view name) const;
  const Port* find_port(std::string_view name) const;
  Island* find_island(std::string_view name);
  CellInstance* find_cell(std::string_view name);
  Net* find_net(std::string_view name);

  // The single kind=pim cell, if any.
  const CellInstance* power_manager() const;

  friend bool operator==(const Design&, const Design&) = default;
};

struct DesignError {
  std::string object;  // e.g. "net n1"
  std::string rule;    // e.g. "unresolved driver"

  std::string message() const { return object + ": " + rule; }
  friend bool operator==(const DesignError&, const DesignError&) = default;
};

// Empty iff every referential and value invariant holds.
std::vector<DesignError> validate_design(const Design& design);

// Parses the netlist and intent texts. Throws ParseError carrying the line of
// the offending statement, including for validation failures.
Design parse_design(std::string_view netlist_text, std::string_view intent_text);

std::string serialize_netlist(const Design& design);
std::string serialize_intent(const Design& design);

}  // namespace pwr
