#pragma once

// Power-domain crossing analysis and repair.

#include <string>
#include <string_view>
#include <vector>

#include "pwr/design.hpp"

namespace pwr {

enum class CrossingKind { NeedsLevelShifter, NeedsIsolation };

std::string_view to_string(CrossingKind kind);

struct CrossingIssue {
  std::string net;
  std::string driver_island;
  std::string receiver_island;
  CrossingKind kind = CrossingKind::NeedsLevelShifter;
  std::string rationale;

  friend bool operator==(const CrossingIssue&, const CrossingIssue&) = default;
};

struct CrossingOptions {
  // Libraries with transmission-gate inputs also need down shifters.
  bool assume_transmission_gates = false;
};

// One issue per (net, receiver island, rule). A net is followed through any
// level shifter or isolation cells it feeds; a path counts as protected only
// if the matching cell is on it. Nets driven by ports or by boundary cells,
// port loads, and sleep-pin loads are not crossings.
std::vector<CrossingIssue> analyze_crossings(const Design& design, const CrossingOptions& options = {});

// Splices one cell per issue into the net at the receiver side. Inserted
// cells belong to the receiver island and are named ls_<net> / iso_<net>
// (suffixed with _<island> when a net needs the same fix in several islands).
Design apply_power_fixes(const Design& design, const std::vector<CrossingIssue>& issues);

// Connects the sleep pin of every std/retff/sram cell in a switchable island
// to net slpb_<island>, driven by the pim cell or else a new input port.
// Idempotent.
Design insert_sleep_pins(const Design& design, std::string_view island);

enum class ViolationKind { Crossing, MissingSleepPin };

struct Violation {
  ViolationKind kind = ViolationKind::Crossing;
  std::string object;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Crossing issues plus cells in switchable islands that lack a sleep pin.
std::vector<Violation> verify_power_intent(const Design& design, const CrossingOptions& options = {});

// True for cells that receive a sleep device when their island is switchable.
inline bool takes_sleep_pin(CellKind kind) { return !is_boundary_cell(kind) && kind != CellKind::Pim; }

}  // namespace pwr
