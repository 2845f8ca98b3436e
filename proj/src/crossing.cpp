#include "pwr/crossing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "pwr/errors.hpp"
#include "pwr/text_format.hpp"

namespace pwr {

namespace {

constexpr unsigned kHasShifter = 1u;
constexpr unsigned kHasIso = 2u;

struct ReceiverPath {
  std::string island;
  unsigned protection = 0;
};

class Connectivity {
 public:
  explicit Connectivity(const Design& d) : d_(d) {
    for (std::size_t i = 0; i < d.nets.size(); ++i)
      if (!d.nets[i].driver.is_port()) driven_[d.nets[i].driver.object].push_back(i);
  }

  // Every non-boundary cell reachable from net `root`, with the boundary
  // cells seen on the way.
  std::vector<ReceiverPath> receivers(const Net& root, std::string_view source_island) const {
    std::vector<ReceiverPath> out;
    std::set<std::pair<const Net*, unsigned>> visited;
    walk(root, 0, source_island, visited, out);
    return out;
  }

 private:
  void walk(const Net& net, unsigned protection, std::string_view source_island,
            std::set<std::pair<const Net*, unsigned>>& visited, std::vector<ReceiverPath>& out) const {
    if (!visited.insert({&net, protection}).second) return;
    for (const auto& load : net.loads) {
      if (load.is_port() || load.pin == kSleepPin) continue;
      const CellInstance* cell = d_.find_cell(load.object);
      if (!cell) continue;
      if (is_boundary_cell(cell->kind)) {
        unsigned next = protection;
        if (cell->kind == CellKind::LevelShifter) next |= kHasShifter;
        // An isolation cell inside the source island powers down with it.
        if (cell->kind == CellKind::Iso && cell->island != source_island) next |= kHasIso;
        if (auto it = driven_.find(cell->name); it != driven_.end())
          for (std::size_t idx : it->second) walk(d_.nets[idx], next, source_island, visited, out);
        continue;
      }
      if (cell->island != source_island) out.push_back({cell->island, protection});
    }
  }

  const Design& d_;
  std::unordered_map<std::string, std::vector<std::size_t>> driven_;
};

std::string volts(double v) { return text::format_number(v) + " V"; }

}  // namespace

std::string_view to_string(CrossingKind kind) {
  return kind == CrossingKind::NeedsLevelShifter ? "needs_level_shifter" : "needs_isolation";
}

std::vector<CrossingIssue> analyze_crossings(const Design& d, const CrossingOptions& options) {
  if (auto errors = validate_design(d); !errors.empty())
    throw PreconditionError("design is not valid: " + errors.front().message());

  Connectivity conn(d);
  std::vector<CrossingIssue> issues;
  for (const auto& net : d.nets) {
    if (net.driver.is_port()) continue;
    const CellInstance* driver = d.find_cell(net.driver.object);
    if (is_boundary_cell(driver->kind)) continue;
    const Island* src = d.find_island(driver->island);

    // Receiver islands in first-seen order, with the union of unprotected paths.
    std::vector<std::string> order;
    std::map<std::string, unsigned> missing;
    for (const auto& path : conn.receivers(net, src->name)) {
      auto [it, inserted] = missing.try_emplace(path.island, 0u);
      if (inserted) order.push_back(path.island);
      if (!(path.protection & kHasShifter)) it->second |= kHasShifter;
      if (!(path.protection & kHasIso)) it->second |= kHasIso;
    }

    for (const auto& name : order) {
      const Island* dst = d.find_island(name);
      const unsigned gaps = missing[name];
      const bool up = src->vdd < dst->vdd;
      const bool down = src->vdd > dst->vdd;
      if ((gaps & kHasShifter) && (up || (down && options.assume_transmission_gates))) {
        issues.push_back({net.name, src->name, dst->name, CrossingKind::NeedsLevelShifter,
                          volts(src->vdd) + " driver in " + src->name + " reaches " + volts(dst->vdd) +
                              " receiver in " + dst->name + " without a level shifter"});
      }
      if ((gaps & kHasIso) && src->switchable) {
        issues.push_back({net.name, src->name, dst->name, CrossingKind::NeedsIsolation,
                          "switchable island " + src->name + " drives " + dst->name +
                              " without an isolation cell"});
      }
    }
  }
  return issues;
}

Design apply_power_fixes(const Design& design, const std::vector<CrossingIssue>& issues) {
  Design d = design;

  // Group by (net, receiver) keeping first-seen order.
  struct Group {
    std::string net;
    std::string island;
    bool iso = false;
    bool shifter = false;
  };
  std::vector<Group> groups;
  std::map<std::string, int> fixes_per_net_kind;  // "<kind>/<net>" -> receiver islands
  for (const auto& issue : issues) {
    if (!d.find_net(issue.net)) throw PreconditionError("issue references unknown net " + issue.net);
    if (!d.find_island(issue.receiver_island))
      throw PreconditionError("issue references unknown island " + issue.receiver_island);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.net == issue.net && g.island == issue.receiver_island;
    });
    if (it == groups.end()) {
      groups.push_back({issue.net, issue.receiver_island});
      it = std::prev(groups.end());
    }
    bool& slot = issue.kind == CrossingKind::NeedsIsolation ? it->iso : it->shifter;
    if (slot) throw PreconditionError("duplicate issue for net " + issue.net);
    slot = true;
    ++fixes_per_net_kind[std::string(to_string(issue.kind)) + "/" + issue.net];
  }

  auto unique_cell_name = [&](std::string_view prefix, const Group& g, CrossingKind kind) {
    std::string name = std::string(prefix) + g.net;
    if (fixes_per_net_kind[std::string(to_string(kind)) + "/" + g.net] > 1) name += "_" + g.island;
    if (d.find_cell(name) || d.find_net(name + "_out"))
      throw PreconditionError("generated name " + name + " already exists");
    return name;
  };

  for (const auto& g : groups) {
    // Loads on the net that sit in the receiver island move behind the new cells.
    std::vector<PinRef> moved;
    std::size_t first_pos = 0;
    {
      Net* net = d.find_net(g.net);
      std::vector<PinRef> kept;
      for (const auto& load : net->loads) {
        const CellInstance* cell = load.is_port() ? nullptr : d.find_cell(load.object);
        if (cell && cell->island == g.island && load.pin != kSleepPin) {
          if (moved.empty()) first_pos = kept.size();
          moved.push_back(load);
        } else {
          kept.push_back(load);
        }
      }
      if (moved.empty())
        throw PreconditionError("net " + g.net + " has no direct loads in island " + g.island);
      net->loads = std::move(kept);
    }

    std::vector<std::pair<std::string, CellKind>> chain;
    if (g.iso) chain.emplace_back(unique_cell_name("iso_", g, CrossingKind::NeedsIsolation), CellKind::Iso);
    if (g.shifter)
      chain.emplace_back(unique_cell_name("ls_", g, CrossingKind::NeedsLevelShifter), CellKind::LevelShifter);

    PinRef head{chain.front().first, "A"};
    {
      Net* net = d.find_net(g.net);
      net->loads.insert(net->loads.begin() + static_cast<std::ptrdiff_t>(first_pos), head);
    }
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const auto& [name, kind] = chain[i];
      d.cells.push_back({name, kind, g.island, 0.0, 1, false});
      Net out;
      out.name = name + "_out";
      out.driver = {name, "Y"};
      if (i + 1 < chain.size())
        out.loads.push_back({chain[i + 1].first, "A"});
      else
        out.loads = moved;
      d.nets.push_back(std::move(out));
    }
  }
  return d;
}

Design insert_sleep_pins(const Design& design, std::string_view island_name) {
  const Island* island = design.find_island(island_name);
  if (!island) throw PreconditionError("unknown island " + std::string(island_name));
  if (!island->switchable) throw PreconditionError("island not switchable: " + std::string(island_name));

  Design d = design;
  const std::string net_name = "slpb_" + island->name;

  std::vector<PinRef> wanted;
  for (auto& cell : d.cells) {
    if (cell.island != island->name || !takes_sleep_pin(cell.kind)) continue;
    cell.has_sleep_pin = true;
    wanted.push_back({cell.name, std::string(kSleepPin)});
  }
  if (wanted.empty()) return d;

  Net* net = d.find_net(net_name);
  if (!net) {
    Net created;
    created.name = net_name;
    if (const CellInstance* pim = d.power_manager()) {
      created.driver = {pim->name, net_name};
    } else {
      if (!d.find_port(net_name)) d.ports.push_back({net_name, PortDir::In, island->vdd});
      created.driver = {net_name, {}};
    }
    d.nets.push_back(std::move(created));
    net = &d.nets.back();
  }
  for (auto& ref : wanted)
    if (std::find(net->loads.begin(), net->loads.end(), ref) == net->loads.end()) net->loads.push_back(ref);
  return d;
}

std::vector<Violation> verify_power_intent(const Design& d, const CrossingOptions& options) {
  std::vector<Violation> out;
  for (auto& issue : analyze_crossings(d, options))
    out.push_back({ViolationKind::Crossing, "net " + issue.net,
                   std::string(to_string(issue.kind)) + ": " + issue.rationale});
  for (const auto& cell : d.cells) {
    const Island* island = d.find_island(cell.island);
    if (island->switchable && takes_sleep_pin(cell.kind) && !cell.has_sleep_pin)
      out.push_back({ViolationKind::MissingSleepPin, "cell " + cell.name,
                     "missing sleep pin in switchable island " + island->name});
  }
  return out;
}

}  // namespace pwr
