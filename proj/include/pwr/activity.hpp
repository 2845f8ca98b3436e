#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "pwr/design.hpp"

namespace pwr {

// Highest switching activity accepted: a clock toggles twice per cycle.
inline constexpr double kMaxSwitchingActivity = 2.0;

struct NetActivity {
  std::int64_t toggles = 0;
  double duration_ns = 0.0;
  double sa = 0.0;  // toggles per clock cycle

  friend bool operator==(const NetActivity&, const NetActivity&) = default;
};

// Per-net switching activity, stored as toggles per clock cycle.
struct ActivityProfile {
  double f_clk_mhz = 0.0;
  std::map<std::string, NetActivity, std::less<>> nets;

  // Nets without a record are idle.
  double sa(std::string_view net) const;
};

// Lines are `net <name> toggles=<int> duration_ns=<float>`. Several lines for
// the same net are observation windows and accumulate.
ActivityProfile parse_activity(std::string_view text, double f_clk_mhz, const Design& design);

}  // namespace pwr
