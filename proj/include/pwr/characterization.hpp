#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pwr {

// One measured operating point of a block class.
struct OperatingPoint {
  std::string island_class;
  double vdd = 0.0;
  double fmax_mhz = 0.0;
  double area_um2 = 0.0;
  double cap_factor = 1.0;  // switched capacitance relative to the 1.2 V build

  friend bool operator==(const OperatingPoint&, const OperatingPoint&) = default;
};

struct CharTable {
  std::vector<OperatingPoint> rows;

  std::vector<const OperatingPoint*> rows_for(std::string_view island_class) const;
  const OperatingPoint* find(std::string_view island_class, double vdd) const;
};

// Reads `op` lines. `calib` lines belong to the calibration table and are
// skipped here; see parse_calibration.
CharTable parse_characterization(std::string_view text);

}  // namespace pwr
