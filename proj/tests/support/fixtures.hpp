#pragma once

#include "pwr/design.hpp"
#include "support/data.hpp"

namespace pwr::testing {

inline Design load_fixture(const std::string& netlist, const std::string& intent) {
  return parse_design(read_fixture(netlist), read_fixture(intent));
}

}  // namespace pwr::testing
