#include "pwr/characterization.hpp"

#include <cmath>

#include "pwr/errors.hpp"
#include "pwr/text_format.hpp"

namespace pwr {

namespace {
bool same_voltage(double a, double b) { return std::abs(a - b) <= 1e-9; }
}  // namespace

std::vector<const OperatingPoint*> CharTable::rows_for(std::string_view island_class) const {
  std::vector<const OperatingPoint*> out;
  for (const auto& r : rows)
    if (r.island_class == island_class) out.push_back(&r);
  return out;
}

const OperatingPoint* CharTable::find(std::string_view island_class, double vdd) const {
  for (const auto& r : rows)
    if (r.island_class == island_class && same_voltage(r.vdd, vdd)) return &r;
  return nullptr;
}

CharTable parse_characterization(std::string_view text) {
  CharTable table;
  for (const auto& line : text::tokenize(text)) {
    const auto& kw = line.tokens[0];
    if (kw.text == "calib") continue;
    if (kw.text != "op")
      throw ParseError("unexpected statement in characterization file", line.number, kw.column, kw.text);
    if (line.tokens.size() < 2) throw ParseError("missing island class", line.number, kw.column);
    text::Attributes attrs(line, 2);
    OperatingPoint op;
    op.island_class = line.tokens[1].text;
    op.vdd = attrs.number("vdd");
    op.fmax_mhz = attrs.number("fmax_mhz");
    op.area_um2 = attrs.number("area_um2");
    op.cap_factor = attrs.number("cap_factor");
    attrs.finish();
    if (!(op.vdd > 0.0)) throw ParseError("vdd must be positive", line.number);
    if (!(op.fmax_mhz > 0.0)) throw ParseError("fmax_mhz must be positive", line.number);
    if (!(op.area_um2 > 0.0)) throw ParseError("area_um2 must be positive", line.number);
    if (!(op.cap_factor > 0.0)) throw ParseError("cap_factor must be positive", line.number);
    if (table.find(op.island_class, op.vdd))
      throw ParseError("duplicate operating point for class", line.number, line.tokens[1].column,
                       op.island_class + " @ " + text::format_number(op.vdd) + " V");
    table.rows.push_back(std::move(op));
  }
  return table;
}

}  // namespace pwr
