#include "pwr/activity.hpp"

#include "pwr/errors.hpp"
#include "pwr/text_format.hpp"

namespace pwr {

double ActivityProfile::sa(std::string_view net) const {
  auto it = nets.find(net);
  return it == nets.end() ? 0.0 : it->second.sa;
}

ActivityProfile parse_activity(std::string_view text, double f_clk_mhz, const Design& design) {
  if (!(f_clk_mhz > 0.0)) throw PreconditionError("clock frequency must be positive");
  ActivityProfile profile;
  profile.f_clk_mhz = f_clk_mhz;

  std::map<std::string, int, std::less<>> first_line;
  for (const auto& line : text::tokenize(text)) {
    const auto& kw = line.tokens[0];
    if (kw.text != "net") throw ParseError("unexpected statement in activity file", line.number, kw.column, kw.text);
    if (line.tokens.size() < 2) throw ParseError("missing net name", line.number, kw.column);
    const auto& name = line.tokens[1];
    text::Attributes attrs(line, 2);
    const auto& toggles_tok = attrs.require("toggles");
    std::int64_t toggles = attrs.integer("toggles");
    const auto& duration_tok = attrs.require("duration_ns");
    double duration = attrs.number("duration_ns");
    attrs.finish();

    if (toggles < 0) throw ParseError("negative toggle count", line.number, toggles_tok.column, toggles_tok.text);
    if (!(duration > 0.0))
      throw ParseError("duration must be positive", line.number, duration_tok.column, duration_tok.text);
    if (!design.find_net(name.text)) throw ParseError("unknown net", line.number, name.column, name.text);

    auto& rec = profile.nets[name.text];
    first_line.try_emplace(name.text, line.number);
    rec.toggles += toggles;
    rec.duration_ns += duration;
  }

  for (auto& [name, rec] : profile.nets) {
    // duration_ns * f_MHz / 1000 = clock cycles observed
    const double cycles = rec.duration_ns * f_clk_mhz * 1e-3;
    rec.sa = static_cast<double>(rec.toggles) / cycles;
    if (rec.sa > kMaxSwitchingActivity * (1.0 + 1e-12))
      throw ParseError("switching activity above 2 toggles per cycle for net", first_line[name], 0, name);
  }
  return profile;
}

}  // namespace pwr
