#include "pwr/pim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwr/errors.hpp"
#include "pwr/text_format.hpp"

namespace pwr {

namespace {

constexpr std::pair<PimEvent, std::string_view> kEventNames[] = {
    {PimEvent::WriteSleep, "WRITE_SLEEP"},   {PimEvent::IsoOn, "ISO=1"},
    {PimEvent::SaveDone, "SAVE_DONE"},       {PimEvent::BiasOn, "BIAS=1"},
    {PimEvent::BiasOff, "BIAS=0"},           {PimEvent::RestoreDone, "RESTORE_DONE"},
    {PimEvent::IsoOff, "ISO=0"},             {PimEvent::StatusReady, "STATUS=ready"},
    {PimEvent::StatusBusy, "STATUS=busy"},   {PimEvent::StatusSleeping, "STATUS=sleeping"},
};

void begin_entry(PimState& s) {
  s.fsm = PimFsm::IsoOn;
  s.status_ready = false;
  s.deadline = s.now + s.config.t_iso_on;
}

void begin_exit(PimState& s) {
  s.fsm = PimFsm::BiasOff;
  s.status_ready = false;
  s.deadline = s.now + s.config.t_bias_off;
}

bool in_transition(const PimState& s) { return s.fsm != PimFsm::Active && s.fsm != PimFsm::Sleep; }

// Performs the step due at s.deadline.
void step(PimState& s, std::vector<TraceEvent>& events) {
  s.now = s.deadline;
  auto emit = [&](PimEvent e) { events.push_back({s.now, e}); };
  switch (s.fsm) {
    case PimFsm::IsoOn:
      s.signals.iso = true;
      emit(PimEvent::IsoOn);
      s.fsm = PimFsm::Saving;
      s.deadline = s.now + s.config.t_save;
      break;
    case PimFsm::Saving:
      if (!s.signals.ret_saved) {
        s.signals.ret_saved = true;
        emit(PimEvent::SaveDone);
        s.deadline = s.now + s.config.t_bias_on;
      } else {
        s.signals.slpb_bias_on = true;
        emit(PimEvent::BiasOn);
        s.fsm = PimFsm::Sleep;
        if (!s.sleep_request) begin_exit(s);
      }
      break;
    case PimFsm::BiasOff:
      s.signals.slpb_bias_on = false;
      emit(PimEvent::BiasOff);
      s.fsm = PimFsm::Restoring;
      s.deadline = s.now + s.config.t_restore;
      break;
    case PimFsm::Restoring:
      s.signals.ret_saved = false;
      emit(PimEvent::RestoreDone);
      s.fsm = PimFsm::IsoOff;
      s.deadline = s.now + s.config.t_iso_off;
      break;
    case PimFsm::IsoOff:
      s.signals.iso = false;
      emit(PimEvent::IsoOff);
      s.fsm = PimFsm::Active;
      s.status_ready = true;
      emit(PimEvent::StatusReady);
      if (s.sleep_request) begin_entry(s);
      break;
    case PimFsm::Active:
    case PimFsm::Sleep:
      break;
  }
}

}  // namespace

void PimConfig::validate() const {
  for (double t : {t_iso_on, t_save, t_bias_on, t_bias_off, t_restore, t_iso_off})
    if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("step times must be non-negative");
}

std::string_view to_string(PimFsm fsm) {
  switch (fsm) {
    case PimFsm::Active: return "ACTIVE";
    case PimFsm::IsoOn: return "ISO_ON";
    case PimFsm::Saving: return "SAVING";
    case PimFsm::Sleep: return "SLEEP";
    case PimFsm::BiasOff: return "BIAS_OFF";
    case PimFsm::Restoring: return "RESTORING";
    case PimFsm::IsoOff: return "ISO_OFF";
  }
  return "ACTIVE";
}

std::string_view to_string(PimStatus status) {
  switch (status) {
    case PimStatus::Ready: return "ready";
    case PimStatus::Busy: return "busy";
    case PimStatus::Sleeping: return "sleeping";
  }
  return "busy";
}

std::string_view to_string(PimEvent event) {
  for (auto [e, name] : kEventNames)
    if (e == event) return name;
  return "?";
}

std::optional<PimEvent> pim_event_from_string(std::string_view text) {
  for (auto [e, name] : kEventNames)
    if (name == text) return e;
  return std::nullopt;
}

PimState pim_new(const PimConfig& config) {
  config.validate();
  PimState s;
  s.config = config;
  return s;
}

PimState pim_write_sleep(const PimState& state, std::optional<bool> value) {
  PimState s = state;
  if (s.config.explicit_bit) {
    if (!value) throw PreconditionError("explicit_bit mode needs a 0 or 1 write value");
    s.sleep_request = *value;
  } else {
    s.sleep_request = !s.sleep_request;
  }
  if (s.fsm == PimFsm::Active && s.sleep_request)
    begin_entry(s);
  else if (s.fsm == PimFsm::Sleep && !s.sleep_request)
    begin_exit(s);
  return s;
}

PimStatus pim_read_status(const PimState& s) {
  if (s.fsm == PimFsm::Active) return PimStatus::Ready;
  if (s.fsm == PimFsm::Sleep) return PimStatus::Sleeping;
  return PimStatus::Busy;
}

std::pair<PimState, std::vector<TraceEvent>> pim_advance(const PimState& state, double dt_ns) {
  if (!(dt_ns >= 0.0)) throw PreconditionError("cannot advance by a negative time");
  PimState s = state;
  std::vector<TraceEvent> events;
  const double target = s.now + dt_ns;
  // Deadlines are sums of step times; absorb their rounding.
  const double slack = 1e-9 * std::max(1.0, std::abs(target));
  while (in_transition(s) && s.deadline <= target + slack) step(s, events);
  s.now = target;
  return {std::move(s), std::move(events)};
}

std::vector<PimCommand> parse_pim_script(std::string_view text) {
  std::vector<PimCommand> script;
  for (const auto& line : text::tokenize(text)) {
    const auto& kw = line.tokens[0];
    if (kw.text != "at") throw ParseError("expected 'at'", line.number, kw.column, kw.text);
    if (line.tokens.size() < 3) throw ParseError("expected 'at <ns> <command>'", line.number, kw.column);
    PimCommand cmd;
    cmd.time_ns = text::parse_double(line.tokens[1], line);
    if (cmd.time_ns < 0.0) throw ParseError("negative time", line.number, line.tokens[1].column, line.tokens[1].text);
    const auto& what = line.tokens[2];
    std::size_t expected = 3;
    if (what.text == "write_sleep") {
      cmd.kind = PimCommandKind::WriteSleep;
      if (line.tokens.size() == 4) {
        cmd.value = text::parse_flag(line.tokens[3], line);
        expected = 4;
      }
    } else if (what.text == "read_status") {
      cmd.kind = PimCommandKind::ReadStatus;
    } else {
      throw ParseError("unknown command", line.number, what.column, what.text);
    }
    if (line.tokens.size() != expected)
      throw ParseError("unexpected token", line.number, line.tokens[expected].column, line.tokens[expected].text);
    if (!script.empty() && cmd.time_ns < script.back().time_ns)
      throw ParseError("timestamps must not decrease", line.number, line.tokens[1].column, line.tokens[1].text);
    script.push_back(cmd);
  }
  return script;
}

Trace pim_run_script(const PimConfig& config, const std::vector<PimCommand>& script) {
  PimState s = pim_new(config);
  Trace trace;
  auto advance_to = [&](double t) {
    auto [next, events] = pim_advance(s, t - s.now);
    s = std::move(next);
    trace.insert(trace.end(), events.begin(), events.end());
  };
  for (const auto& cmd : script) {
    if (cmd.time_ns < s.now) throw PreconditionError("script timestamps must not decrease");
    advance_to(cmd.time_ns);
    if (cmd.kind == PimCommandKind::WriteSleep) {
      trace.push_back({s.now, PimEvent::WriteSleep});
      s = pim_write_sleep(s, config.explicit_bit ? std::optional<bool>(cmd.value.value_or(!s.sleep_request))
                                                 : std::nullopt);
      advance_to(s.now);
    } else {
      switch (pim_read_status(s)) {
        case PimStatus::Ready: trace.push_back({s.now, PimEvent::StatusReady}); break;
        case PimStatus::Busy: trace.push_back({s.now, PimEvent::StatusBusy}); break;
        case PimStatus::Sleeping: trace.push_back({s.now, PimEvent::StatusSleeping}); break;
      }
    }
  }
  return trace;
}

std::string format_trace(const Trace& trace) {
  std::string out;
  for (const auto& e : trace) {
    out += text::format_number(e.time_ns);
    out += ' ';
    out += to_string(e.event);
    out += '\n';
  }
  return out;
}

Trace parse_trace(std::string_view text) {
  Trace trace;
  for (const auto& line : text::tokenize(text)) {
    if (line.tokens.size() != 2) throw ParseError("expected '<ns> <EVENT>'", line.number, line.tokens[0].column);
    TraceEvent e;
    e.time_ns = text::parse_double(line.tokens[0], line);
    auto ev = pim_event_from_string(line.tokens[1].text);
    if (!ev) throw ParseError("unknown trace event", line.number, line.tokens[1].column, line.tokens[1].text);
    e.event = *ev;
    trace.push_back(e);
  }
  return trace;
}

std::string format_vcd(const Trace& trace) {
  std::ostringstream out;
  out << "$timescale 1ns $end\n"
      << "$scope module pim $end\n"
      << "$var wire 1 ! iso $end\n"
      << "$var wire 1 \" slpb_bias $end\n"
      << "$var wire 1 # ret_saved $end\n"
      << "$upscope $end\n"
      << "$enddefinitions $end\n"
      << "#0\n$dumpvars\n0!\n0\"\n0#\n$end\n";
  long long last_time = 0;
  for (const auto& e : trace) {
    char id = 0;
    char value = 0;
    switch (e.event) {
      case PimEvent::IsoOn: id = '!'; value = '1'; break;
      case PimEvent::IsoOff: id = '!'; value = '0'; break;
      case PimEvent::BiasOn: id = '"'; value = '1'; break;
      case PimEvent::BiasOff: id = '"'; value = '0'; break;
      case PimEvent::SaveDone: id = '#'; value = '1'; break;
      case PimEvent::RestoreDone: id = '#'; value = '0'; break;
      default: continue;
    }
    const long long t = std::llround(e.time_ns);
    if (t != last_time) {
      out << '#' << t << '\n';
      last_time = t;
    }
    out << value << id << '\n';
  }
  return out.str();
}

}  // namespace pwr
