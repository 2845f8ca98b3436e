#pragma once

// Power Island Manager: CPU-visible sleep bit and status, and the sequencing
// of isolation, state retention and sleep bias around it.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pwr {

struct PimConfig {
  double t_iso_on = 20.0;  // ns
  double t_save = 20.0;
  double t_bias_on = 20.0;
  double t_bias_off = 20.0;
  double t_restore = 20.0;
  double t_iso_off = 20.0;
  bool explicit_bit = false;  // write-1 / write-0 instead of toggle

  void validate() const;
  double entry_ns() const { return t_iso_on + t_save + t_bias_on; }
  double exit_ns() const { return t_bias_off + t_restore + t_iso_off; }
};

enum class PimFsm { Active, IsoOn, Saving, Sleep, BiasOff, Restoring, IsoOff };

std::string_view to_string(PimFsm fsm);

struct PimSignals {
  bool iso = false;
  bool slpb_bias_on = false;
  bool ret_saved = false;

  friend bool operator==(const PimSignals&, const PimSignals&) = default;
};

struct PimState {
  PimConfig config;
  PimFsm fsm = PimFsm::Active;
  PimSignals signals;
  bool status_ready = true;
  bool sleep_request = false;
  double now = 0.0;
  double deadline = 0.0;  // time of the next sequencing step while in transition
};

enum class PimStatus { Ready, Busy, Sleeping };

std::string_view to_string(PimStatus status);

enum class PimEvent {
  WriteSleep,
  IsoOn,
  SaveDone,
  BiasOn,
  BiasOff,
  RestoreDone,
  IsoOff,
  StatusReady,
  StatusBusy,
  StatusSleeping,
};

std::string_view to_string(PimEvent event);
std::optional<PimEvent> pim_event_from_string(std::string_view text);

struct TraceEvent {
  double time_ns = 0.0;
  PimEvent event = PimEvent::WriteSleep;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

PimState pim_new(const PimConfig& config);

// Toggles the sleep request (or sets it, with explicit_bit). Starts entry
// from ACTIVE or exit from SLEEP; during a transition the request is latched
// and acted on when the sequence completes.
PimState pim_write_sleep(const PimState& state, std::optional<bool> value = std::nullopt);

PimStatus pim_read_status(const PimState& state);

// Moves time forward by dt, performing every step that falls due on the way.
std::pair<PimState, std::vector<TraceEvent>> pim_advance(const PimState& state, double dt_ns);

enum class PimCommandKind { WriteSleep, ReadStatus };

struct PimCommand {
  double time_ns = 0.0;
  PimCommandKind kind = PimCommandKind::WriteSleep;
  std::optional<bool> value;  // write_sleep 0|1 under explicit_bit
};

// Lines are `at <ns> write_sleep [0|1]` or `at <ns> read_status`.
std::vector<PimCommand> parse_pim_script(std::string_view text);

Trace pim_run_script(const PimConfig& config, const std::vector<PimCommand>& script);

std::string format_trace(const Trace& trace);
Trace parse_trace(std::string_view text);

// Value-change dump of iso, slpb_bias and ret_saved; times round to 1 ns.
std::string format_vcd(const Trace& trace);

}  // namespace pwr
