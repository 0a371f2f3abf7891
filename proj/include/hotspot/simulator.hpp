#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hotspot/link_model.hpp"
#include "hotspot/power_model.hpp"
#include "hotspot/scheduler.hpp"
#include "hotspot/units.hpp"

namespace hotspot {

struct ClientConfig {
  ClientId id;
  /// Names into Scenario::models; one model per interface kind.
  std::vector<std::string> models;
  /// Recorded and reported; no shipped policy reads it.
  Ratio battery_level = kRatioOne;

  bool operator==(const ClientConfig&) const = default;
};

enum class SchedulerKind { Edf, Wfq };

std::string to_string(SchedulerKind kind);
SchedulerKind scheduler_kind_from_string(std::string_view name);

struct SchedulerConfig {
  SchedulerKind kind = SchedulerKind::Edf;
  std::map<ClientId, Ratio> weights;
  /// Overrides the per-stream default burst size when set.
  std::optional<std::int64_t> burst_bytes;

  bool operator==(const SchedulerConfig&) const = default;
};

struct Scenario {
  Micros horizon;
  BitRate capacity;
  std::map<std::string, WnicModel> models;
  std::vector<ClientConfig> clients;
  std::vector<StreamSpec> streams;
  std::vector<LinkTrace> links;
  SchedulerConfig scheduler;
  SelectionPolicy policy;

  bool operator==(const Scenario&) const = default;
};

/// Throws ValidationError listing every problem found.
void validate_scenario(const Scenario& scenario);

/// Models of one client keyed by interface kind.
std::map<InterfaceKind, WnicModel> client_models(const Scenario& scenario, const ClientId& client);

using InterfaceKey = std::pair<ClientId, InterfaceKind>;

struct InterfaceEnergy {
  std::map<std::string, Micros> time_in_state;
  int transition_count = 0;
  Nanojoules energy;
};

struct EnergyReport {
  Micros horizon;
  std::map<InterfaceKey, InterfaceEnergy> entries;

  Nanojoules total() const;
  Nanojoules client_total(const ClientId& client) const;
  std::vector<ClientId> clients() const;
  /// energy / horizon, rounded to 1e-6 mW and scaled by 1e6. Zero when the
  /// horizon is zero. The exact value is the rational energy / horizon.
  static std::int64_t average_power_micro_mw(Nanojoules energy, Micros horizon);
};

struct StartupLatency {
  ClientId client;
  std::optional<Micros> latency;
  bool violated = false;
};

struct QosReport {
  std::vector<UnderflowEvent> underflows;
  std::vector<StartupLatency> startup;
  std::vector<DeadlineMiss> misses;
  std::vector<BurstFailure> failures;
  std::vector<InterfaceSwitch> switches;
  std::vector<OverflowEvent> overflows;
  std::vector<ClientId> rejected;

  /// Underflows, startup violations, deadline misses, failed bursts and
  /// rejected clients. Deferred overflow bytes are not counted.
  std::size_t violation_count() const;
};

struct InterfaceTimeline {
  StateTimeline states;
  std::vector<TransitionEvent> transitions;
};

struct RunResult {
  ScheduleResult scheduled;
  EnergyReport energy;
  QosReport qos;
  std::map<InterfaceKey, InterfaceTimeline> timelines;
  std::map<ClientId, Ratio> battery_levels;
};

/// Builds the power timeline of one interface from its bursts: each wake
/// transition ends exactly at burst start, the radio stays in its transfer
/// state for the burst, then goes back to sleep. Gaps too short for a sleep
/// and wake cycle are bridged in the transfer state. Clipped to [0, horizon].
InterfaceTimeline build_timeline(const WnicModel& model, const std::vector<Burst>& bursts,
                                 Micros horizon);

RunResult run(const Scenario& scenario);

/// Every configured interface of every client held in its idle state.
EnergyReport run_baseline(const Scenario& scenario);

/// 1 - scheduled / baseline, kept as the two energies so it can be printed
/// exactly. Undefined when baseline is 0 but scheduled is not.
struct Savings {
  Nanojoules scheduled;
  Nanojoules baseline;

  bool defined() const;
  double fraction() const;
  /// Fraction scaled by 1e6 and rounded; requires defined().
  std::int64_t fraction_ppm() const;
};

struct Comparison {
  std::map<InterfaceKey, Savings> per_interface;
  std::map<ClientId, Savings> per_client;
  Savings total;
};

/// Throws ValidationError if the reports cover different interfaces.
Comparison compare(const EnergyReport& scheduled, const EnergyReport& baseline);

struct PowerSample {
  ClientId client;
  InterfaceKind interface = InterfaceKind::wlan();
  Micros time;
  Milliwatts power;

  bool operator==(const PowerSample&) const = default;
};

/// Step series of power versus time per interface. A transition window is
/// drawn at the higher of its two endpoint levels (the radio is powered while
/// it switches); its energy is still accounted as the model's lump value.
/// Each series ends with a sample at the timeline's end.
std::vector<PowerSample> power_trace(const std::map<InterfaceKey, InterfaceTimeline>& timelines,
                                     const std::map<InterfaceKey, WnicModel>& models);

/// Models keyed like the timelines, for power_trace.
std::map<InterfaceKey, WnicModel> interface_models(const Scenario& scenario);

}  // namespace hotspot
