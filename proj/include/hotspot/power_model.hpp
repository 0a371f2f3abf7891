#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hotspot/units.hpp"

namespace hotspot {

/// Identifies a radio technology. WLAN and Bluetooth are the two families the
/// resource manager knows about; anything else keeps its own label.
class InterfaceKind {
 public:
  enum class Family { Wlan, Bluetooth, Other };

  static InterfaceKind wlan() { return InterfaceKind{Family::Wlan, "wlan"}; }
  static InterfaceKind bluetooth() { return InterfaceKind{Family::Bluetooth, "bluetooth"}; }
  static InterfaceKind other(std::string label);
  /// "wlan" and "bluetooth" map to their families, any other label to Other.
  static InterfaceKind from_label(std::string_view label);

  Family family() const { return family_; }
  const std::string& label() const { return label_; }

  bool operator==(const InterfaceKind& other) const { return label_ == other.label_; }
  auto operator<=>(const InterfaceKind& other) const { return label_ <=> other.label_; }

 private:
  InterfaceKind(Family family, std::string label) : family_(family), label_(std::move(label)) {}

  Family family_;
  std::string label_;
};

struct PowerState {
  std::string name;
  Milliwatts power;
  bool can_transfer = false;

  bool operator==(const PowerState&) const = default;
};

/// Lump cost of one state change: how long it takes and how much energy it
/// burns in total. No power level is attached to the latency window.
struct TransitionCost {
  Micros latency;
  Nanojoules energy;

  bool operator==(const TransitionCost&) const = default;
};

using StatePair = std::pair<std::string, std::string>;

/// Power-state machine of one wireless interface.
struct WnicModel {
  InterfaceKind kind = InterfaceKind::wlan();
  std::vector<PowerState> states;
  /// Direct pairs only; a missing pair means the hop is not allowed.
  std::map<StatePair, TransitionCost> transitions;
  BitRate active_throughput;
  /// Entered between bursts.
  std::string sleep_state;
  /// Held for the whole horizon by the always-listening baseline.
  std::string idle_state;

  const PowerState* find_state(std::string_view name) const;
  /// The unique can_transfer state. Throws ModelError if there is none.
  const PowerState& active_state() const;
  /// Throws ModelError for unknown names.
  Milliwatts power_of(std::string_view name) const;

  bool operator==(const WnicModel&) const = default;
};

/// Returns every violated invariant; an empty list means the model is usable.
/// Messages start with a stable tag ("negative power", "unknown state",
/// "no transition", ...) followed by detail.
std::vector<std::string> validate_model(const WnicModel& model);

Nanojoules energy_of_interval(const WnicModel& model, std::string_view state, Micros duration);

TransitionCost transition_cost(const WnicModel& model, std::string_view from, std::string_view to);

/// Name used in time-in-state maps for the pseudo-state covering a
/// transition's latency window. It draws no power of its own.
inline constexpr std::string_view kTransitionState = "transition";

/// One piece of a state timeline. Transition windows carry the source state in
/// `from` and the destination in `state`; steady intervals leave `from` empty.
struct StateInterval {
  Micros start;
  Micros end;
  std::string state;
  std::string from;

  bool is_transition() const { return !from.empty(); }
  Micros duration() const { return end - start; }

  bool operator==(const StateInterval&) const = default;
};

using StateTimeline = std::vector<StateInterval>;

struct TransitionEvent {
  Micros time;
  std::string from;
  std::string to;

  bool operator==(const TransitionEvent&) const = default;
};

/// Throws ValidationError unless intervals are non-empty, contiguous and
/// ordered.
void check_contiguous(const StateTimeline& timeline);

/// Contiguity plus coverage of exactly [0, horizon].
void check_coverage(const StateTimeline& timeline, Micros horizon);

/// A single idle_state interval over [0, horizon]; empty when horizon is 0.
StateTimeline baseline_timeline(const WnicModel& model, Micros horizon);

/// Sum of steady-state energy over the intervals plus the lump energy of each
/// transition taken. Transition windows contribute nothing by themselves.
/// Throws ValidationError when the transition list does not line up with the
/// timeline's boundaries.
Nanojoules timeline_energy(const WnicModel& model, const StateTimeline& timeline,
                           std::span<const TransitionEvent> transitions);

/// Time spent per state; transition windows are keyed by kTransitionState.
std::map<std::string, Micros> time_in_state(const StateTimeline& timeline);

}  // namespace hotspot
