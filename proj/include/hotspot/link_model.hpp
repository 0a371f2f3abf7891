#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hotspot/power_model.hpp"
#include "hotspot/units.hpp"

namespace hotspot {

using ClientId = std::string;

/// Unitless fixed-point value in parts per million: link quality, battery
/// level, WFQ weight. 1'000'000 == 1.0.
using Ratio = Quantity<struct RatioTag>;

constexpr Ratio ratio_ppm(std::int64_t ppm) { return Ratio{ppm}; }
inline constexpr Ratio kRatioOne{1'000'000};

struct LinkStep {
  Micros start;
  BitRate throughput;
  Ratio quality;

  bool operator==(const LinkStep&) const = default;
};

/// Piecewise-constant channel conditions for one (client, interface) pair.
struct LinkTrace {
  ClientId client;
  InterfaceKind interface = InterfaceKind::wlan();
  std::vector<LinkStep> steps;

  bool operator==(const LinkTrace&) const = default;
};

std::vector<std::string> validate_trace(const LinkTrace& trace);

/// Index of the step whose left-closed interval contains t. Times past the
/// last step clamp to it.
std::size_t step_index_at(const LinkTrace& trace, Micros t);
BitRate throughput_at(const LinkTrace& trace, Micros t);
Ratio quality_at(const LinkTrace& trace, Micros t);

/// Completion time of a fluid transfer of `bytes` that starts at `start` and
/// always moves at the trace's current throughput. nullopt if the trace never
/// delivers that many bits (throughput drops to 0 for good).
std::optional<Micros> transfer_end(const LinkTrace& trace, Micros start, std::int64_t bytes);

/// Bits the trace can carry over [from, to), scaled by 1e6 (bit-seconds in
/// microsecond units) so the result stays integral.
__int128 capacity_scaled(const LinkTrace& trace, Micros from, Micros to);

struct SelectionPolicy {
  Ratio quality_floor = ratio_ppm(500'000);
  Ratio hysteresis_margin = ratio_ppm(100'000);
  Micros min_dwell = seconds(5);
  /// Cheapest energy per bit first. Empty means "derive from the models".
  std::vector<InterfaceKind> preference;

  bool operator==(const SelectionPolicy&) const = default;
};

std::vector<std::string> validate_policy(const SelectionPolicy& policy);

/// Interfaces ordered by active power / active throughput, ascending. Ties
/// fall back to the interface label.
std::vector<InterfaceKind> default_preference(const std::map<InterfaceKind, WnicModel>& models);

using InterfaceTraces = std::map<InterfaceKind, LinkTrace>;

/// Picks the interface to carry a transfer needing `required` bits/s at t.
///
/// The candidate is the first interface in preference order that meets both
/// the rate and the quality floor. A qualifying `current` interface is kept
/// while it is inside its dwell window or while the candidate's quality lead
/// is below the hysteresis margin. Throws NoViableInterface if nothing
/// qualifies.
InterfaceKind select_interface(const InterfaceTraces& traces, Micros t, BitRate required,
                               const SelectionPolicy& policy,
                               const std::optional<InterfaceKind>& current, Micros last_switch);

}  // namespace hotspot
