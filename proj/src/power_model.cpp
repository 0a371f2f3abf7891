#include "hotspot/power_model.hpp"

#include <algorithm>
#include <set>

#include "hotspot/error.hpp"

namespace hotspot {

InterfaceKind InterfaceKind::other(std::string label) {
  return InterfaceKind{Family::Other, std::move(label)};
}

InterfaceKind InterfaceKind::from_label(std::string_view label) {
  if (label == "wlan") return wlan();
  if (label == "bluetooth") return bluetooth();
  return other(std::string(label));
}

const PowerState* WnicModel::find_state(std::string_view name) const {
  auto it = std::find_if(states.begin(), states.end(),
                         [&](const PowerState& s) { return s.name == name; });
  return it == states.end() ? nullptr : &*it;
}

const PowerState& WnicModel::active_state() const {
  auto it = std::find_if(states.begin(), states.end(),
                         [](const PowerState& s) { return s.can_transfer; });
  if (it == states.end()) {
    throw ModelError("model for '" + kind.label() + "' has no transfer state");
  }
  return *it;
}

Milliwatts WnicModel::power_of(std::string_view name) const {
  const PowerState* s = find_state(name);
  if (s == nullptr) {
    throw ModelError("unknown state '" + std::string(name) + "' in model for '" + kind.label() +
                     "'");
  }
  return s->power;
}

std::vector<std::string> validate_model(const WnicModel& model) {
  std::vector<std::string> violations;
  if (model.kind.label().empty()) {
    violations.emplace_back("empty interface label");
  }
  if (model.states.empty()) {
    violations.emplace_back("no states");
  }

  std::set<std::string> names;
  int transfer_states = 0;
  for (const auto& s : model.states) {
    if (!names.insert(s.name).second) {
      violations.push_back("duplicate state: '" + s.name + "'");
    }
    if (s.name.empty() || s.name == kTransitionState) {
      violations.push_back("reserved state name: '" + s.name + "'");
    }
    if (s.power < Milliwatts{0}) {
      violations.push_back("negative power: state '" + s.name + "'");
    }
    if (s.can_transfer) ++transfer_states;
  }
  if (transfer_states != 1) {
    violations.push_back("transfer state count: expected exactly one, found " +
                         std::to_string(transfer_states));
  }
  if (model.active_throughput <= BitRate{0}) {
    violations.emplace_back("non-positive throughput");
  }

  const bool sleep_known = names.contains(model.sleep_state);
  if (!sleep_known) {
    violations.push_back("unknown state: sleep_state '" + model.sleep_state + "'");
  }
  if (!names.contains(model.idle_state)) {
    violations.push_back("unknown state: idle_state '" + model.idle_state + "'");
  }

  for (const auto& [pair, cost] : model.transitions) {
    const std::string label = "'" + pair.first + "' -> '" + pair.second + "'";
    if (!names.contains(pair.first) || !names.contains(pair.second)) {
      violations.push_back("unknown state: transition " + label);
    }
    if (cost.latency < Micros{0}) violations.push_back("negative latency: transition " + label);
    if (cost.energy < Nanojoules{0}) violations.push_back("negative energy: transition " + label);
  }

  if (sleep_known && transfer_states == 1) {
    const std::string& active = model.active_state().name;
    if (active != model.sleep_state) {
      for (const auto& pair : {StatePair{model.sleep_state, active},
                               StatePair{active, model.sleep_state}}) {
        if (!model.transitions.contains(pair)) {
          violations.push_back("no transition: '" + pair.first + "' -> '" + pair.second + "'");
        }
      }
    }
  }
  return violations;
}

Nanojoules energy_of_interval(const WnicModel& model, std::string_view state, Micros duration) {
  if (duration < Micros{0}) {
    throw ValidationError("negative interval duration");
  }
  return model.power_of(state) * duration;
}

TransitionCost transition_cost(const WnicModel& model, std::string_view from, std::string_view to) {
  if (model.find_state(from) == nullptr || model.find_state(to) == nullptr) {
    throw ModelError("unknown state in transition '" + std::string(from) + "' -> '" +
                     std::string(to) + "'");
  }
  if (from == to) return {};
  auto it = model.transitions.find(StatePair{std::string(from), std::string(to)});
  if (it == model.transitions.end()) {
    throw ModelError("no transition '" + std::string(from) + "' -> '" + std::string(to) +
                     "' in model for '" + model.kind.label() + "'");
  }
  return it->second;
}

void check_contiguous(const StateTimeline& timeline) {
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    const auto& iv = timeline[i];
    if (iv.end <= iv.start) {
      throw ValidationError("timeline interval " + std::to_string(i) + " is empty or reversed");
    }
    if (i > 0 && timeline[i - 1].end != iv.start) {
      throw ValidationError("timeline gap or overlap at interval " + std::to_string(i));
    }
  }
}

void check_coverage(const StateTimeline& timeline, Micros horizon) {
  check_contiguous(timeline);
  if (timeline.empty()) {
    if (horizon != Micros{0}) throw ValidationError("empty timeline for non-zero horizon");
    return;
  }
  if (timeline.front().start != Micros{0}) {
    throw ValidationError("timeline does not start at 0");
  }
  if (timeline.back().end != horizon) {
    throw ValidationError("timeline does not end at the horizon");
  }
}

StateTimeline baseline_timeline(const WnicModel& model, Micros horizon) {
  if (horizon < Micros{0}) throw ValidationError("negative horizon");
  if (horizon == Micros{0}) return {};
  return {StateInterval{Micros{0}, horizon, model.idle_state, {}}};
}

namespace {

// The interval starting at `time`, or nullptr.
const StateInterval* interval_starting_at(const StateTimeline& timeline, Micros time) {
  auto it = std::lower_bound(timeline.begin(), timeline.end(), time,
                             [](const StateInterval& iv, Micros t) { return iv.start < t; });
  return (it != timeline.end() && it->start == time) ? &*it : nullptr;
}

void check_transitions_line_up(const StateTimeline& timeline,
                               std::span<const TransitionEvent> transitions) {
  std::set<Micros::rep> event_times;
  for (const auto& ev : transitions) {
    const std::string what = "transition '" + ev.from + "' -> '" + ev.to + "' at " +
                             std::to_string(ev.time.count()) + " us";
    const StateInterval* next = interval_starting_at(timeline, ev.time);
    if (next == nullptr) {
      throw ValidationError(what + " does not fall on a timeline boundary");
    }
    const bool windowed = next->is_transition() && next->from == ev.from && next->state == ev.to;
    const bool instant = !next->is_transition() && next->state == ev.to;
    if (!windowed && !instant) {
      throw ValidationError(what + " does not match the following interval");
    }
    if (next != &timeline.front()) {
      const StateInterval& prev = *(next - 1);
      if (prev.is_transition() || prev.state != ev.from) {
        throw ValidationError(what + " does not match the preceding interval");
      }
    }
    event_times.insert(ev.time.count());
  }
  // Every window that opens inside this timeline must have its event. A
  // leading window may continue a transition taken before the timeline.
  for (std::size_t i = 1; i < timeline.size(); ++i) {
    if (timeline[i].is_transition() && !event_times.contains(timeline[i].start.count())) {
      throw ValidationError("transition window at " + std::to_string(timeline[i].start.count()) +
                            " us has no transition event");
    }
  }
}

}  // namespace

Nanojoules timeline_energy(const WnicModel& model, const StateTimeline& timeline,
                           std::span<const TransitionEvent> transitions) {
  check_contiguous(timeline);
  check_transitions_line_up(timeline, transitions);

  Nanojoules total{0};
  for (const auto& iv : timeline) {
    if (iv.is_transition()) continue;
    total += energy_of_interval(model, iv.state, iv.duration());
  }
  for (const auto& ev : transitions) {
    total += transition_cost(model, ev.from, ev.to).energy;
  }
  return total;
}

std::map<std::string, Micros> time_in_state(const StateTimeline& timeline) {
  std::map<std::string, Micros> out;
  for (const auto& iv : timeline) {
    out[iv.is_transition() ? std::string(kTransitionState) : iv.state] += iv.duration();
  }
  return out;
}

}  // namespace hotspot
