#include "hotspot/link_model.hpp"

#include <algorithm>
#include <set>

#include "hotspot/error.hpp"

namespace hotspot {

std::vector<std::string> validate_trace(const LinkTrace& trace) {
  std::vector<std::string> violations;
  const std::string where = "link " + trace.client + "/" + trace.interface.label();
  if (trace.steps.empty()) {
    violations.push_back(where + ": no steps");
    return violations;
  }
  if (trace.steps.front().start != Micros{0}) {
    violations.push_back(where + ": first step must start at 0");
  }
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    if (i > 0 && s.start <= trace.steps[i - 1].start) {
      violations.push_back(where + ": step start times must be strictly increasing");
    }
    if (s.throughput < BitRate{0}) violations.push_back(where + ": negative throughput");
    if (s.quality < Ratio{0} || s.quality > kRatioOne) {
      violations.push_back(where + ": quality outside [0, 1]");
    }
  }
  return violations;
}

std::size_t step_index_at(const LinkTrace& trace, Micros t) {
  if (trace.steps.empty()) throw ValidationError("link trace has no steps");
  auto it = std::upper_bound(trace.steps.begin(), trace.steps.end(), t,
                             [](Micros time, const LinkStep& s) { return time < s.start; });
  if (it == trace.steps.begin()) return 0;
  return static_cast<std::size_t>(std::distance(trace.steps.begin(), it)) - 1;
}

BitRate throughput_at(const LinkTrace& trace, Micros t) {
  return trace.steps[step_index_at(trace, t)].throughput;
}

Ratio quality_at(const LinkTrace& trace, Micros t) {
  return trace.steps[step_index_at(trace, t)].quality;
}

__int128 capacity_scaled(const LinkTrace& trace, Micros from, Micros to) {
  __int128 total = 0;
  for (std::size_t i = step_index_at(trace, from); i < trace.steps.size() && from < to; ++i) {
    const Micros step_end = i + 1 < trace.steps.size() ? trace.steps[i + 1].start : Micros::max();
    const Micros piece_end = std::min(step_end, to);
    total += static_cast<__int128>(trace.steps[i].throughput.count()) * (piece_end - from).count();
    from = piece_end;
  }
  return total;
}

std::optional<Micros> transfer_end(const LinkTrace& trace, Micros start, std::int64_t bytes) {
  // Work in bits * 1e6 so that throughput (bit/s) * duration (us) is exact.
  __int128 remaining = static_cast<__int128>(bytes) * 8 * 1'000'000;
  if (remaining <= 0) return start;
  Micros t = start;
  for (std::size_t i = step_index_at(trace, start); i < trace.steps.size(); ++i) {
    const __int128 rate = trace.steps[i].throughput.count();
    const bool last = i + 1 == trace.steps.size();
    if (last) {
      if (rate == 0) return std::nullopt;
      return t + Micros{ceil_div(remaining, rate)};
    }
    const Micros step_end = trace.steps[i + 1].start;
    const __int128 available = rate * (step_end - t).count();
    if (available >= remaining) {
      return t + Micros{ceil_div(remaining, rate)};
    }
    remaining -= available;
    t = step_end;
  }
  return std::nullopt;
}

std::vector<std::string> validate_policy(const SelectionPolicy& policy) {
  std::vector<std::string> violations;
  if (policy.quality_floor < Ratio{0} || policy.quality_floor > kRatioOne) {
    violations.emplace_back("policy: quality_floor outside [0, 1]");
  }
  if (policy.hysteresis_margin < Ratio{0}) {
    violations.emplace_back("policy: negative hysteresis_margin");
  }
  if (policy.min_dwell < Micros{0}) violations.emplace_back("policy: negative min_dwell");
  std::set<InterfaceKind> seen;
  for (const auto& kind : policy.preference) {
    if (!seen.insert(kind).second) {
      violations.push_back("policy: interface '" + kind.label() + "' listed twice in preference");
    }
  }
  return violations;
}

std::vector<InterfaceKind> default_preference(const std::map<InterfaceKind, WnicModel>& models) {
  std::vector<InterfaceKind> order;
  for (const auto& [kind, model] : models) order.push_back(kind);
  // Compare power_a / rate_a < power_b / rate_b by cross-multiplying.
  auto energy_per_bit_less = [&](const InterfaceKind& a, const InterfaceKind& b) {
    const WnicModel& ma = models.at(a);
    const WnicModel& mb = models.at(b);
    const __int128 lhs = static_cast<__int128>(ma.active_state().power.count()) *
                         mb.active_throughput.count();
    const __int128 rhs = static_cast<__int128>(mb.active_state().power.count()) *
                         ma.active_throughput.count();
    if (lhs != rhs) return lhs < rhs;
    return a < b;
  };
  std::sort(order.begin(), order.end(), energy_per_bit_less);
  return order;
}

InterfaceKind select_interface(const InterfaceTraces& traces, Micros t, BitRate required,
                               const SelectionPolicy& policy,
                               const std::optional<InterfaceKind>& current, Micros last_switch) {
  auto qualifies = [&](const InterfaceKind& kind) {
    auto it = traces.find(kind);
    if (it == traces.end()) return false;
    return throughput_at(it->second, t) >= required &&
           quality_at(it->second, t) >= policy.quality_floor;
  };

  std::optional<InterfaceKind> candidate;
  for (const auto& kind : policy.preference) {
    if (qualifies(kind)) {
      candidate = kind;
      break;
    }
  }
  if (!candidate) {
    throw NoViableInterface("no viable interface at " + std::to_string(t.count()) + " us");
  }

  if (current && *current != *candidate && qualifies(*current)) {
    if (t - last_switch < policy.min_dwell) return *current;
    const Ratio lead =
        quality_at(traces.at(*candidate), t) - quality_at(traces.at(*current), t);
    if (lead < policy.hysteresis_margin) return *current;
  }
  return *candidate;
}

}  // namespace hotspot
