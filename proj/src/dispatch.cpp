#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "hotspot/error.hpp"
#include "hotspot/scheduler.hpp"

namespace hotspot {

void Schedule::add(Burst burst) {
  if (burst.end < burst.start) throw ValidationError("burst ends before it starts");
  auto& slots = occupancy_[burst.interface];
  const std::pair<Micros, Micros> slot{burst.start, burst.end};
  auto it = std::lower_bound(slots.begin(), slots.end(), slot);
  if ((it != slots.end() && it->first < burst.end) ||
      (it != slots.begin() && std::prev(it)->second > burst.start)) {
    throw ValidationError("burst for " + burst.client + " overlaps another on medium '" +
                          burst.interface.label() + "'");
  }
  slots.insert(it, slot);

  auto pos = std::upper_bound(bursts_.begin(), bursts_.end(), burst,
                              [](const Burst& a, const Burst& b) {
                                return std::tie(a.start, a.client) < std::tie(b.start, b.client);
                              });
  bursts_.insert(pos, std::move(burst));
}

std::vector<Burst> Schedule::on_medium(const InterfaceKind& kind) const {
  std::vector<Burst> out;
  std::copy_if(bursts_.begin(), bursts_.end(), std::back_inserter(out),
               [&](const Burst& b) { return b.interface == kind; });
  return out;
}

std::vector<Burst> Schedule::for_client(const ClientId& client) const {
  std::vector<Burst> out;
  std::copy_if(bursts_.begin(), bursts_.end(), std::back_inserter(out),
               [&](const Burst& b) { return b.client == client; });
  return out;
}

namespace {

// Ordering key shared by both disciplines; only `primary` differs (deadline
// for EDF, finish tag for WFQ).
struct PriorityKey {
  double primary = 0.0;
  ClientId client;
  Micros release;
  int sequence = 0;

  auto operator<=>(const PriorityKey&) const = default;
};

struct SelectionState {
  std::optional<InterfaceKind> current;
  Micros last_switch;
  SelectionPolicy policy;
};

using KeyFn = std::function<PriorityKey(std::size_t index)>;
using ReleaseFn = std::function<void(std::size_t index)>;

class Dispatcher {
 public:
  Dispatcher(std::span<const BurstRequest> requests, const SchedulingContext& ctx)
      : requests_(requests), ctx_(ctx) {
    for (const auto& [id, radios] : ctx.clients) {
      SelectionState state;
      state.policy = ctx.policy;
      if (state.policy.preference.empty()) {
        state.policy.preference = default_preference(radios.models);
      }
      selection_.emplace(id, std::move(state));
    }
  }

  ScheduleResult run(const KeyFn& key_of, const ReleaseFn& on_release) {
    std::vector<std::size_t> future(requests_.size());
    for (std::size_t i = 0; i < future.size(); ++i) future[i] = i;
    std::sort(future.begin(), future.end(), [&](std::size_t a, std::size_t b) {
      const auto& ra = requests_[a];
      const auto& rb = requests_[b];
      return std::tie(ra.release, ra.client, ra.sequence) <
             std::tie(rb.release, rb.client, rb.sequence);
    });
    for (auto i : future) {
      if (!ctx_.clients.contains(requests_[i].client)) {
        throw ValidationError("request for unknown client '" + requests_[i].client + "'");
      }
    }

    std::size_t next_release = 0;
    std::vector<std::size_t> pending;
    Micros now = future.empty() ? Micros{0} : requests_[future.front()].release;

    while (next_release < future.size() || !pending.empty()) {
      while (next_release < future.size() && requests_[future[next_release]].release <= now) {
        const std::size_t idx = future[next_release++];
        on_release(idx);
        pending.push_back(idx);
      }
      std::vector<std::pair<PriorityKey, std::size_t>> ordered;
      ordered.reserve(pending.size());
      for (auto idx : pending) ordered.emplace_back(key_of(idx), idx);
      std::sort(ordered.begin(), ordered.end());

      std::vector<std::size_t> still_pending;
      for (const auto& [key, idx] : ordered) {
        if (!try_start(idx, now)) still_pending.push_back(idx);
      }
      pending = std::move(still_pending);

      std::optional<Micros> next = next_event(now, pending, future, next_release);
      if (!next) {
        for (auto idx : pending) {
          fail(idx, now, "no viable interface");
        }
        break;
      }
      now = *next;
    }
    return std::move(result_);
  }

 private:
  // Starts request idx at `now` if its interface is viable and free. Returns
  // false when the request has to keep waiting.
  bool try_start(std::size_t idx, Micros now) {
    const BurstRequest& req = requests_[idx];
    const ClientRadios& radios = ctx_.clients.at(req.client);
    SelectionState& sel = selection_.at(req.client);

    InterfaceKind chosen = InterfaceKind::wlan();
    try {
      chosen = select_interface(radios.traces, now, req.required, sel.policy, sel.current,
                                sel.last_switch);
    } catch (const NoViableInterface&) {
      if (now >= req.deadline) {
        fail(idx, now, "no viable interface");
        return true;
      }
      return false;
    }

    auto busy = medium_free_.find(chosen);
    if (busy != medium_free_.end() && busy->second > now) return false;

    // Radios start asleep, so nothing can be delivered before the first wake-up completes.
    const WnicModel& model = radios.models.at(chosen);
    const Micros wake = transition_cost(model, model.sleep_state, model.active_state().name).latency;
    if (now < wake) {
      wake_events_.insert(wake);
      return false;
    }

    const std::optional<Micros> end = transfer_end(radios.traces.at(chosen), now, req.bytes);
    if (!end) {
      fail(idx, now, "link cannot complete transfer");
      return true;
    }

    result_.schedule.add(Burst{req.client, chosen, now, *end, req.bytes, req.sequence, req.deadline});
    medium_free_[chosen] = *end;
    if (!sel.current) {
      sel.last_switch = now;
    } else if (*sel.current != chosen) {
      result_.switches.push_back(InterfaceSwitch{req.client, now, *sel.current, chosen});
      sel.last_switch = now;
    }
    sel.current = chosen;
    if (*end > req.deadline) {
      result_.misses.push_back(DeadlineMiss{req.client, req.sequence, req.deadline, *end});
    }
    return true;
  }

  void fail(std::size_t idx, Micros now, std::string reason) {
    const BurstRequest& req = requests_[idx];
    result_.failures.push_back(BurstFailure{req.client, req.sequence, now, std::move(reason)});
  }

  std::optional<Micros> next_event(Micros now, const std::vector<std::size_t>& pending,
                                   const std::vector<std::size_t>& future,
                                   std::size_t next_release) const {
    std::optional<Micros> best;
    auto consider = [&](Micros t) {
      if (t > now && (!best || t < *best)) best = t;
    };
    if (next_release < future.size()) consider(requests_[future[next_release]].release);
    if (pending.empty()) return best;

    for (const auto& [kind, free_at] : medium_free_) consider(free_at);
    for (const auto t : wake_events_) consider(t);
    std::set<ClientId> clients;
    for (auto idx : pending) {
      consider(requests_[idx].deadline);
      clients.insert(requests_[idx].client);
    }
    // Channel changes can make a stuck request viable again.
    for (const auto& client : clients) {
      for (const auto& [kind, trace] : ctx_.clients.at(client).traces) {
        for (const auto& step : trace.steps) consider(step.start);
      }
      const SelectionState& sel = selection_.at(client);
      if (sel.current) consider(sel.last_switch + sel.policy.min_dwell);
    }
    return best;
  }

  std::span<const BurstRequest> requests_;
  const SchedulingContext& ctx_;
  std::map<ClientId, SelectionState> selection_;
  std::map<InterfaceKind, Micros> medium_free_;
  std::set<Micros> wake_events_;
  ScheduleResult result_;
};

}  // namespace

ScheduleResult schedule_edf(std::span<const BurstRequest> requests, const SchedulingContext& ctx) {
  Dispatcher dispatcher(requests, ctx);
  return dispatcher.run(
      [&](std::size_t i) {
        const auto& r = requests[i];
        return PriorityKey{static_cast<double>(r.deadline.count()), r.client, r.release,
                           r.sequence};
      },
      [](std::size_t) {});
}

ScheduleResult schedule_wfq(std::span<const BurstRequest> requests,
                            const std::map<ClientId, Ratio>& weights,
                            const SchedulingContext& ctx) {
  std::map<ClientId, WfqFlowState> flows;
  for (const auto& r : requests) {
    if (flows.contains(r.client)) continue;
    auto w = weights.find(r.client);
    if (w == weights.end() || w->second <= Ratio{0}) {
      throw ValidationError("client '" + r.client + "' needs a positive WFQ weight");
    }
    flows.emplace(r.client, WfqFlowState{r.client, static_cast<double>(w->second.count()) / 1e6,
                                         0.0});
  }

  GpsVirtualClock clock;
  std::vector<double> tags(requests.size(), 0.0);
  Dispatcher dispatcher(requests, ctx);
  return dispatcher.run(
      [&](std::size_t i) {
        const auto& r = requests[i];
        return PriorityKey{tags[i], r.client, r.release, r.sequence};
      },
      [&](std::size_t i) {
        const auto& r = requests[i];
        WfqFlowState& flow = flows.at(r.client);
        clock.advance(r.release);
        tags[i] = wfq_finish_tag(flow, clock.now(), r.bytes, ctx.capacity);
        clock.on_arrival(r.client, flow.weight, tags[i]);
      });
}

}  // namespace hotspot
