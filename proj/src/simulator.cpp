#include "hotspot/simulator.hpp"

#include <algorithm>
#include <set>

#include "hotspot/error.hpp"

namespace hotspot {

std::string to_string(SchedulerKind kind) {
  return kind == SchedulerKind::Edf ? "edf" : "wfq";
}

SchedulerKind scheduler_kind_from_string(std::string_view name) {
  if (name == "edf") return SchedulerKind::Edf;
  if (name == "wfq") return SchedulerKind::Wfq;
  throw ParseError("unknown scheduler '" + std::string(name) + "' (expected edf or wfq)");
}

void validate_scenario(const Scenario& scenario) {
  std::vector<std::string> problems;
  auto add_all = [&](const std::string& prefix, const std::vector<std::string>& found) {
    for (const auto& f : found) problems.push_back(prefix + f);
  };

  if (scenario.horizon < Micros{0}) problems.emplace_back("horizon must be non-negative");
  if (scenario.capacity <= BitRate{0}) problems.emplace_back("capacity must be positive");
  for (const auto& [name, model] : scenario.models) {
    add_all("model '" + name + "': ", validate_model(model));
  }
  add_all("", validate_policy(scenario.policy));

  std::map<ClientId, std::set<InterfaceKind>> kinds;
  for (const auto& client : scenario.clients) {
    if (kinds.contains(client.id)) {
      problems.push_back("client '" + client.id + "' defined twice");
      continue;
    }
    auto& client_kinds = kinds[client.id];
    if (client.battery_level < Ratio{0} || client.battery_level > kRatioOne) {
      problems.push_back("client '" + client.id + "': battery_level outside [0, 1]");
    }
    for (const auto& name : client.models) {
      auto it = scenario.models.find(name);
      if (it == scenario.models.end()) {
        problems.push_back("client '" + client.id + "': unknown model '" + name + "'");
        continue;
      }
      if (!client_kinds.insert(it->second.kind).second) {
        problems.push_back("client '" + client.id + "': two models for interface '" +
                           it->second.kind.label() + "'");
      }
    }
  }

  std::set<ClientId> streamed;
  for (const auto& stream : scenario.streams) {
    add_all("", validate_stream(stream));
    if (!kinds.contains(stream.client)) {
      problems.push_back("streams.client: unknown client '" + stream.client + "'");
    }
    if (!streamed.insert(stream.client).second) {
      problems.push_back("client '" + stream.client + "' has more than one stream");
    }
    if (stream.start + stream.duration > scenario.horizon) {
      problems.push_back("stream " + stream.client + " ends after the horizon");
    }
    if (scenario.scheduler.burst_bytes &&
        (*scenario.scheduler.burst_bytes <= 0 ||
         *scenario.scheduler.burst_bytes > stream.buffer_capacity)) {
      problems.push_back("scheduler.burst_bytes must be in (0, buffer_capacity] for stream " +
                         stream.client);
    }
  }

  std::set<InterfaceKey> traced;
  for (const auto& link : scenario.links) {
    add_all("", validate_trace(link));
    auto it = kinds.find(link.client);
    if (it == kinds.end()) {
      problems.push_back("links.client: unknown client '" + link.client + "'");
      continue;
    }
    if (!it->second.contains(link.interface)) {
      problems.push_back("links: client '" + link.client + "' has no model for interface '" +
                         link.interface.label() + "'");
    }
    if (!traced.insert({link.client, link.interface}).second) {
      problems.push_back("links: duplicate trace for " + link.client + "/" +
                         link.interface.label());
    }
  }
  for (const auto& [client, client_kinds] : kinds) {
    for (const auto& kind : client_kinds) {
      if (!traced.contains({client, kind})) {
        problems.push_back("links: client '" + client + "' has no trace for interface '" +
                           kind.label() + "'");
      }
    }
  }

  for (const auto& [client, weight] : scenario.scheduler.weights) {
    if (!kinds.contains(client)) {
      problems.push_back("scheduler.weights: unknown client '" + client + "'");
    }
    if (weight <= Ratio{0}) problems.push_back("scheduler.weights: non-positive weight");
  }
  if (scenario.scheduler.kind == SchedulerKind::Wfq) {
    for (const auto& client : streamed) {
      if (!scenario.scheduler.weights.contains(client)) {
        problems.push_back("scheduler.weights: missing weight for client '" + client + "'");
      }
    }
  }

  if (!problems.empty()) {
    std::string message = "invalid scenario: " + problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) message += "; " + problems[i];
    throw ValidationError(message);
  }
}

std::map<InterfaceKind, WnicModel> client_models(const Scenario& scenario, const ClientId& client) {
  std::map<InterfaceKind, WnicModel> out;
  for (const auto& c : scenario.clients) {
    if (c.id != client) continue;
    for (const auto& name : c.models) {
      const WnicModel& m = scenario.models.at(name);
      out.emplace(m.kind, m);
    }
  }
  return out;
}

std::map<InterfaceKey, WnicModel> interface_models(const Scenario& scenario) {
  std::map<InterfaceKey, WnicModel> out;
  for (const auto& c : scenario.clients) {
    for (auto& [kind, model] : client_models(scenario, c.id)) out.emplace(InterfaceKey{c.id, kind}, model);
  }
  return out;
}

Nanojoules EnergyReport::total() const {
  Nanojoules sum{0};
  for (const auto& [key, e] : entries) sum += e.energy;
  return sum;
}

Nanojoules EnergyReport::client_total(const ClientId& client) const {
  Nanojoules sum{0};
  for (const auto& [key, e] : entries) {
    if (key.first == client) sum += e.energy;
  }
  return sum;
}

std::vector<ClientId> EnergyReport::clients() const {
  std::vector<ClientId> out;
  for (const auto& [key, e] : entries) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

std::int64_t EnergyReport::average_power_micro_mw(Nanojoules energy, Micros horizon) {
  if (horizon <= Micros{0}) return 0;
  return round_div(static_cast<__int128>(energy.count()) * 1'000'000, horizon.count());
}

std::size_t QosReport::violation_count() const {
  const auto late_starts = std::count_if(startup.begin(), startup.end(),
                                         [](const StartupLatency& s) { return s.violated; });
  return underflows.size() + static_cast<std::size_t>(late_starts) + misses.size() +
         failures.size() + rejected.size();
}

InterfaceTimeline build_timeline(const WnicModel& model, const std::vector<Burst>& bursts,
                                 Micros horizon) {
  const std::string& sleep = model.sleep_state;
  const std::string& active = model.active_state().name;
  const TransitionCost wake = transition_cost(model, sleep, active);
  const TransitionCost down = transition_cost(model, active, sleep);

  std::vector<std::pair<Micros, Micros>> awake;
  std::vector<Burst> sorted = bursts;
  std::sort(sorted.begin(), sorted.end(),
            [](const Burst& a, const Burst& b) { return a.start < b.start; });
  for (const auto& b : sorted) {
    if (!awake.empty() && b.start - wake.latency <= awake.back().second + down.latency) {
      awake.back().second = std::max(awake.back().second, b.end);
    } else {
      awake.emplace_back(b.start, b.end);
    }
  }

  InterfaceTimeline out;
  auto push = [&](Micros start, Micros end, const std::string& state, const std::string& from) {
    if (end > start) out.states.push_back(StateInterval{start, end, state, from});
  };

  Micros t{0};
  for (const auto& [start, end] : awake) {
    if (sleep == active) {
      push(t, start, sleep, {});
      push(start, end, active, {});
      t = end;
      continue;
    }
    const Micros wake_at = start - wake.latency;
    if (wake_at < t) {
      throw ValidationError("wake-up for burst at " + std::to_string(start.count()) +
                            " us would begin before the radio can be woken");
    }
    push(t, wake_at, sleep, {});
    push(wake_at, start, active, sleep);
    out.transitions.push_back(TransitionEvent{wake_at, sleep, active});
    push(start, end, active, {});
    push(end, end + down.latency, sleep, active);
    out.transitions.push_back(TransitionEvent{end, active, sleep});
    t = end + down.latency;
  }
  push(t, std::max(t, horizon), sleep, {});

  // Clip to the horizon.
  std::erase_if(out.states, [&](const StateInterval& iv) { return iv.start >= horizon; });
  if (!out.states.empty() && out.states.back().end > horizon) out.states.back().end = horizon;
  std::erase_if(out.transitions, [&](const TransitionEvent& ev) { return ev.time >= horizon; });
  return out;
}

namespace {

InterfaceEnergy account(const WnicModel& model, const InterfaceTimeline& tl) {
  InterfaceEnergy e;
  e.time_in_state = time_in_state(tl.states);
  e.transition_count = static_cast<int>(tl.transitions.size());
  e.energy = timeline_energy(model, tl.states, tl.transitions);
  return e;
}

std::int64_t burst_size_for(const Scenario& scenario, const StreamSpec& stream) {
  return scenario.scheduler.burst_bytes.value_or(default_burst_bytes(stream));
}

}  // namespace

RunResult run(const Scenario& scenario) {
  validate_scenario(scenario);
  RunResult result;
  result.energy.horizon = scenario.horizon;

  BitRate load{0};
  std::vector<StreamSpec> admitted;
  for (const auto& stream : scenario.streams) {
    if (admit_client(load, scenario.capacity, stream)) {
      load += stream.bitrate;
      admitted.push_back(stream);
    } else {
      result.qos.rejected.push_back(stream.client);
    }
  }

  std::vector<BurstRequest> requests;
  for (const auto& stream : admitted) {
    auto bursts = derive_bursts(stream, burst_size_for(scenario, stream));
    requests.insert(requests.end(), bursts.begin(), bursts.end());
  }

  SchedulingContext ctx;
  ctx.policy = scenario.policy;
  ctx.capacity = scenario.capacity;
  for (const auto& client : scenario.clients) {
    ctx.clients[client.id].models = client_models(scenario, client.id);
    result.battery_levels[client.id] = client.battery_level;
  }
  for (const auto& link : scenario.links) ctx.clients[link.client].traces.emplace(link.interface, link);

  result.scheduled = scenario.scheduler.kind == SchedulerKind::Edf
                         ? schedule_edf(requests, ctx)
                         : schedule_wfq(requests, scenario.scheduler.weights, ctx);

  for (const auto& [client, radios] : ctx.clients) {
    const std::vector<Burst> mine = result.scheduled.schedule.for_client(client);
    for (const auto& [kind, model] : radios.models) {
      std::vector<Burst> on_kind;
      std::copy_if(mine.begin(), mine.end(), std::back_inserter(on_kind),
                   [&](const Burst& b) { return b.interface == kind; });
      InterfaceTimeline tl = build_timeline(model, on_kind, scenario.horizon);
      result.energy.entries[{client, kind}] = account(model, tl);
      result.timelines[{client, kind}] = std::move(tl);
    }
  }

  const QosVerdict verdict = check_feasibility(result.scheduled.schedule, admitted);
  result.qos.underflows = verdict.underflows;
  result.qos.overflows = verdict.overflows;
  for (const auto& s : verdict.startup) {
    result.qos.startup.push_back(StartupLatency{s.client, s.latency, s.violated});
  }
  result.qos.misses = result.scheduled.misses;
  result.qos.failures = result.scheduled.failures;
  result.qos.switches = result.scheduled.switches;
  return result;
}

EnergyReport run_baseline(const Scenario& scenario) {
  validate_scenario(scenario);
  EnergyReport report;
  report.horizon = scenario.horizon;
  for (const auto& client : scenario.clients) {
    for (const auto& [kind, model] : client_models(scenario, client.id)) {
      InterfaceTimeline tl;
      tl.states = baseline_timeline(model, scenario.horizon);
      report.entries[{client.id, kind}] = account(model, tl);
    }
  }
  return report;
}

bool Savings::defined() const { return baseline > Nanojoules{0} || scheduled == Nanojoules{0}; }

double Savings::fraction() const {
  if (baseline == Nanojoules{0}) return 0.0;
  return 1.0 - static_cast<double>(scheduled.count()) / static_cast<double>(baseline.count());
}

std::int64_t Savings::fraction_ppm() const {
  if (!defined()) throw ValidationError("savings undefined for zero baseline energy");
  if (baseline == Nanojoules{0}) return 0;
  return round_div(static_cast<__int128>((baseline - scheduled).count()) * 1'000'000,
                   baseline.count());
}

Comparison compare(const EnergyReport& scheduled, const EnergyReport& baseline) {
  if (scheduled.entries.size() != baseline.entries.size()) {
    throw ValidationError("scheduled and baseline reports cover different interfaces");
  }
  Comparison out;
  for (const auto& [key, s] : scheduled.entries) {
    auto it = baseline.entries.find(key);
    if (it == baseline.entries.end()) {
      throw ValidationError("baseline report lacks " + key.first + "/" + key.second.label());
    }
    out.per_interface[key] = Savings{s.energy, it->second.energy};
    Savings& client = out.per_client[key.first];
    client.scheduled += s.energy;
    client.baseline += it->second.energy;
    out.total.scheduled += s.energy;
    out.total.baseline += it->second.energy;
  }
  return out;
}

std::vector<PowerSample> power_trace(const std::map<InterfaceKey, InterfaceTimeline>& timelines,
                                     const std::map<InterfaceKey, WnicModel>& models) {
  std::vector<PowerSample> out;
  for (const auto& [key, tl] : timelines) {
    const WnicModel& model = models.at(key);
    std::optional<Milliwatts> last;
    for (const auto& iv : tl.states) {
      const Milliwatts level = iv.is_transition()
                                   ? std::max(model.power_of(iv.from), model.power_of(iv.state))
                                   : model.power_of(iv.state);
      if (!last || *last != level) {
        out.push_back(PowerSample{key.first, key.second, iv.start, level});
        last = level;
      }
    }
    if (!tl.states.empty()) {
      out.push_back(PowerSample{key.first, key.second, tl.states.back().end, *last});
    }
  }
  return out;
}

}  // namespace hotspot
