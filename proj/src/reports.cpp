#include "hotspot/reports.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include "hotspot/error.hpp"

namespace hotspot {

namespace {

std::string us(Micros t) { return std::to_string(t.count()); }

std::string mj(Nanojoules e) { return format_fixed(e.count(), 6); }

std::string avg_mw(Nanojoules e, Micros horizon) {
  return format_fixed(EnergyReport::average_power_micro_mw(e, horizon), 6);
}

std::string savings_field(const Savings& s) {
  return s.defined() ? format_fixed(s.fraction_ppm(), 6) : "undefined";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string schedule_csv(const Schedule& schedule) {
  std::vector<Burst> rows = schedule.bursts();
  std::sort(rows.begin(), rows.end(), [](const Burst& a, const Burst& b) {
    return std::tie(a.client, a.start, a.interface) < std::tie(b.client, b.start, b.interface);
  });
  std::string out = "client,interface,start_us,end_us,bytes\n";
  for (const auto& b : rows) {
    out += b.client + "," + b.interface.label() + "," + us(b.start) + "," + us(b.end) + "," +
           std::to_string(b.bytes) + "\n";
  }
  return out;
}

std::string power_trace_csv(const std::vector<PowerSample>& samples) {
  std::vector<PowerSample> rows = samples;
  std::stable_sort(rows.begin(), rows.end(), [](const PowerSample& a, const PowerSample& b) {
    return std::tie(a.client, a.time, a.interface) < std::tie(b.client, b.time, b.interface);
  });
  std::string out = "client,interface,t_us,power_mw\n";
  for (const auto& s : rows) {
    out += s.client + "," + s.interface.label() + "," + us(s.time) + "," +
           std::to_string(s.power.count()) + "\n";
  }
  return out;
}

std::string energy_summary_csv(const EnergyReport& scheduled, const EnergyReport* baseline) {
  std::optional<Comparison> cmp;
  if (baseline != nullptr) cmp = compare(scheduled, *baseline);

  using Row = std::tuple<ClientId, std::string, std::string, std::string>;
  std::vector<Row> rows;
  auto add = [&](const ClientId& client, const std::string& iface, const std::string& mode,
                 Nanojoules e, Micros horizon, const std::string& savings) {
    rows.emplace_back(client, iface, mode,
                      client + "," + iface + "," + mode + "," + mj(e) + "," + avg_mw(e, horizon) +
                          "," + savings);
  };

  for (const auto& [key, e] : scheduled.entries) {
    add(key.first, key.second.label(), "scheduled", e.energy, scheduled.horizon,
        cmp ? savings_field(cmp->per_interface.at(key)) : "");
  }
  for (const auto& client : scheduled.clients()) {
    add(client, "all", "scheduled", scheduled.client_total(client), scheduled.horizon,
        cmp ? savings_field(cmp->per_client.at(client)) : "");
  }
  if (baseline != nullptr) {
    for (const auto& [key, e] : baseline->entries) {
      add(key.first, key.second.label(), "baseline", e.energy, baseline->horizon, "");
    }
    for (const auto& client : baseline->clients()) {
      add(client, "all", "baseline", baseline->client_total(client), baseline->horizon, "");
    }
  }
  std::sort(rows.begin(), rows.end());

  std::string out = "client,interface,mode,energy_mj,avg_power_mw,savings\n";
  for (const auto& row : rows) out += std::get<3>(row) + "\n";
  return out;
}

std::string qos_csv(const QosReport& qos) {
  struct Row {
    ClientId client;
    Micros time;
    std::string event;
    std::string detail;
  };
  std::vector<Row> rows;
  for (const auto& u : qos.underflows) rows.push_back({u.client, u.time, "underflow", ""});
  for (const auto& s : qos.startup) {
    if (s.latency) {
      rows.push_back({s.client, *s.latency, s.violated ? "startup_violation" : "startup",
                      "latency_us=" + us(*s.latency)});
    } else {
      rows.push_back({s.client, Micros{0}, "startup_violation", "playback never started"});
    }
  }
  for (const auto& m : qos.misses) {
    rows.push_back({m.client, m.end, "deadline_miss",
                    "burst=" + std::to_string(m.sequence) + " deadline_us=" + us(m.deadline)});
  }
  for (const auto& f : qos.failures) {
    rows.push_back({f.client, f.time, "failure", "burst=" + std::to_string(f.sequence) + " " + f.reason});
  }
  for (const auto& s : qos.switches) {
    rows.push_back({s.client, s.time, "switch", s.from.label() + "->" + s.to.label()});
  }
  for (const auto& o : qos.overflows) {
    rows.push_back({o.client, o.time, "overflow", "deferred_bytes=" + std::to_string(o.deferred_bytes)});
  }
  for (const auto& r : qos.rejected) rows.push_back({r, Micros{0}, "rejected", "admission"});

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.client, a.time, a.event, a.detail) <
           std::tie(b.client, b.time, b.event, b.detail);
  });
  std::string out = "event,client,t_us,detail\n";
  for (const auto& r : rows) out += r.event + "," + r.client + "," + us(r.time) + "," + r.detail + "\n";
  return out;
}

void emit_reports(const RunResult& run, const std::map<InterfaceKey, WnicModel>& models,
                  const EnergyReport* baseline, const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error("cannot create '" + outdir.string() + "': " + ec.message());
  write_file(outdir / "schedule.csv", schedule_csv(run.scheduled.schedule));
  write_file(outdir / "power_trace.csv", power_trace_csv(power_trace(run.timelines, models)));
  write_file(outdir / "energy_summary.csv", energy_summary_csv(run.energy, baseline));
  write_file(outdir / "qos.csv", qos_csv(run.qos));
}

}  // namespace hotspot
