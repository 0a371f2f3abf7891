#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "hotspot/simulator.hpp"

namespace hotspot {

// CSV renderers. Header row first, "\n" line endings, fixed-point decimals,
// rows sorted by client and then time.

/// client,interface,start_us,end_us,bytes
std::string schedule_csv(const Schedule& schedule);

/// client,interface,t_us,power_mw (step series)
std::string power_trace_csv(const std::vector<PowerSample>& samples);

/// client,interface,mode,energy_mj,avg_power_mw,savings
///
/// One row per (client, interface, mode) plus an interface "all" row per
/// client and mode. Savings are filled on scheduled rows when a baseline is
/// given ("undefined" for a zero baseline) and left empty otherwise.
std::string energy_summary_csv(const EnergyReport& scheduled, const EnergyReport* baseline);

/// event,client,t_us,detail
std::string qos_csv(const QosReport& qos);

/// Writes schedule.csv, power_trace.csv, energy_summary.csv and qos.csv into
/// outdir, creating it if needed. Throws Error on I/O failure.
void emit_reports(const RunResult& run, const std::map<InterfaceKey, WnicModel>& models,
                  const EnergyReport* baseline, const std::filesystem::path& outdir);

}  // namespace hotspot
