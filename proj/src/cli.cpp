#include "hotspot/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <future>
#include <ostream>
#include <sstream>

#include "hotspot/error.hpp"
#include "hotspot/reports.hpp"
#include "hotspot/scenario_io.hpp"

namespace hotspot {

int run_scenario(const RunConfig& config, std::ostream& out) {
  Scenario scenario = parse_scenario(config.scenario);
  if (config.scheduler_override) {
    scenario.scheduler.kind = *config.scheduler_override;
    validate_scenario(scenario);
  }

  const RunResult result = run(scenario);
  std::optional<EnergyReport> baseline;
  if (config.baseline) baseline = run_baseline(scenario);
  emit_reports(result, interface_models(scenario), baseline ? &*baseline : nullptr,
               config.output_dir);

  out << config.scenario.filename().string() << ": scheduler=" << to_string(scenario.scheduler.kind)
      << " bursts=" << result.scheduled.schedule.bursts().size()
      << " energy_mj=" << format_fixed(result.energy.total().count(), 6);
  if (baseline) {
    const Savings total = compare(result.energy, *baseline).total;
    out << " baseline_mj=" << format_fixed(baseline->total().count(), 6) << " savings="
        << (total.defined() ? format_fixed(total.fraction_ppm(), 6) : std::string("undefined"));
  }
  out << " qos_violations=" << result.qos.violation_count() << "\n";
  return result.qos.violation_count() == 0 ? kExitOk : kExitQosViolation;
}

namespace {

// Runs every *.yaml in a directory concurrently; each gets its own output
// subdirectory named after the file.
int run_directory(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(config.scenario)) {
    if (entry.is_regular_file() && entry.path().extension() == ".yaml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  struct Outcome {
    int status = kExitOk;
    std::string log;
  };
  std::vector<std::future<Outcome>> jobs;
  for (const auto& file : files) {
    RunConfig one = config;
    one.scenario = file;
    one.output_dir = config.output_dir / file.stem();
    jobs.push_back(std::async(std::launch::async, [one] {
      std::ostringstream log;
      try {
        const int status = run_scenario(one, log);
        return Outcome{status, log.str()};
      } catch (const std::exception& e) {
        return Outcome{kExitError, std::string("error: ") + e.what() + "\n"};
      }
    }));
  }

  int status = kExitOk;
  for (auto& job : jobs) {
    Outcome o = job.get();
    (o.status == kExitError ? err : out) << o.log;
    if (o.status == kExitError || (o.status == kExitQosViolation && status == kExitOk)) {
      status = o.status;
    }
  }
  return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hotspot resource-manager simulator: burst scheduling and WNIC energy accounting",
               "hotspot_sim"};
  RunConfig config;
  std::string scheduler;
  app.add_option("--scenario", config.scenario, "Scenario file, or a directory of *.yaml files")
      ->required();
  app.add_option("--scheduler", scheduler, "Override the scenario's scheduler")
      ->check(CLI::IsMember({"edf", "wfq"}));
  app.add_flag("--baseline", config.baseline, "Also run the always-on baseline and report savings");
  app.add_option("--out", config.output_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", config.seed, "Random seed (reserved)")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitError;
  }
  if (!scheduler.empty()) config.scheduler_override = scheduler_kind_from_string(scheduler);

  try {
    if (std::filesystem::is_directory(config.scenario)) return run_directory(config, out, err);
    return run_scenario(config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace hotspot
