#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hotspot/simulator.hpp"

namespace hotspot {

struct RunConfig {
  std::filesystem::path scenario;
  std::optional<SchedulerKind> scheduler_override;
  bool baseline = false;
  std::filesystem::path output_dir = "out";
  /// Reserved for trace generators; shipped scenarios are fully scripted.
  std::uint64_t seed = 0;
};

enum ExitStatus : int { kExitOk = 0, kExitError = 1, kExitQosViolation = 2 };

/// Runs one scenario file and writes its reports into config.output_dir.
/// Returns kExitOk, or kExitQosViolation when the run has QoS violations.
/// Errors propagate as exceptions.
int run_scenario(const RunConfig& config, std::ostream& out);

/// Full command line: flags, directory fan-out, exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hotspot
