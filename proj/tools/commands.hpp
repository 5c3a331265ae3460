#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace qss::cli {

enum ExitCode : int { kPass = 0, kVerificationFailed = 1, kInputError = 2 };

struct RunConfig {
  std::string input_path;
  std::string output_path;  // empty: stdout
  std::uint64_t seed = 42;
  std::optional<double> tolerance;  // per-command default when unset
  std::string format = "json";
  int n = 1;
  std::optional<int> trials;
};

/// Each command writes its report and returns the process exit code. Input problems
/// surface as qss::Error and are mapped to kInputError by the caller.
int verify_scheme(const RunConfig& config);
int capacity(const RunConfig& config);
int sweep(const RunConfig& config);
int teleport_demo(const RunConfig& config);

}  // namespace qss::cli
