#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kresling_cli/config.hpp"
#include "kresling_cli/output.hpp"

namespace kresling::cli {

inline constexpr const char* kCommands[] = {"design", "energy", "path",   "cycle",
                                            "gait",   "sweep",  "pattern"};

struct CommandResult {
  /// Printed to stdout.
  std::string report;
  std::vector<OutputFile> files;
};

struct CommandOptions {
  /// Sweep worker cap; 0 uses the hardware concurrency.
  unsigned jobs = 0;
};

bool is_command(std::string_view name);

/// Computes every output in memory; nothing touches the filesystem.
CommandResult run_command(std::string_view name, const RunConfig& config,
                          const CommandOptions& options = {});

}  // namespace kresling::cli
