#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "glauber/run_config.hpp"

namespace glauber {

/// Command-line overrides applied on top of the parsed config file.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;
};

/// Subcommand bodies. Each writes its outputs (plus the resolved config and a
/// JSON report embedding the artifact version and config hash) into the output
/// directory and returns the process exit code: 0 = pass, 1 = a verification
/// check failed. Bad input raises DomainError/ModelError/CapacityError (exit
/// 2 at the top level); estimation and accuracy failures raise their own
/// errors (exit 3).
int cmd_simulate(const RunConfig& cfg, unsigned threads);
int cmd_sample(const RunConfig& cfg, unsigned threads);
int cmd_verify(const RunConfig& cfg, unsigned threads);
int cmd_oracle_compare(const RunConfig& cfg, unsigned threads);
int cmd_gap(const RunConfig& cfg, unsigned threads);

/// Full dispatch used by main(): loads the config, applies overrides, maps
/// exceptions to the exit-code contract (0 pass, 1 check failed, 2 bad input,
/// 3 internal error).
int run_command(const std::string& command, const std::string& config_path,
                const CliOverrides& overrides);

}  // namespace glauber
