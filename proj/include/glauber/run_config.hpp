#pragma once

#include <cstdint>
#include <string>

#include "glauber/dynamics.hpp"
#include "glauber/model.hpp"
#include "glauber/verify.hpp"

namespace glauber {

/// Fully resolved run description parsed from a JSON config file. Every field
/// has a default except the model block; parsing is strict (unknown keys and
/// type mismatches are schema errors naming the offending field).
struct RunConfig {
  ModelParams model;

  // run block
  std::uint64_t seed = 1;
  std::size_t chains = 8;
  double burn_in = 50.0;
  double spacing = 1.0;
  std::size_t samples = 1000;  // per chain
  double horizon_time = 100.0;
  std::uint64_t horizon_events = 0;  // when > 0, overrides horizon_time
  std::size_t snapshots = 4;
  std::string sampler = "mcmc";  // "mcmc" | "cftp"
  std::string init = "empty";    // "empty" | "poisson"

  // verify block
  VerifyOptions verify;

  // oracle block
  int oracle_cells = 4;
  std::size_t oracle_cap = 3;
  double tv_threshold = 0.05;
  std::size_t tv_samples = 10000;

  // output block
  std::string out_dir = "out";
};

/// Parse and validate a config file. Schema or semantic problems raise
/// DomainError with the JSON path of the offending field; the file must be
/// valid JSON (parse errors report line and column).
RunConfig parse_run_config(const std::string& path);

/// Replace the master seed and rederive every stream family that hangs off
/// it (used by the --seed override).
void apply_seed(RunConfig& cfg, std::uint64_t seed);

/// Same, from an in-memory JSON text (used by tests).
RunConfig parse_run_config_text(const std::string& text, const std::string& origin = "<memory>");

/// Canonical JSON rendering of the fully resolved config (defaults expanded,
/// keys sorted). Written beside every run's outputs; its hash identifies the
/// run in reports.
std::string resolved_config_text(const RunConfig& cfg);

/// FNV-1a 64-bit hash, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace glauber
