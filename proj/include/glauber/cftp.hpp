#pragma once

#include <cstdint>

#include "glauber/model.hpp"
#include "glauber/rng.hpp"

namespace glauber {

/// Controls for the perfect sampler. The backward event window starts at
/// `initial_events` and doubles until the bounding processes coalesce;
/// exceeding `max_events` raises a coalescence error rather than returning an
/// approximate sample.
struct CftpOptions {
  std::size_t initial_events = 64;
  std::size_t max_events = std::size_t{1} << 22;
};

/// One exact draw from the equilibrium law via dominated coupling from the
/// past. The dominating process is the free birth-and-death process (birth
/// rate z|box| with uniform locations, unit per-particle death rate) started
/// from its Poisson equilibrium and extended backwards; sandwiching processes
/// exploit that the birth acceptance e^{-E} is antitone in the configuration,
/// which requires a nonnegative potential. Replays reuse the recorded
/// randomness, so the returned configuration is an unbiased equilibrium draw.
Configuration cftp_sample(const ModelParams& params, RandomStream& rng,
                          const CftpOptions& options = {});

/// Convenience wrapper seeding a fresh stream.
Configuration cftp_sample(const ModelParams& params, std::uint64_t seed,
                          const CftpOptions& options = {});

}  // namespace glauber
