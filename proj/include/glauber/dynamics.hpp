#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glauber/model.hpp"
#include "glauber/rng.hpp"

namespace glauber {

/// One transition of the jump chain. Rejected birth proposals advance the
/// clock without changing the configuration.
struct Event {
  enum class Kind { birth, death, rejected_birth };
  Kind kind;
  Point where;
  double at_time;
};

const char* event_kind_name(Event::Kind k);

/// Mutable simulation state: configuration, process clock, random stream.
struct ChainState {
  Configuration config;
  double time = 0.0;
  RandomStream rng;

  ChainState(const ModelParams& params, std::uint64_t seed)
      : config(params.make_configuration()), rng(seed) {}
};

/// Draw the next event of the birth-and-death chain and apply it.
/// Total jump rate is |gamma| + z|box|; a death removes a uniformly chosen
/// particle, a birth proposal lands uniformly in the box and is accepted with
/// probability e^{-E(x, gamma)}. Requires a positive total rate.
Event step_event(ChainState& state, const ModelParams& params);

/// Advance the chain to exactly `target` process time (memoryless restart at
/// the horizon makes the cut exact). No events are recorded.
void advance_to(ChainState& state, const ModelParams& params, double target);

/// How long to run: a fixed number of events or a fixed process time.
struct Horizon {
  enum class Kind { events, time };
  Kind kind = Kind::events;
  std::uint64_t events = 0;
  double time = 0.0;

  static Horizon by_events(std::uint64_t n) { return {Kind::events, n, 0.0}; }
  static Horizon by_time(double t) { return {Kind::time, 0, t}; }
};

struct Snapshot {
  double at_time;
  std::vector<Point> points;
};

/// Event log plus snapshots; replaying the events from the initial
/// configuration reproduces every snapshot exactly.
struct Trajectory {
  Box box;
  std::vector<Point> initial;
  std::vector<Event> events;
  std::vector<Snapshot> snapshots;
  double end_time = 0.0;
};

/// Simulate to the horizon, recording all events and the configuration at the
/// requested snapshot times (state just after the last event at or before t).
Trajectory run(ChainState& state, const ModelParams& params, const Horizon& horizon,
               const std::vector<double>& snapshot_times = {});

/// Recompute the configurations at the given times from the trajectory's
/// initial state and event log.
std::vector<Snapshot> replay_snapshots(const Trajectory& traj, const std::vector<double>& times);

/// Equilibrium samples from one chain started empty: burn-in, then `count`
/// configurations spaced by `spacing` process-time units.
struct TimedSample {
  double at_time;
  Configuration config;
};
std::vector<TimedSample> sample_equilibrium(const ModelParams& params, double burn_in,
                                            std::size_t count, double spacing,
                                            std::uint64_t seed);

/// Multi-chain equilibrium ensemble; chain j uses the stream derived from
/// (seed, j), so results are independent of the worker count.
struct SampleSet {
  std::vector<std::vector<TimedSample>> chains;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& c : chains) n += c.size();
    return n;
  }
};

struct EnsembleConfig {
  std::size_t chain_count = 8;
  std::size_t samples_per_chain = 1000;
  double burn_in = 50.0;
  double spacing = 1.0;
  std::uint64_t seed = 1;
};

SampleSet sample_ensemble(const ModelParams& params, const EnsembleConfig& cfg,
                          unsigned threads = 1);

}  // namespace glauber
