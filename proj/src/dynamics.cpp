#include "glauber/dynamics.hpp"

#include <algorithm>

#include "glauber/errors.hpp"
#include "glauber/parallel.hpp"

namespace glauber {

const char* event_kind_name(Event::Kind k) {
  switch (k) {
    case Event::Kind::birth: return "birth";
    case Event::Kind::death: return "death";
    case Event::Kind::rejected_birth: return "rejected_birth";
  }
  return "?";
}

Event step_event(ChainState& state, const ModelParams& params) {
  const std::size_t n = state.config.size();
  const double birth_rate = params.activity * params.box.volume();
  const double total = static_cast<double>(n) + birth_rate;
  if (!(total > 0.0))
    throw DomainError("step_event: total jump rate is zero (empty chain at zero activity)");
  state.time += state.rng.exponential(total);
  if (state.rng.uniform01() * total < static_cast<double>(n)) {
    const std::size_t i = state.rng.uniform_index(n);
    const Point gone = state.config.at(i);
    state.config.remove_at(i);
    return Event{Event::Kind::death, gone, state.time};
  }
  const Point x = state.rng.uniform_point(params.box);
  const double accept = exp_neg(relative_energy(x, state.config, params));
  if (state.rng.uniform01() < accept) {
    state.config.insert(x);
    return Event{Event::Kind::birth, x, state.time};
  }
  return Event{Event::Kind::rejected_birth, x, state.time};
}

void advance_to(ChainState& state, const ModelParams& params, double target) {
  if (target < state.time) throw DomainError("advance_to: target before current time");
  const double birth_rate = params.activity * params.box.volume();
  while (true) {
    const double total = static_cast<double>(state.config.size()) + birth_rate;
    if (!(total > 0.0)) break;  // absorbed: nothing can ever happen
    const double wait = state.rng.exponential(total);
    if (state.time + wait >= target) break;  // discard the overshoot; memoryless
    state.time += wait;
    if (state.rng.uniform01() * total < static_cast<double>(state.config.size())) {
      state.config.remove_at(state.rng.uniform_index(state.config.size()));
    } else {
      const Point x = state.rng.uniform_point(params.box);
      const double accept = exp_neg(relative_energy(x, state.config, params));
      if (state.rng.uniform01() < accept) state.config.insert(x);
    }
  }
  state.time = target;
}

Trajectory run(ChainState& state, const ModelParams& params, const Horizon& horizon,
               const std::vector<double>& snapshot_times) {
  Trajectory traj;
  traj.box = params.box;
  traj.initial = state.config.points();
  const double birth_rate = params.activity * params.box.volume();
  if (horizon.kind == Horizon::Kind::events) {
    traj.events.reserve(horizon.events);
    for (std::uint64_t k = 0; k < horizon.events; ++k) {
      if (!(static_cast<double>(state.config.size()) + birth_rate > 0.0)) break;
      traj.events.push_back(step_event(state, params));
    }
    traj.end_time = state.time;
  } else {
    while (true) {
      if (!(static_cast<double>(state.config.size()) + birth_rate > 0.0)) break;
      Event ev = step_event(state, params);
      if (ev.at_time > horizon.time) {  // undo the crossing event; stop at the horizon
        if (ev.kind == Event::Kind::birth) state.config.remove_point(ev.where);
        if (ev.kind == Event::Kind::death) state.config.insert(ev.where);
        break;
      }
      traj.events.push_back(ev);
    }
    state.time = horizon.time;
    traj.end_time = horizon.time;
  }
  traj.snapshots = replay_snapshots(traj, snapshot_times);
  return traj;
}

std::vector<Snapshot> replay_snapshots(const Trajectory& traj, const std::vector<double>& times) {
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Snapshot> out;
  out.reserve(sorted.size());
  Configuration cur(traj.box);
  for (const Point& p : traj.initial) cur.insert(p);
  std::size_t next = 0;
  auto flush_until = [&](double t) {  // snapshots strictly before the next event time
    while (next < sorted.size() && sorted[next] < t) {
      out.push_back(Snapshot{sorted[next], cur.points()});
      ++next;
    }
  };
  for (const Event& ev : traj.events) {
    flush_until(ev.at_time);
    if (ev.kind == Event::Kind::birth) cur.insert(ev.where);
    if (ev.kind == Event::Kind::death) {
      if (!cur.remove_point(ev.where))
        throw DomainError("replay: death event for a point not present");
    }
  }
  while (next < sorted.size()) {  // at or after the last event: current state
    out.push_back(Snapshot{sorted[next], cur.points()});
    ++next;
  }
  return out;
}

std::vector<TimedSample> sample_equilibrium(const ModelParams& params, double burn_in,
                                            std::size_t count, double spacing,
                                            std::uint64_t seed) {
  if (!(burn_in >= 0.0)) throw DomainError("sample_equilibrium: burn_in must be nonnegative");
  if (!(spacing > 0.0)) throw DomainError("sample_equilibrium: spacing must be positive");
  ChainState state(params, seed);
  advance_to(state, params, burn_in);
  std::vector<TimedSample> samples;
  samples.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    advance_to(state, params, state.time + spacing);
    samples.push_back(TimedSample{state.time, state.config});
  }
  return samples;
}

SampleSet sample_ensemble(const ModelParams& params, const EnsembleConfig& cfg,
                          unsigned threads) {
  SampleSet set;
  set.chains.resize(cfg.chain_count);
  parallel_for(cfg.chain_count, threads, [&](std::size_t j) {
    set.chains[j] = sample_equilibrium(params, cfg.burn_in, cfg.samples_per_chain, cfg.spacing,
                                       derive_seed(cfg.seed, j));
  });
  return set;
}

}  // namespace glauber
