#include "glauber/cftp.hpp"

#include <cstddef>
#include <vector>

#include "glauber/errors.hpp"

namespace glauber {

namespace {

// One jump of the dominating free process, recorded in *forward* time. The
// list is built newest-first: element 0 is the last jump before time 0, and
// extending the window appends ever older events.
struct BackwardEvent {
  enum class Kind { birth, death };
  Kind kind;
  Point where;
  double mark = 0.0;  // acceptance uniform, used only by births
};

}  // namespace

Configuration cftp_sample(const ModelParams& params, RandomStream& rng,
                          const CftpOptions& options) {
  if (!params.potential.nonnegative())
    throw ModelError("cftp_sample requires a nonnegative (repulsive) potential");
  if (options.initial_events == 0) throw DomainError("cftp initial_events must be positive");

  const double beta = params.activity * params.box.volume();

  // Dominating state at time 0: the free process is in equilibrium, Poisson
  // with mean z|box|.
  Configuration now = params.make_configuration();
  const std::uint64_t n0 = rng.poisson(beta);
  for (std::uint64_t i = 0; i < n0; ++i) now.insert(rng.uniform_point(params.box));

  // Backward frontier: the dominating state at the far (oldest) end of the
  // currently simulated window. The time-reversed free process has the same
  // law as the forward one, so extending the window is one more step of an
  // ordinary birth-and-death jump chain started from `now`.
  Configuration frontier = now;
  std::vector<BackwardEvent> events;
  events.reserve(options.initial_events);

  // Grow the recorded history to `target` events (old randomness is reused
  // verbatim; only deeper history consumes fresh draws).
  const auto extend_history = [&](std::size_t target) {
    while (events.size() < target) {
      const double total = beta + static_cast<double>(frontier.size());
      if (total <= 0.0) return;  // z == 0 and empty: no jumps ever happen
      BackwardEvent ev;
      if (rng.uniform01() * total < beta) {
        // Reversed-time birth: in forward time this point dies at the event
        // and must already exist before it.
        ev.kind = BackwardEvent::Kind::death;
        ev.where = rng.uniform_point(params.box);
        frontier.insert(ev.where);
      } else {
        // Reversed-time death of a uniform particle: a forward-time birth.
        const std::size_t idx = rng.uniform_index(frontier.size());
        ev.kind = BackwardEvent::Kind::birth;
        ev.where = frontier.at(idx);
        ev.mark = rng.uniform01();
        frontier.remove_at(idx);
      }
      events.push_back(ev);
    }
  };

  for (std::size_t window = options.initial_events;; window *= 2) {
    extend_history(window);

    // Sandwich replay over the window. U starts at the dominating state, L at
    // the empty configuration; acceptance e^{-E(y, .)} is antitone in the
    // configuration for repulsive potentials, so evaluating each bound's
    // acceptance against the *other* bound keeps L <= U (as sets) and traps
    // every equilibrium chain between them.
    Configuration upper = frontier;
    Configuration lower = params.make_configuration();
    for (std::size_t k = events.size(); k-- > 0;) {
      const BackwardEvent& ev = events[k];
      if (ev.kind == BackwardEvent::Kind::death) {
        upper.remove_point(ev.where);
        lower.remove_point(ev.where);
      } else {
        const double accept_upper = exp_neg(relative_energy(ev.where, lower, params));
        const double accept_lower = exp_neg(relative_energy(ev.where, upper, params));
        if (ev.mark < accept_upper) upper.insert(ev.where);
        if (ev.mark < accept_lower) lower.insert(ev.where);
      }
    }

    // L <= U throughout, so equal sizes means coalescence; once equal the two
    // replays make identical decisions, so equality at time 0 is the test.
    if (lower.size() == upper.size()) return lower;
    if (events.size() < window) {
      // History cannot be extended (total jump rate hit zero) yet the bounds
      // disagree: impossible for this process, but guard against looping.
      throw CoalescenceError("cftp bounding processes cannot coalesce");
    }
    if (window > options.max_events / 2)
      throw CoalescenceError("cftp did not coalesce within the event budget");
  }
}

Configuration cftp_sample(const ModelParams& params, std::uint64_t seed,
                          const CftpOptions& options) {
  RandomStream rng(seed);
  return cftp_sample(params, rng, options);
}

}  // namespace glauber
