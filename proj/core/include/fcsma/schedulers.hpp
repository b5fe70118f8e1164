#ifndef FCSMA_SCHEDULERS_HPP
#define FCSMA_SCHEDULERS_HPP

#include <optional>
#include <span>
#include <vector>

#include "fcsma/contention.hpp"
#include "fcsma/rng.hpp"

namespace fcsma {

enum class CompletionRule {
  Threshold,     // winner serves iff the race resolves before the slot ends
  Proportional,  // winner serves with probability equal to the remaining slot fraction
};

struct ScheduleOutcome {
  std::optional<std::size_t> winner;
  std::vector<int> served;      // packets delivered per link this slot
  double absorption_time = 1.0; // slot fraction consumed by contention; 1 when unresolved
  bool dummy = false;           // winner held the channel with nothing to send
};

// Single-winner race over an exponential clock per link, rate exp(weight).
// The winner identity and the absorption time are sampled independently,
// which matches the joint law of the minimum of independent exponentials.
// Weights stay in log-domain throughout, so astronomically large rates are
// fine. Consumes links + 1 draws (threshold) or links + 2 (proportional).
ScheduleOutcome fcsma_select_continuous(const ContentionProfile& profile,
                                        std::span<const int> capacity,
                                        std::span<const int> arrivals,
                                        CompletionRule rule, RandomStream& rng);

// Discretized race: the slot splits into mini_slots rounds and a link fires
// in a round with probability 1 - exp(-rate / mini_slots). The earliest
// firing link wins (ties uniform); it delivers data only if at least one
// full round remains afterwards, so mini_slots = 1 never serves anyone.
// Sampled by per-link geometric inversion rather than scanning rounds.
// Consumes links + 1 draws.
ScheduleOutcome fcsma_select_minislot(const ContentionProfile& profile,
                                      std::span<const int> capacity,
                                      std::span<const int> arrivals,
                                      int mini_slots, RandomStream& rng);

struct QcsmaState {
  std::optional<std::size_t> active;
};

// One Glauber update on the complete conflict graph: pick a uniform
// decision link; if some other link holds the channel the decision link
// stays off, otherwise it (re)activates with probability
// sigma(w) = e^w / (1 + e^w).
QcsmaState qcsma_step(std::span<const double> weights, const QcsmaState& state,
                      RandomStream& rng);

// Runs mini_slots Glauber updates within one slot. An active link with data
// transmits in its first active round and releases the channel at the end
// of that round; it may re-activate later in the slot but delivers nothing
// more (per-slot service is capped at one transmission per link). Several
// links can therefore serve within one slot. Weights here are the plain
// products queue * min(capacity, arrivals), not log-domain rates.
ScheduleOutcome qcsma_slot(std::span<const double> weights,
                           std::span<const int> capacity,
                           std::span<const int> arrivals, int mini_slots,
                           QcsmaState& state, RandomStream& rng);

// Centralized comparison point: serve the link with the largest log-domain
// weight, ties toward the lowest index. No randomness, no contention cost.
ScheduleOutcome maxweight_select(const ContentionProfile& profile,
                                 std::span<const int> capacity,
                                 std::span<const int> arrivals);

}  // namespace fcsma

#endif
