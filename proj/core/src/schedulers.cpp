#include "fcsma/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fcsma {

namespace {

void check_inputs(std::size_t links, std::span<const int> capacity,
                  std::span<const int> arrivals) {
  if (capacity.size() != links || arrivals.size() != links)
    throw std::invalid_argument("capacity/arrival vectors must match link count");
}

int deliverable(std::span<const int> capacity, std::span<const int> arrivals,
                std::size_t link) {
  return std::min(capacity[link], arrivals[link]);
}

double sigmoid(double w) {
  if (w > 40.0) return 1.0;
  if (w < -40.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-w));
}

}  // namespace

ScheduleOutcome fcsma_select_continuous(const ContentionProfile& profile,
                                        std::span<const int> capacity,
                                        std::span<const int> arrivals,
                                        CompletionRule rule, RandomStream& rng) {
  const std::size_t n = profile.size();
  check_inputs(n, capacity, arrivals);

  // Gumbel-max trick: argmax(weight + Gumbel) has the same law as the
  // race winner, without ever forming the possibly-overflowing rates.
  std::size_t winner = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < n; ++l) {
    const double score = profile.weights[l] + rng.gumbel();
    if (score > best) {
      best = score;
      winner = l;
    }
  }

  const double absorption =
      rng.standard_exponential() * std::exp(-profile.log_total_rate);

  ScheduleOutcome out;
  out.winner = winner;
  out.absorption_time = absorption;
  out.served.assign(n, 0);

  const int amount = deliverable(capacity, arrivals, winner);
  out.dummy = amount == 0;

  bool serves = false;
  switch (rule) {
    case CompletionRule::Threshold:
      serves = absorption < 1.0;
      break;
    case CompletionRule::Proportional:
      serves = rng.uniform01() < 1.0 - absorption;
      break;
  }
  if (serves && amount > 0) out.served[winner] = amount;
  return out;
}

ScheduleOutcome fcsma_select_minislot(const ContentionProfile& profile,
                                      std::span<const int> capacity,
                                      std::span<const int> arrivals,
                                      int mini_slots, RandomStream& rng) {
  const std::size_t n = profile.size();
  check_inputs(n, capacity, arrivals);
  if (mini_slots < 1) throw std::invalid_argument("mini_slots must be >= 1");

  const double log_m = std::log(static_cast<double>(mini_slots));
  const auto never = std::numeric_limits<std::int64_t>::max();

  // First firing round per link via geometric inversion; equivalent in law
  // to scanning rounds with per-round firing probability 1 - e^{-r/M}.
  std::vector<std::int64_t> rounds(n, never);
  std::int64_t best_round = never;
  for (std::size_t l = 0; l < n; ++l) {
    const double u = rng.uniform_open();
    const double shifted = profile.weights[l] - log_m;  // log(r / M)
    if (shifted > 36.0) {
      rounds[l] = 0;  // firing probability is 1 to double precision
    } else {
      const double p = -std::expm1(-std::exp(shifted));
      if (p > 0.0) {
        const double g = p >= 1.0 ? 0.0 : std::floor(std::log(u) / std::log1p(-p));
        if (g < static_cast<double>(never)) rounds[l] = static_cast<std::int64_t>(g);
      }
    }
    best_round = std::min(best_round, rounds[l]);
  }

  // Resolve ties uniformly. The draw happens unconditionally so the stream
  // advances by the same amount every slot.
  const double tie_u = rng.uniform01();

  ScheduleOutcome out;
  out.served.assign(n, 0);
  if (best_round >= mini_slots) {
    out.absorption_time = 1.0;
    return out;
  }

  int tied = 0;
  for (std::size_t l = 0; l < n; ++l)
    if (rounds[l] == best_round) ++tied;
  int pick = static_cast<int>(tie_u * tied);
  if (pick >= tied) pick = tied - 1;
  std::size_t winner = 0;
  for (std::size_t l = 0, seen = 0; l < n; ++l) {
    if (rounds[l] != best_round) continue;
    if (static_cast<int>(seen) == pick) {
      winner = l;
      break;
    }
    ++seen;
  }
  out.winner = winner;
  out.absorption_time = static_cast<double>(best_round + 1) / mini_slots;
  const int amount = deliverable(capacity, arrivals, winner);
  out.dummy = amount == 0;
  if (best_round <= mini_slots - 2 && amount > 0) out.served[winner] = amount;
  return out;
}

QcsmaState qcsma_step(std::span<const double> weights, const QcsmaState& state,
                      RandomStream& rng) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("qcsma needs at least one link");

  std::size_t decision = static_cast<std::size_t>(rng.uniform01() * n);
  if (decision >= n) decision = n - 1;

  if (state.active && *state.active != decision) return state;  // blocked

  QcsmaState next;
  if (rng.bernoulli(sigmoid(weights[decision]))) next.active = decision;
  return next;
}

ScheduleOutcome qcsma_slot(std::span<const double> weights,
                           std::span<const int> capacity,
                           std::span<const int> arrivals, int mini_slots,
                           QcsmaState& state, RandomStream& rng) {
  const std::size_t n = weights.size();
  check_inputs(n, capacity, arrivals);
  if (mini_slots < 1) throw std::invalid_argument("mini_slots must be >= 1");

  ScheduleOutcome out;
  out.served.assign(n, 0);
  out.absorption_time = 0.0;
  std::vector<bool> done(n, false);

  for (int m = 0; m < mini_slots; ++m) {
    state = qcsma_step(weights, state, rng);
    if (!state.active) continue;
    const std::size_t l = *state.active;
    if (done[l]) continue;
    const int amount = deliverable(capacity, arrivals, l);
    if (amount == 0) continue;
    out.served[l] = amount;
    done[l] = true;
    if (!out.winner) out.winner = l;
    state.active.reset();  // transmission complete, channel released
  }
  return out;
}

ScheduleOutcome maxweight_select(const ContentionProfile& profile,
                                 std::span<const int> capacity,
                                 std::span<const int> arrivals) {
  const std::size_t n = profile.size();
  check_inputs(n, capacity, arrivals);

  std::size_t winner = 0;
  for (std::size_t l = 1; l < n; ++l)
    if (profile.weights[l] > profile.weights[winner]) winner = l;

  ScheduleOutcome out;
  out.served.assign(n, 0);
  out.winner = winner;
  out.absorption_time = 0.0;
  const int amount = deliverable(capacity, arrivals, winner);
  out.dummy = amount == 0;
  if (amount > 0) out.served[winner] = amount;
  return out;
}

}  // namespace fcsma
