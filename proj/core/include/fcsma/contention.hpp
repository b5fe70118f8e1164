#ifndef FCSMA_CONTENTION_HPP
#define FCSMA_CONTENTION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "fcsma/weight.hpp"

namespace fcsma {

// One link's view at the start of a slot: virtual queue length, channel
// capacity, and fresh arrivals. Capacity and arrivals are packet counts.
struct LinkObservation {
  double queue = 0.0;
  int capacity = 0;
  int arrivals = 0;
};

// Contention rate f(x)^min(c, a). Idle and starved links still contend at
// rate f(x)^0 = 1. Computed as exp(min(c, a) * log f(x)); may overflow to
// +inf for aggressive weight functions, which is why the race itself runs
// on log-domain weights.
double contention_rate(const LinkObservation& obs, const WeightFunction& wf);

// Log-domain rate: min(c, a) * log f(x).
double link_weight(const LinkObservation& obs, const WeightFunction& wf);

// Per-slot contention state for a set of links.
struct ContentionProfile {
  std::vector<double> weights;       // log-domain rates
  std::vector<double> rates;         // exp(weights); may hold +inf
  double log_total_rate = 0.0;       // log sum of rates, via log-sum-exp
  double max_weight = 0.0;

  std::size_t size() const { return weights.size(); }

  static ContentionProfile build(std::span<const double> queue,
                                 std::span<const int> capacity,
                                 std::span<const int> arrivals,
                                 const WeightFunction& wf);
};

// Probability that a given link both wins the race and finishes it with a
// full slot-fraction to spare under the rounded completion model:
// (r_l / Z) * (1 - 1/Z).
double selection_probability(const ContentionProfile& profile, std::size_t link);

// Exact per-slot service probability of a link under the threshold
// completion rule: (r_l / Z) * (1 - e^{-Z}).
double race_service_probability(const ContentionProfile& profile, std::size_t link);

// Upper bound on the chance the race picks any link whose log-domain rate
// falls short of the maximum by a factor 1-epsilon or more:
// links * exp(-epsilon * max_weight). May exceed 1 (vacuous) for small
// max_weight.
double low_weight_selection_bound(std::size_t links, double epsilon,
                                  double max_weight);

}  // namespace fcsma

#endif
