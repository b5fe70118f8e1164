#ifndef FCSMA_VERIFY_HPP
#define FCSMA_VERIFY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fcsma/config.hpp"
#include "fcsma/engine.hpp"
#include "fcsma/weight.hpp"

namespace fcsma {

// Statistical checks of the model identities. Every report carries its
// sample counts and standard errors, and a PASS is always backed by an
// explicit numeric margin in the rendered text.

struct Eq8LinkReport {
  double winner_frequency = 0.0;
  double winner_probability = 0.0;  // r_l / Z
  double winner_se = 0.0;
  double service_frequency = 0.0;
  double service_probability = 0.0;          // (r_l / Z)(1 - e^{-Z}), threshold rule
  double rounded_service_probability = 0.0;  // (r_l / Z)(1 - 1/Z)
};

struct Eq8Report {
  std::size_t samples = 0;
  std::vector<Eq8LinkReport> links;
  double mean_absorption = 0.0;
  double expected_absorption = 0.0;  // 1 / Z
  double absorption_se = 0.0;
  double max_deviation_se = 0.0;  // worst |frequency - probability| / se
  double max_rounded_gap = 0.0;   // worst |exact - rounded| service probability
  bool pass = false;
  std::string to_text() const;
};

// Samples the continuous race (threshold rule) and compares winner
// frequencies, service frequencies and the mean absorption time against
// their closed forms. PASS iff every deviation stays within 4 standard
// errors. The gap of the rounded service form is reported, not gated.
Eq8Report verify_eq8(std::span<const double> queue, std::span<const int> capacity,
                     std::span<const int> arrivals, const WeightFunction& wf,
                     std::size_t samples, std::uint64_t seed);

struct Lemma2Check {
  double epsilon = 0.0;
  double bound = 0.0;      // links * exp(-epsilon * max_weight)
  double frequency = 0.0;  // empirical chance of a low-weight winner
  double se = 0.0;
  bool pass = false;  // frequency <= bound + 4 se
};

struct Lemma2StateReport {
  std::vector<double> weights;
  double max_weight = 0.0;
  std::size_t samples = 0;
  std::vector<Lemma2Check> checks;
};

struct Lemma2Report {
  std::vector<Lemma2StateReport> states;
  std::size_t total_samples = 0;
  bool pass = false;
  std::string to_text() const;
};

// Draws random weight states (top weight uniform on [max_weight_low,
// max_weight_high], the rest uniform below it), then checks empirically
// that the race picks a link with weight under (1 - epsilon) * max_weight
// no more often than the tail bound allows.
Lemma2Report verify_lemma2(int links, int states, double max_weight_low,
                           double max_weight_high, std::span<const double> epsilons,
                           std::size_t samples_per_state, std::uint64_t seed);

struct StabilityRun {
  double rate = 0.0;
  std::uint64_t seed = 0;
  HorizonSummary summary;
};

struct StabilityReport {
  double inside_rate = 0.0;
  double outside_rate = 0.0;
  double boundary_rate = 0.0;
  double growth_threshold = 0.0;     // required final total queue, outside runs
  double drop_fraction_limit = 0.0;  // rho + tolerance, inside runs
  std::vector<StabilityRun> inside_runs;
  std::vector<StabilityRun> outside_runs;
  bool pass = false;
  std::string to_text() const;
};

// Runs the configured scheduler on both sides of the admission boundary:
// every inside replication must be stable with per-link drop fractions at
// most rho + 0.02, every outside replication must build queue at least a
// quarter of the expected excess inflow over the horizon. Requires the
// symmetric 0/1 scenario (bernoulli arrivals, unit-capacity on-off
// channels, uniform rho and p) and rejects rates whose region verdicts do
// not actually fall inside respectively outside.
StabilityReport verify_stability(const ScenarioConfig& base, double inside_rate,
                                 double outside_rate);

struct RaceConvergencePoint {
  int mini_slots = 0;
  double tv_distance = 0.0;
};

struct RaceConvergenceReport {
  std::size_t samples = 0;
  std::vector<RaceConvergencePoint> points;
  double final_tv = 0.0;
  double tv_limit = 0.0;
  double monotonicity_tolerance = 0.0;
  bool pass = false;
  std::string to_text() const;
};

// Total variation distance between the empirical winner distribution of
// the mini-slot race and the continuous race, for each round count in
// m_values (ascending). PASS iff the distances are non-increasing within
// a sampling tolerance and the final one is below 0.01.
RaceConvergenceReport verify_race_convergence(std::span<const double> queue,
                                              std::span<const int> capacity,
                                              std::span<const int> arrivals,
                                              const WeightFunction& wf,
                                              std::span<const int> m_values,
                                              std::size_t samples, std::uint64_t seed);

}  // namespace fcsma

#endif
