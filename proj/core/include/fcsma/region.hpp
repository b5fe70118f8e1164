#ifndef FCSMA_REGION_HPP
#define FCSMA_REGION_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace fcsma {

// Symmetric scenarios (every link shares lambda, rho, p, unit capacities,
// 0/1 arrivals) admit a closed-form admission test: a common rate lambda is
// sustainable iff
//   links * (1 - drop_fraction) * lambda < 1 - (1 - on_probability * lambda)^links.
// The left side is the service the links collectively demand, the right the
// chance that at least one link could use the slot at all.
double symmetric_excess_demand(int links, double drop_fraction,
                               double on_probability, double rate);

// Largest sustainable symmetric rate, found by bisection and capped at 1
// (rates are per-slot probabilities here). Zero when the region is empty.
double symmetric_boundary(int links, double drop_fraction, double on_probability);

enum class RegionVerdict { Inside, Boundary, Outside };

// Verdict for one symmetric rate; Boundary within 1e-9 of exact balance.
RegionVerdict membership_symmetric(int links, double drop_fraction,
                                   double on_probability, double rate);

// General finite instance: joint arrival vectors and joint channel vectors
// with explicit probabilities (arrivals independent of channels), plus the
// per-link demand pair (arrival rate, allowed drop fraction). Small by
// design; validate() enforces the documented limits.
struct RegionInstance {
  std::vector<std::vector<int>> arrival_support;
  std::vector<double> arrival_probability;
  std::vector<std::vector<int>> channel_support;
  std::vector<double> channel_probability;
  std::vector<double> arrival_rate;
  std::vector<double> drop_fraction;

  std::size_t links() const { return arrival_rate.size(); }

  // Throws std::invalid_argument: empty supports, mismatched lengths,
  // negative entries, probabilities that miss 1 by more than 1e-12, rates
  // inconsistent with the arrival marginals beyond 1e-9, more than 6 links,
  // or a joint support above 10000 points.
  void validate() const;
};

// Product-Bernoulli instance used by the symmetric cross-checks.
RegionInstance make_symmetric_instance(int links, double rate,
                                       double drop_fraction, double on_probability);

// Feasibility of serving every link at rate lambda_l * (1 - rho_l) with
// single-winner schedules, phrased as a max-slack linear program over
// conditional schedule distributions. max_slack is the largest uniform
// margin t such that every link can be served at its target plus t;
// feasible means max_slack >= required_slack (within 1e-9), boundary that
// the optimum sits within 1e-9 of zero.
struct LpRegionResult {
  bool feasible = false;
  bool boundary = false;
  double max_slack = 0.0;
  double required_slack = 0.0;
  // One row per joint (arrival, channel) point: distribution over the
  // schedules {idle, serve link 0, ..., serve link n-1}. Present only for
  // feasible instances.
  std::vector<std::vector<double>> witness;
  std::vector<std::pair<std::size_t, std::size_t>> joint_points;
};

LpRegionResult lp_feasibility(const RegionInstance& instance, double required_slack = 0.0);

// Price-vector check of the same feasibility question: for nonnegative
// prices w the served value can never exceed the best single-link value,
//   sum_l w_l lambda_l (1 - rho_l)  <=  E[max_l w_l min(C_l, A_l)].
// A violating w certifies infeasibility; exhausting the directions without
// a violation is evidence (not proof) of feasibility. Scans the simplex
// grid plus random_directions random simplex points.
struct DualityCheck {
  bool violation_found = false;
  std::vector<double> direction;
  double demand = 0.0;
  double supply = 0.0;
  std::size_t directions_checked = 0;
};

DualityCheck duality_oracle(const RegionInstance& instance,
                            std::size_t random_directions = 10000,
                            std::uint64_t seed = 12345);

}  // namespace fcsma

#endif
