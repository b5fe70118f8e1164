#ifndef FCSMA_PROCESSES_HPP
#define FCSMA_PROCESSES_HPP

#include <span>
#include <vector>

#include "fcsma/rng.hpp"

namespace fcsma {

// Per-slot packet arrivals, i.i.d. across slots and links.
//
// bernoulli: 0/1 arrivals with mean rate[l].
// batch-uniform: with probability rate[l] / ((max_batch + 1) / 2) the slot
// carries a batch sized uniformly on {1..max_batch}, otherwise nothing;
// the mean is rate[l] and every draw stays <= max_batch.
struct ArrivalModel {
  enum class Kind { Bernoulli, BatchUniform };
  Kind kind = Kind::Bernoulli;
  std::vector<double> rate;  // per-link mean arrivals per slot
  int max_batch = 1;

  void validate() const;  // throws std::invalid_argument
};

std::vector<int> sample_arrivals(const ArrivalModel& model,
                                 std::span<RandomStream> streams);

// Per-slot channel capacities, i.i.d. across slots and links.
//
// on-off: capacity packets with probability on_probability[l], else 0.
// constant: capacity packets every slot.
struct ChannelModel {
  enum class Kind { OnOff, Constant };
  Kind kind = Kind::OnOff;
  std::vector<double> on_probability;  // unused for constant
  int capacity = 1;

  void validate(std::size_t links) const;
};

std::vector<int> sample_channels(const ChannelModel& model,
                                 std::span<RandomStream> streams);

// Per-slot drop allowance credited to each virtual queue. The mean must be
// rho[l] * lambda[l]; allowances may be fractional but never exceed
// max_allowance.
//
// bernoulli: allowance 1 with probability mean[l] (requires mean <= 1).
// constant: allowance mean[l] every slot. Deterministic flow, useful when
// an experiment needs the drop budget itself noise-free.
struct DropAllowanceModel {
  enum class Kind { Bernoulli, Constant };
  Kind kind = Kind::Bernoulli;
  std::vector<double> mean;  // per-link rho * lambda
  double max_allowance = 1.0;

  void validate() const;
};

std::vector<double> sample_drop_allowance(const DropAllowanceModel& model,
                                          std::span<RandomStream> streams);

}  // namespace fcsma

#endif
