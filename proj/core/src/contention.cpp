#include "fcsma/contention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fcsma {

namespace {

void check_observation(const LinkObservation& obs) {
  if (obs.capacity < 0) throw std::invalid_argument("capacity must be >= 0");
  if (obs.arrivals < 0) throw std::invalid_argument("arrivals must be >= 0");
  if (!(obs.queue >= 0.0)) throw std::invalid_argument("queue must be >= 0");
}

}  // namespace

double contention_rate(const LinkObservation& obs, const WeightFunction& wf) {
  return std::exp(link_weight(obs, wf));
}

double link_weight(const LinkObservation& obs, const WeightFunction& wf) {
  check_observation(obs);
  const int usable = std::min(obs.capacity, obs.arrivals);
  return static_cast<double>(usable) * wf.log_value(obs.queue);
}

ContentionProfile ContentionProfile::build(std::span<const double> queue,
                                           std::span<const int> capacity,
                                           std::span<const int> arrivals,
                                           const WeightFunction& wf) {
  const std::size_t n = queue.size();
  if (n == 0) throw std::invalid_argument("profile needs at least one link");
  if (capacity.size() != n || arrivals.size() != n)
    throw std::invalid_argument("profile inputs must have equal length");

  ContentionProfile profile;
  profile.weights.resize(n);
  profile.rates.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    profile.weights[l] =
        link_weight({queue[l], capacity[l], arrivals[l]}, wf);
  }
  profile.max_weight = *std::max_element(profile.weights.begin(), profile.weights.end());

  double sum = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    profile.rates[l] = std::exp(profile.weights[l]);
    sum += std::exp(profile.weights[l] - profile.max_weight);
  }
  profile.log_total_rate = profile.max_weight + std::log(sum);
  return profile;
}

double selection_probability(const ContentionProfile& profile, std::size_t link) {
  if (link >= profile.size()) throw std::out_of_range("link index out of range");
  const double win = std::exp(profile.weights[link] - profile.log_total_rate);
  return win * (-std::expm1(-profile.log_total_rate));
}

double race_service_probability(const ContentionProfile& profile, std::size_t link) {
  if (link >= profile.size()) throw std::out_of_range("link index out of range");
  const double win = std::exp(profile.weights[link] - profile.log_total_rate);
  const double z = std::exp(profile.log_total_rate);
  return win * (-std::expm1(-z));
}

double low_weight_selection_bound(std::size_t links, double epsilon,
                                  double max_weight) {
  if (links == 0) throw std::invalid_argument("links must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(max_weight >= 0.0)) throw std::invalid_argument("max_weight must be >= 0");
  return static_cast<double>(links) * std::exp(-epsilon * max_weight);
}

}  // namespace fcsma
