#include "fcsma/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fcsma {

int dropped_packets(int arrivals, int served) {
  if (arrivals < 0 || served < 0)
    throw std::invalid_argument("arrivals and served must be >= 0");
  if (served > arrivals)
    throw std::invalid_argument("served packets cannot exceed arrivals");
  return arrivals - served;
}

QueueUpdate update_virtual_queue(double queue, double dropped, double allowance) {
  if (!(queue >= 0.0) || !(dropped >= 0.0) || !(allowance >= 0.0))
    throw std::invalid_argument("queue, dropped and allowance must be >= 0");
  const double loaded = queue + dropped;
  const double unused = std::max(allowance - loaded, 0.0);
  const double next = std::max(loaded - allowance, 0.0);
  return {next, unused};
}

namespace {

std::vector<RandomStream> make_streams(std::uint64_t seed, StreamPurpose purpose,
                                       std::size_t links) {
  std::vector<RandomStream> streams;
  streams.reserve(links);
  for (std::size_t l = 0; l < links; ++l) streams.emplace_back(seed, purpose, l);
  return streams;
}

}  // namespace

SlotEngine::SlotEngine(const ScenarioConfig& config)
    : config_(config),
      arrival_model_(config.arrival_model()),
      channel_model_(config.channel_model()),
      drop_model_(config.drop_model()),
      weight_(config.weight_function()),
      arrival_streams_(make_streams(config.seed, StreamPurpose::Arrival,
                                    static_cast<std::size_t>(std::max(config.links, 0)))),
      channel_streams_(make_streams(config.seed, StreamPurpose::Channel,
                                    static_cast<std::size_t>(std::max(config.links, 0)))),
      drop_streams_(make_streams(config.seed, StreamPurpose::DropAllowance,
                                 static_cast<std::size_t>(std::max(config.links, 0)))),
      scheduler_stream_(config.seed, StreamPurpose::Scheduler) {
  const auto errors = validate_scenario(config);
  if (!errors.empty())
    throw std::invalid_argument("invalid scenario: " + errors.front().field + " " +
                                errors.front().message);
  const auto n = static_cast<std::size_t>(config.links);
  queue_.assign(n, 0.0);
  arrivals_.assign(n, 0);
  served_.assign(n, 0);
  dropped_.assign(n, 0);
  allowance_.assign(n, 0.0);
  unused_.assign(n, 0.0);
}

SlotSample SlotEngine::step() {
  const auto n = queue_.size();

  const auto arrivals = sample_arrivals(arrival_model_, arrival_streams_);
  const auto capacity = sample_channels(channel_model_, channel_streams_);
  const auto allowance = sample_drop_allowance(drop_model_, drop_streams_);

  ScheduleOutcome outcome;
  switch (config_.scheduler) {
    case SchedulerKind::FcsmaContinuous: {
      const auto profile = ContentionProfile::build(queue_, capacity, arrivals, weight_);
      outcome = fcsma_select_continuous(profile, capacity, arrivals,
                                        config_.completion_rule, scheduler_stream_);
      break;
    }
    case SchedulerKind::FcsmaMinislot: {
      const auto profile = ContentionProfile::build(queue_, capacity, arrivals, weight_);
      outcome = fcsma_select_minislot(profile, capacity, arrivals,
                                      config_.mini_slots, scheduler_stream_);
      break;
    }
    case SchedulerKind::Qcsma: {
      std::vector<double> weights(n);
      for (std::size_t l = 0; l < n; ++l)
        weights[l] = queue_[l] * std::min(capacity[l], arrivals[l]);
      if (config_.qcsma_reset_each_slot) qcsma_state_.active.reset();
      outcome = qcsma_slot(weights, capacity, arrivals, config_.mini_slots,
                           qcsma_state_, scheduler_stream_);
      break;
    }
    case SchedulerKind::MaxWeight: {
      const auto profile = ContentionProfile::build(queue_, capacity, arrivals, weight_);
      outcome = maxweight_select(profile, capacity, arrivals);
      break;
    }
  }

  SlotSample sample;
  for (std::size_t l = 0; l < n; ++l) {
    const int dropped = dropped_packets(arrivals[l], outcome.served[l]);
    const auto update = update_virtual_queue(queue_[l], dropped, allowance[l]);
    queue_[l] = update.queue;
    arrivals_[l] += static_cast<std::uint64_t>(arrivals[l]);
    served_[l] += static_cast<std::uint64_t>(outcome.served[l]);
    dropped_[l] += static_cast<std::uint64_t>(dropped);
    allowance_[l] += allowance[l];
    unused_[l] += update.unused;
    sample.total_queue += queue_[l];
    sample.total_log_weight += weight_.log_value(queue_[l]);
  }
  ++slots_;
  return sample;
}

double SlotEngine::drop_fraction(std::size_t link) const {
  if (link >= queue_.size()) throw std::out_of_range("link index out of range");
  if (arrivals_[link] == 0) return 0.0;
  return static_cast<double>(dropped_[link]) / static_cast<double>(arrivals_[link]);
}

double SlotEngine::service_fraction(std::size_t link) const {
  if (link >= queue_.size()) throw std::out_of_range("link index out of range");
  if (arrivals_[link] == 0) return 0.0;
  return static_cast<double>(served_[link]) / static_cast<double>(arrivals_[link]);
}

namespace {

double mean_total_queue(const std::vector<SlotSample>& trace, std::size_t begin,
                        std::size_t end) {
  if (begin >= end) return 0.0;
  double sum = 0.0;
  for (std::size_t t = begin; t < end; ++t) sum += trace[t].total_queue;
  return sum / static_cast<double>(end - begin);
}

double least_squares_slope(const std::vector<SlotSample>& trace, std::size_t begin) {
  const std::size_t count = trace.size() - begin;
  if (count < 2) return 0.0;
  const double t_mean = (static_cast<double>(count) - 1.0) / 2.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < count; ++i) y_mean += trace[begin + i].total_queue;
  y_mean /= static_cast<double>(count);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dt = static_cast<double>(i) - t_mean;
    num += dt * (trace[begin + i].total_queue - y_mean);
    den += dt * dt;
  }
  return num / den;
}

constexpr double kDriftSlopeLimit = 1e-3;       // packets per slot
constexpr double kQuarterMeanTolerance = 0.20;  // relative

}  // namespace

HorizonResult run_horizon(const ScenarioConfig& config) {
  SlotEngine engine(config);

  HorizonResult result;
  result.trace.reserve(static_cast<std::size_t>(config.horizon));
  for (std::uint64_t t = 0; t < config.horizon; ++t)
    result.trace.push_back(engine.step());

  auto& s = result.summary;
  s.slots = config.horizon;
  const auto n = static_cast<std::size_t>(config.links);
  s.drop_fraction.resize(n);
  s.service_fraction.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    s.drop_fraction[l] = engine.drop_fraction(l);
    s.service_fraction[l] = engine.service_fraction(l);
  }
  result.final_queue = engine.queue();

  const std::size_t T = result.trace.size();
  if (T == 0) return result;  // summary stays flagged undefined

  s.defined = true;
  s.mean_total_queue = mean_total_queue(result.trace, 0, T);
  double log_weight_sum = 0.0;
  for (const auto& sample : result.trace) log_weight_sum += sample.total_log_weight;
  s.mean_total_log_weight = log_weight_sum / static_cast<double>(T);
  s.final_total_queue = result.trace.back().total_queue;

  s.drift_slope = least_squares_slope(result.trace, T / 2);
  s.mid_mean = mean_total_queue(result.trace, T / 4, 3 * T / 4);
  s.final_quarter_mean = mean_total_queue(result.trace, 3 * T / 4, T);

  const bool slope_ok = s.drift_slope < kDriftSlopeLimit;
  const bool mean_ok = std::abs(s.final_quarter_mean - s.mid_mean) <=
                       kQuarterMeanTolerance * s.mid_mean + 1e-9;
  s.stable = slope_ok && mean_ok;
  return result;
}

}  // namespace fcsma
