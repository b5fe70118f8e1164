#include "fcsma/processes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fcsma {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void ArrivalModel::validate() const {
  require(!rate.empty(), "arrival model needs at least one link");
  require(max_batch >= 1, "max_batch must be >= 1");
  const double batch_mean = (max_batch + 1) / 2.0;
  for (double r : rate) {
    require(r >= 0.0, "arrival rate must be >= 0");
    if (kind == Kind::Bernoulli) require(r <= 1.0, "bernoulli arrival rate must be <= 1");
    else require(r <= batch_mean, "batch-uniform arrival rate must be <= (max_batch + 1) / 2");
  }
}

std::vector<int> sample_arrivals(const ArrivalModel& model,
                                 std::span<RandomStream> streams) {
  if (streams.size() != model.rate.size())
    throw std::invalid_argument("one arrival stream per link required");
  std::vector<int> arrivals(model.rate.size(), 0);
  for (std::size_t l = 0; l < arrivals.size(); ++l) {
    if (model.kind == ArrivalModel::Kind::Bernoulli) {
      arrivals[l] = streams[l].bernoulli(model.rate[l]) ? 1 : 0;
    } else {
      const double occupancy = model.rate[l] / ((model.max_batch + 1) / 2.0);
      if (streams[l].bernoulli(occupancy)) {
        const double u = streams[l].uniform01();
        arrivals[l] = 1 + static_cast<int>(u * model.max_batch);
        if (arrivals[l] > model.max_batch) arrivals[l] = model.max_batch;
      }
    }
  }
  return arrivals;
}

void ChannelModel::validate(std::size_t links) const {
  require(links >= 1, "channel model needs at least one link");
  require(capacity >= 0, "capacity must be >= 0");
  if (kind == Kind::OnOff) {
    require(capacity >= 1, "on-off capacity must be >= 1");
    require(on_probability.size() == links, "one on-probability per link required");
    for (double p : on_probability)
      require(p >= 0.0 && p <= 1.0, "on-probability must lie in [0, 1]");
  }
}

std::vector<int> sample_channels(const ChannelModel& model,
                                 std::span<RandomStream> streams) {
  std::vector<int> capacity(streams.size(), model.capacity);
  if (model.kind == ChannelModel::Kind::OnOff) {
    if (streams.size() != model.on_probability.size())
      throw std::invalid_argument("one channel stream per link required");
    for (std::size_t l = 0; l < capacity.size(); ++l)
      capacity[l] = streams[l].bernoulli(model.on_probability[l]) ? model.capacity : 0;
  } else {
    // Constant channels burn one draw per link per slot anyway so that
    // switching channel kinds never shifts any other stream.
    for (std::size_t l = 0; l < capacity.size(); ++l) streams[l].next_u64();
  }
  return capacity;
}

void DropAllowanceModel::validate() const {
  require(!mean.empty(), "drop allowance model needs at least one link");
  require(max_allowance > 0.0, "max_allowance must be > 0");
  for (double m : mean) {
    require(m >= 0.0, "drop allowance mean must be >= 0");
    if (kind == Kind::Bernoulli) {
      require(m <= 1.0, "bernoulli drop allowance mean must be <= 1");
      require(max_allowance >= 1.0, "bernoulli drop allowance requires max_allowance >= 1");
    } else {
      require(m <= max_allowance, "constant drop allowance mean must be <= max_allowance");
    }
  }
}

std::vector<double> sample_drop_allowance(const DropAllowanceModel& model,
                                          std::span<RandomStream> streams) {
  if (streams.size() != model.mean.size())
    throw std::invalid_argument("one drop allowance stream per link required");
  std::vector<double> allowance(model.mean.size(), 0.0);
  for (std::size_t l = 0; l < allowance.size(); ++l) {
    if (model.kind == DropAllowanceModel::Kind::Bernoulli) {
      allowance[l] = streams[l].bernoulli(model.mean[l]) ? 1.0 : 0.0;
    } else {
      streams[l].next_u64();
      allowance[l] = model.mean[l];
    }
  }
  return allowance;
}

}  // namespace fcsma
