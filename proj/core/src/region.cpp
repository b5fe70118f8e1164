#include "fcsma/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "fcsma/rng.hpp"
#include "fcsma/simplex.hpp"

namespace fcsma {

namespace {

constexpr double kBoundaryTolerance = 1e-9;
constexpr std::size_t kMaxLinks = 6;
constexpr std::size_t kMaxJointSupport = 10000;

void check_symmetric_args(int links, double drop_fraction, double on_probability) {
  if (links < 1) throw std::invalid_argument("links must be >= 1");
  if (!(drop_fraction >= 0.0 && drop_fraction < 1.0))
    throw std::invalid_argument("drop_fraction must lie in [0, 1)");
  if (!(on_probability > 0.0 && on_probability <= 1.0))
    throw std::invalid_argument("on_probability must lie in (0, 1]");
}

}  // namespace

double symmetric_excess_demand(int links, double drop_fraction,
                               double on_probability, double rate) {
  check_symmetric_args(links, drop_fraction, on_probability);
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("rate must lie in [0, 1]");
  const double n = static_cast<double>(links);
  const double off = on_probability * rate >= 1.0
                         ? -std::numeric_limits<double>::infinity()
                         : n * std::log1p(-on_probability * rate);
  return n * (1.0 - drop_fraction) * rate + std::expm1(off);
}

double symmetric_boundary(int links, double drop_fraction, double on_probability) {
  check_symmetric_args(links, drop_fraction, on_probability);
  // The demand term is convex in the rate and zero at zero, so the region
  // is the interval up to its unique positive root (when one exists).
  if (1.0 - drop_fraction >= on_probability) return 0.0;
  if (symmetric_excess_demand(links, drop_fraction, on_probability, 1.0) < 0.0)
    return 1.0;
  double lo = 1e-12, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (symmetric_excess_demand(links, drop_fraction, on_probability, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

RegionVerdict membership_symmetric(int links, double drop_fraction,
                                   double on_probability, double rate) {
  const double excess = symmetric_excess_demand(links, drop_fraction, on_probability, rate);
  if (std::abs(excess) <= kBoundaryTolerance) return RegionVerdict::Boundary;
  return excess < 0.0 ? RegionVerdict::Inside : RegionVerdict::Outside;
}

void RegionInstance::validate() const {
  const std::size_t n = links();
  if (n == 0) throw std::invalid_argument("instance needs at least one link");
  if (n > kMaxLinks) throw std::invalid_argument("instance supports at most 6 links");
  if (drop_fraction.size() != n)
    throw std::invalid_argument("drop_fraction must have one entry per link");
  for (double rho : drop_fraction)
    if (!(rho >= 0.0 && rho < 1.0))
      throw std::invalid_argument("drop_fraction entries must lie in [0, 1)");
  for (double rate : arrival_rate)
    if (!(rate >= 0.0)) throw std::invalid_argument("arrival rates must be >= 0");

  auto check_side = [n](const std::vector<std::vector<int>>& support,
                        const std::vector<double>& probability, const char* what) {
    if (support.empty()) throw std::invalid_argument(std::string(what) + " support is empty");
    if (support.size() != probability.size())
      throw std::invalid_argument(std::string(what) + " support and probabilities differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i].size() != n)
        throw std::invalid_argument(std::string(what) + " vectors must have one entry per link");
      for (int v : support[i])
        if (v < 0) throw std::invalid_argument(std::string(what) + " entries must be >= 0");
      if (!(probability[i] >= 0.0))
        throw std::invalid_argument(std::string(what) + " probabilities must be >= 0");
      total += probability[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument(std::string(what) + " probabilities must sum to 1");
  };
  check_side(arrival_support, arrival_probability, "arrival");
  check_side(channel_support, channel_probability, "channel");

  if (arrival_support.size() * channel_support.size() > kMaxJointSupport)
    throw std::invalid_argument("joint support exceeds 10000 points");

  for (std::size_t l = 0; l < n; ++l) {
    double mean = 0.0;
    for (std::size_t i = 0; i < arrival_support.size(); ++i)
      mean += arrival_probability[i] * arrival_support[i][l];
    if (std::abs(mean - arrival_rate[l]) > 1e-9)
      throw std::invalid_argument("arrival rates must match the support marginals");
  }
}

RegionInstance make_symmetric_instance(int links, double rate, double drop_fraction,
                                       double on_probability) {
  check_symmetric_args(links, drop_fraction, on_probability);
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("rate must lie in [0, 1]");
  if (links > static_cast<int>(kMaxLinks))
    throw std::invalid_argument("instance supports at most 6 links");

  const auto n = static_cast<std::size_t>(links);
  auto product_bernoulli = [n](double p) {
    std::vector<std::vector<int>> support;
    std::vector<double> probability;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      double prob = 1.0;
      std::vector<int> point(n, 0);
      for (std::size_t l = 0; l < n; ++l) {
        const bool on = mask & (std::size_t{1} << l);
        point[l] = on ? 1 : 0;
        prob *= on ? p : 1.0 - p;
      }
      if (prob > 0.0) {
        support.push_back(std::move(point));
        probability.push_back(prob);
      }
    }
    return std::pair{std::move(support), std::move(probability)};
  };

  RegionInstance instance;
  auto [as, ap] = product_bernoulli(rate);
  instance.arrival_support = std::move(as);
  instance.arrival_probability = std::move(ap);
  auto [cs, cp] = product_bernoulli(on_probability);
  instance.channel_support = std::move(cs);
  instance.channel_probability = std::move(cp);
  instance.arrival_rate.assign(n, rate);
  instance.drop_fraction.assign(n, drop_fraction);
  instance.validate();
  return instance;
}

namespace {

struct JointSupport {
  std::vector<double> probability;
  std::vector<std::vector<int>> deliverable;  // min(capacity, arrivals) per link
  std::vector<std::pair<std::size_t, std::size_t>> origin;
};

JointSupport build_joint(const RegionInstance& instance) {
  JointSupport joint;
  const std::size_t n = instance.links();
  for (std::size_t ia = 0; ia < instance.arrival_support.size(); ++ia) {
    for (std::size_t ic = 0; ic < instance.channel_support.size(); ++ic) {
      const double prob =
          instance.arrival_probability[ia] * instance.channel_probability[ic];
      if (prob <= 0.0) continue;
      std::vector<int> m(n);
      for (std::size_t l = 0; l < n; ++l)
        m[l] = std::min(instance.channel_support[ic][l], instance.arrival_support[ia][l]);
      joint.probability.push_back(prob);
      joint.deliverable.push_back(std::move(m));
      joint.origin.emplace_back(ia, ic);
    }
  }
  return joint;
}

}  // namespace

LpRegionResult lp_feasibility(const RegionInstance& instance, double required_slack) {
  instance.validate();
  if (!(required_slack >= 0.0))
    throw std::invalid_argument("required_slack must be >= 0");

  const std::size_t n = instance.links();
  const auto joint = build_joint(instance);
  const std::size_t points = joint.probability.size();
  const std::size_t schedules = n + 1;  // idle plus one single-link schedule each

  // Variables: alpha[j][s], then slack+ / slack-, then one surplus per link.
  const std::size_t slack_pos = points * schedules;
  const std::size_t surplus0 = slack_pos + 2;
  const std::size_t columns = surplus0 + n;

  std::vector<std::vector<double>> constraints;
  std::vector<double> rhs;
  constraints.reserve(points + n);

  for (std::size_t j = 0; j < points; ++j) {
    std::vector<double> row(columns, 0.0);
    for (std::size_t s = 0; s < schedules; ++s) row[j * schedules + s] = 1.0;
    constraints.push_back(std::move(row));
    rhs.push_back(1.0);
  }
  for (std::size_t l = 0; l < n; ++l) {
    std::vector<double> row(columns, 0.0);
    for (std::size_t j = 0; j < points; ++j)
      row[j * schedules + l + 1] = joint.probability[j] * joint.deliverable[j][l];
    row[slack_pos] = -1.0;
    row[slack_pos + 1] = 1.0;
    row[surplus0 + l] = -1.0;
    constraints.push_back(std::move(row));
    rhs.push_back(instance.arrival_rate[l] * (1.0 - instance.drop_fraction[l]));
  }

  std::vector<double> objective(columns, 0.0);
  objective[slack_pos] = 1.0;
  objective[slack_pos + 1] = -1.0;

  const auto lp = solve_equality_lp(std::move(constraints), std::move(rhs), objective);
  if (lp.status != SimplexResult::Status::Optimal)
    throw std::runtime_error("region feasibility program did not solve");

  LpRegionResult result;
  result.max_slack = lp.objective;
  result.required_slack = required_slack;
  result.feasible = lp.objective >= required_slack - kBoundaryTolerance;
  result.boundary = std::abs(lp.objective) <= kBoundaryTolerance;
  result.joint_points = joint.origin;
  if (result.feasible) {
    result.witness.resize(points);
    for (std::size_t j = 0; j < points; ++j) {
      result.witness[j].assign(schedules, 0.0);
      for (std::size_t s = 0; s < schedules; ++s)
        result.witness[j][s] = lp.solution[j * schedules + s];
    }
  }
  return result;
}

namespace {

void simplex_grid(std::size_t n, std::size_t granularity, std::vector<double>& scratch,
                  const std::function<void(const std::vector<double>&)>& visit);

}  // namespace

DualityCheck duality_oracle(const RegionInstance& instance,
                            std::size_t random_directions, std::uint64_t seed) {
  instance.validate();
  const std::size_t n = instance.links();
  const auto joint = build_joint(instance);

  DualityCheck check;
  double best_margin = 0.0;

  auto evaluate = [&](const std::vector<double>& w) {
    double demand = 0.0;
    for (std::size_t l = 0; l < n; ++l)
      demand += w[l] * instance.arrival_rate[l] * (1.0 - instance.drop_fraction[l]);
    double supply = 0.0;
    for (std::size_t j = 0; j < joint.probability.size(); ++j) {
      double best = 0.0;
      for (std::size_t l = 0; l < n; ++l)
        best = std::max(best, w[l] * joint.deliverable[j][l]);
      supply += joint.probability[j] * best;
    }
    ++check.directions_checked;
    const double margin = demand - supply;
    if (margin > 1e-9 * std::max(1.0, std::abs(demand)) && margin > best_margin) {
      best_margin = margin;
      check.violation_found = true;
      check.direction = w;
      check.demand = demand;
      check.supply = supply;
    }
  };

  // Axis directions and the uniform direction first: they certify the
  // common single-link and fully symmetric violations exactly.
  std::vector<double> w(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    std::fill(w.begin(), w.end(), 0.0);
    w[l] = 1.0;
    evaluate(w);
  }
  std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
  evaluate(w);

  static constexpr std::size_t kGranularity[] = {0, 1, 2000, 100, 30, 17, 12};
  simplex_grid(n, kGranularity[n], w, evaluate);

  RandomStream rng(seed, StreamPurpose::Oracle);
  for (std::size_t i = 0; i < random_directions; ++i) {
    double total = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      w[l] = rng.standard_exponential();
      total += w[l];
    }
    for (std::size_t l = 0; l < n; ++l) w[l] /= total;
    evaluate(w);
  }
  return check;
}

namespace {

void simplex_grid_recurse(std::size_t level, std::size_t remaining, std::size_t granularity,
                          std::vector<double>& point,
                          const std::function<void(const std::vector<double>&)>& visit) {
  if (level + 1 == point.size()) {
    point[level] = static_cast<double>(remaining) / static_cast<double>(granularity);
    visit(point);
    return;
  }
  for (std::size_t k = 0; k <= remaining; ++k) {
    point[level] = static_cast<double>(k) / static_cast<double>(granularity);
    simplex_grid_recurse(level + 1, remaining - k, granularity, point, visit);
  }
}

void simplex_grid(std::size_t n, std::size_t granularity, std::vector<double>& scratch,
                  const std::function<void(const std::vector<double>&)>& visit) {
  if (granularity == 0) return;
  scratch.assign(n, 0.0);
  simplex_grid_recurse(0, granularity, granularity, scratch, visit);
}

}  // namespace

}  // namespace fcsma
