#include "fcsma/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fcsma/contention.hpp"
#include "fcsma/region.hpp"
#include "fcsma/schedulers.hpp"
#include "fcsma/sweep.hpp"

namespace fcsma {

namespace {

constexpr double kSigmaGate = 4.0;
constexpr double kDropFractionTolerance = 0.02;
constexpr double kGrowthFactor = 0.25;
constexpr double kTvLimit = 0.01;

std::string fmt(double v) { return format_double(v); }

double binomial_se(double p, std::size_t samples) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
}

// Deviation measured in standard errors; zero-variance checks demand
// exact agreement.
double deviation_se(double frequency, double probability, double se) {
  const double dev = std::abs(frequency - probability);
  if (se == 0.0) return dev <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  return dev / se;
}

}  // namespace

Eq8Report verify_eq8(std::span<const double> queue, std::span<const int> capacity,
                     std::span<const int> arrivals, const WeightFunction& wf,
                     std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  const auto profile = ContentionProfile::build(queue, capacity, arrivals, wf);
  const std::size_t n = profile.size();

  RandomStream rng(seed, StreamPurpose::Scheduler);
  std::vector<std::size_t> wins(n, 0), serves(n, 0);
  double t_sum = 0.0, t_sq_sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto outcome = fcsma_select_continuous(profile, capacity, arrivals,
                                                 CompletionRule::Threshold, rng);
    ++wins[*outcome.winner];
    if (outcome.served[*outcome.winner] > 0) ++serves[*outcome.winner];
    t_sum += outcome.absorption_time;
    t_sq_sum += outcome.absorption_time * outcome.absorption_time;
  }

  Eq8Report report;
  report.samples = samples;
  report.links.resize(n);
  const auto sample_count = static_cast<double>(samples);
  for (std::size_t l = 0; l < n; ++l) {
    auto& link = report.links[l];
    link.winner_probability = std::exp(profile.weights[l] - profile.log_total_rate);
    link.winner_frequency = static_cast<double>(wins[l]) / sample_count;
    link.winner_se = binomial_se(link.winner_probability, samples);
    const bool can_serve = std::min(capacity[l], arrivals[l]) > 0;
    link.service_probability = can_serve ? race_service_probability(profile, l) : 0.0;
    link.rounded_service_probability = can_serve ? selection_probability(profile, l) : 0.0;
    link.service_frequency = static_cast<double>(serves[l]) / sample_count;
    report.max_deviation_se =
        std::max({report.max_deviation_se,
                  deviation_se(link.winner_frequency, link.winner_probability,
                               link.winner_se),
                  deviation_se(link.service_frequency, link.service_probability,
                               binomial_se(link.service_probability, samples))});
    report.max_rounded_gap =
        std::max(report.max_rounded_gap,
                 std::abs(link.service_probability - link.rounded_service_probability));
  }

  report.mean_absorption = t_sum / sample_count;
  report.expected_absorption = std::exp(-profile.log_total_rate);
  const double t_var =
      std::max(t_sq_sum / sample_count - report.mean_absorption * report.mean_absorption, 0.0);
  report.absorption_se = std::sqrt(t_var / sample_count);
  report.max_deviation_se =
      std::max(report.max_deviation_se,
               deviation_se(report.mean_absorption, report.expected_absorption,
                            report.absorption_se));
  report.pass = report.max_deviation_se <= kSigmaGate;
  return report;
}

std::string Eq8Report::to_text() const {
  std::string out = "selection check: samples = " + std::to_string(samples) + "\n";
  for (std::size_t l = 0; l < links.size(); ++l) {
    const auto& link = links[l];
    out += "  link " + std::to_string(l) + ": winner " + fmt(link.winner_frequency) +
           " vs " + fmt(link.winner_probability) + " (se " + fmt(link.winner_se) +
           "), served " + fmt(link.service_frequency) + " vs exact " +
           fmt(link.service_probability) + ", rounded " +
           fmt(link.rounded_service_probability) + "\n";
  }
  out += "  absorption " + fmt(mean_absorption) + " vs " + fmt(expected_absorption) +
         " (se " + fmt(absorption_se) + ")\n";
  out += "  max deviation " + fmt(max_deviation_se) + " se (gate " + fmt(kSigmaGate) +
         "), rounded-form gap " + fmt(max_rounded_gap) + "\n";
  out += pass ? "  PASS\n" : "  FAIL\n";
  return out;
}

Lemma2Report verify_lemma2(int links, int states, double max_weight_low,
                           double max_weight_high, std::span<const double> epsilons,
                           std::size_t samples_per_state, std::uint64_t seed) {
  if (links < 1) throw std::invalid_argument("links must be >= 1");
  if (states < 1) throw std::invalid_argument("states must be >= 1");
  if (!(max_weight_low >= 0.0) || !(max_weight_high >= max_weight_low))
    throw std::invalid_argument("need 0 <= max_weight_low <= max_weight_high");
  for (double epsilon : epsilons)
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw std::invalid_argument("epsilon must lie in (0, 1)");

  Lemma2Report report;
  report.pass = true;
  const auto n = static_cast<std::size_t>(links);
  const std::vector<int> ones(n, 1);
  const WeightFunction expf{WeightKind::Exp};

  for (int s = 0; s < states; ++s) {
    RandomStream state_rng(seed, StreamPurpose::Oracle, static_cast<std::uint64_t>(s));
    Lemma2StateReport state;
    state.samples = samples_per_state;
    state.weights.resize(n);
    state.weights[0] =
        max_weight_low + (max_weight_high - max_weight_low) * state_rng.uniform01();
    for (std::size_t l = 1; l < n; ++l)
      state.weights[l] = state.weights[0] * state_rng.uniform01();
    state.max_weight = state.weights[0];

    // Race over exactly these log-domain weights: exp weight function with
    // unit deliverable packets makes link_weight(w) = w.
    const auto profile = ContentionProfile::build(state.weights, ones, ones, expf);

    RandomStream race_rng(seed, StreamPurpose::Scheduler, static_cast<std::uint64_t>(s));
    std::vector<std::size_t> wins(n, 0);
    for (std::size_t i = 0; i < samples_per_state; ++i) {
      const auto outcome = fcsma_select_continuous(profile, ones, ones,
                                                   CompletionRule::Threshold, race_rng);
      ++wins[*outcome.winner];
    }

    for (double epsilon : epsilons) {
      Lemma2Check check;
      check.epsilon = epsilon;
      check.bound = low_weight_selection_bound(n, epsilon, state.max_weight);
      std::size_t tail_wins = 0;
      for (std::size_t l = 0; l < n; ++l)
        if (state.weights[l] < (1.0 - epsilon) * state.max_weight) tail_wins += wins[l];
      check.frequency =
          static_cast<double>(tail_wins) / static_cast<double>(samples_per_state);
      check.se = binomial_se(check.frequency, samples_per_state);
      check.pass = check.frequency <= check.bound + kSigmaGate * check.se;
      report.pass = report.pass && check.pass;
      state.checks.push_back(check);
    }
    report.total_samples += samples_per_state;
    report.states.push_back(std::move(state));
  }
  return report;
}

std::string Lemma2Report::to_text() const {
  std::string out = "tail bound check: states = " + std::to_string(states.size()) +
                    ", total samples = " + std::to_string(total_samples) + "\n";
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& state = states[s];
    out += "  state " + std::to_string(s) + ": max weight " + fmt(state.max_weight) +
           ", samples " + std::to_string(state.samples) + "\n";
    for (const auto& check : state.checks) {
      out += "    eps " + fmt(check.epsilon) + ": freq " + fmt(check.frequency) +
             " (se " + fmt(check.se) + ") vs bound " + fmt(check.bound) + " margin " +
             fmt(check.bound - check.frequency) + (check.pass ? " ok" : " VIOLATED") +
             "\n";
    }
  }
  out += pass ? "  PASS\n" : "  FAIL\n";
  return out;
}

StabilityReport verify_stability(const ScenarioConfig& base, double inside_rate,
                                 double outside_rate) {
  if (base.arrival_kind != ArrivalModel::Kind::Bernoulli ||
      base.channel_kind != ChannelModel::Kind::OnOff || base.channel_capacity != 1)
    throw std::invalid_argument(
        "stability verification needs bernoulli arrivals and unit-capacity on-off channels");
  const double rho = base.drop_fraction.at(0);
  const double p = base.channel_on_probability.at(0);
  for (double r : base.drop_fraction)
    if (r != rho) throw std::invalid_argument("stability verification needs uniform rho");
  for (double q : base.channel_on_probability)
    if (q != p) throw std::invalid_argument("stability verification needs uniform channel p");

  if (membership_symmetric(base.links, rho, p, inside_rate) != RegionVerdict::Inside)
    throw std::invalid_argument("inside_rate is not inside the admission region");
  if (membership_symmetric(base.links, rho, p, outside_rate) != RegionVerdict::Outside)
    throw std::invalid_argument("outside_rate is not outside the admission region");

  StabilityReport report;
  report.inside_rate = inside_rate;
  report.outside_rate = outside_rate;
  report.boundary_rate = symmetric_boundary(base.links, rho, p);
  report.drop_fraction_limit = rho + kDropFractionTolerance;

  const double n = static_cast<double>(base.links);
  // Largest sustainable per-link service at the outside rate; what exceeds
  // it must pile up in the virtual queues.
  const double service_ceiling =
      -std::expm1(n * std::log1p(-p * outside_rate)) / n;
  const double excess = outside_rate * (1.0 - rho) - service_ceiling;
  report.growth_threshold =
      kGrowthFactor * n * excess * static_cast<double>(base.horizon);

  report.pass = true;
  auto run_side = [&](double rate, std::vector<StabilityRun>& runs) {
    for (int rep = 0; rep < base.replications; ++rep) {
      ScenarioConfig config = base;
      if (auto error = apply_axis(config, "arrival.lambda", rate))
        throw std::invalid_argument(*error);
      config.seed = replication_seed(base.seed, rep, rate);
      StabilityRun run;
      run.rate = rate;
      run.seed = config.seed;
      run.summary = run_horizon(config).summary;
      runs.push_back(std::move(run));
    }
  };
  run_side(inside_rate, report.inside_runs);
  run_side(outside_rate, report.outside_runs);

  for (const auto& run : report.inside_runs) {
    bool ok = run.summary.stable;
    for (double fraction : run.summary.drop_fraction)
      ok = ok && fraction <= report.drop_fraction_limit;
    report.pass = report.pass && ok;
  }
  for (const auto& run : report.outside_runs)
    report.pass = report.pass && run.summary.final_total_queue >= report.growth_threshold;
  return report;
}

std::string StabilityReport::to_text() const {
  std::string out = "stability check: boundary rate " + fmt(boundary_rate) + "\n";
  auto describe = [&](const char* side, const std::vector<StabilityRun>& runs) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& s = runs[i].summary;
      double worst_drop = 0.0;
      for (double fraction : s.drop_fraction) worst_drop = std::max(worst_drop, fraction);
      out += "  " + std::string(side) + " rep " + std::to_string(i) + " (rate " +
             fmt(runs[i].rate) + ", seed " + std::to_string(runs[i].seed) + "): slope " +
             fmt(s.drift_slope) + ", mid mean " + fmt(s.mid_mean) + ", final quarter " +
             fmt(s.final_quarter_mean) + ", final total " + fmt(s.final_total_queue) +
             ", worst drop " + fmt(worst_drop) + ", " +
             (s.stable ? "stable" : "not stable") + "\n";
    }
  };
  describe("inside", inside_runs);
  describe("outside", outside_runs);
  out += "  inside drop limit " + fmt(drop_fraction_limit) + ", outside growth threshold " +
         fmt(growth_threshold) + "\n";
  out += pass ? "  PASS\n" : "  FAIL\n";
  return out;
}

RaceConvergenceReport verify_race_convergence(std::span<const double> queue,
                                              std::span<const int> capacity,
                                              std::span<const int> arrivals,
                                              const WeightFunction& wf,
                                              std::span<const int> m_values,
                                              std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  if (m_values.empty()) throw std::invalid_argument("need at least one round count");
  for (std::size_t i = 1; i < m_values.size(); ++i)
    if (m_values[i] <= m_values[i - 1])
      throw std::invalid_argument("round counts must be strictly increasing");

  const auto profile = ContentionProfile::build(queue, capacity, arrivals, wf);
  const std::size_t n = profile.size();
  const auto sample_count = static_cast<double>(samples);

  // Category n stands for "nobody fired", which the continuous race cannot
  // produce but the mini-slot race can.
  std::vector<double> continuous(n + 1, 0.0);
  {
    RandomStream rng(seed, StreamPurpose::Scheduler, 0);
    for (std::size_t i = 0; i < samples; ++i) {
      const auto outcome = fcsma_select_continuous(profile, capacity, arrivals,
                                                   CompletionRule::Threshold, rng);
      continuous[*outcome.winner] += 1.0;
    }
    for (auto& c : continuous) c /= sample_count;
  }

  RaceConvergenceReport report;
  report.samples = samples;
  report.tv_limit = kTvLimit;
  report.monotonicity_tolerance = kSigmaGate / std::sqrt(sample_count);

  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    RandomStream rng(seed, StreamPurpose::Scheduler, mi + 1);
    std::vector<double> empirical(n + 1, 0.0);
    for (std::size_t i = 0; i < samples; ++i) {
      const auto outcome =
          fcsma_select_minislot(profile, capacity, arrivals, m_values[mi], rng);
      if (outcome.winner) empirical[*outcome.winner] += 1.0;
      else empirical[n] += 1.0;
    }
    double tv = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
      tv += std::abs(empirical[k] / sample_count - continuous[k]);
    report.points.push_back({m_values[mi], 0.5 * tv});
  }

  report.final_tv = report.points.back().tv_distance;
  bool monotone = true;
  for (std::size_t i = 1; i < report.points.size(); ++i)
    monotone = monotone && report.points[i].tv_distance <=
                               report.points[i - 1].tv_distance +
                                   report.monotonicity_tolerance;
  report.pass = monotone && report.final_tv < report.tv_limit;
  return report;
}

std::string RaceConvergenceReport::to_text() const {
  std::string out = "race convergence check: samples = " + std::to_string(samples) + "\n";
  for (const auto& point : points)
    out += "  rounds " + std::to_string(point.mini_slots) + ": tv " +
           fmt(point.tv_distance) + "\n";
  out += "  final tv " + fmt(final_tv) + " vs limit " + fmt(tv_limit) + " (margin " +
         fmt(tv_limit - final_tv) + "), monotonicity tolerance " +
         fmt(monotonicity_tolerance) + "\n";
  out += pass ? "  PASS\n" : "  FAIL\n";
  return out;
}

}  // namespace fcsma
