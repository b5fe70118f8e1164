#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fcsma/schedulers.hpp"

using fcsma::CompletionRule;
using fcsma::ContentionProfile;
using fcsma::QcsmaState;
using fcsma::RandomStream;
using fcsma::StreamPurpose;
using fcsma::WeightFunction;
using fcsma::WeightKind;

namespace {

const WeightFunction kExp{WeightKind::Exp};
const std::vector<int> kOnes1 = {1};
const std::vector<int> kOnes2 = {1, 1};

double binomial_tolerance(double p, std::size_t samples) {
  return 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

// Exhaustive distribution of a qcsma_slot over every decision/coin branch.
// Mirrors the sampling semantics exactly: a blocked decision consumes no
// coin, an active link serves (once) right after the update that finds it
// active with data, and the channel releases after a completed service.
struct QcsmaEnumerator {
  std::vector<double> weights;
  std::vector<int> capacity;
  std::vector<int> arrivals;
  int mini_slots = 1;

  std::map<std::vector<int>, double> served_distribution(
      const QcsmaState& initial) const {
    std::map<std::vector<int>, double> dist;
    std::vector<int> served(weights.size(), 0);
    std::vector<bool> done(weights.size(), false);
    recurse(0, initial, served, done, 1.0, dist);
    return dist;
  }

 private:
  static double sigmoid(double w) { return 1.0 / (1.0 + std::exp(-w)); }

  void recurse(int m, QcsmaState state, std::vector<int>& served,
               std::vector<bool>& done, double prob,
               std::map<std::vector<int>, double>& dist) const {
    if (m == mini_slots) {
      dist[served] += prob;
      return;
    }
    const std::size_t n = weights.size();
    for (std::size_t decision = 0; decision < n; ++decision) {
      const double p_decision = prob / static_cast<double>(n);
      if (state.active && *state.active != decision) {
        after_update(m, state, served, done, p_decision, dist);
        continue;
      }
      const double activate = sigmoid(weights[decision]);
      if (activate > 0.0)
        after_update(m, QcsmaState{decision}, served, done,
                     p_decision * activate, dist);
      if (activate < 1.0)
        after_update(m, QcsmaState{}, served, done,
                     p_decision * (1.0 - activate), dist);
    }
  }

  void after_update(int m, QcsmaState state, std::vector<int>& served,
                    std::vector<bool>& done, double prob,
                    std::map<std::vector<int>, double>& dist) const {
    if (state.active) {
      const std::size_t link = *state.active;
      const int amount = std::min(capacity[link], arrivals[link]);
      if (!done[link] && amount > 0) {
        served[link] = amount;
        done[link] = true;
        state.active.reset();
        recurse(m + 1, state, served, done, prob, dist);
        served[link] = 0;
        done[link] = false;
        return;
      }
    }
    recurse(m + 1, state, served, done, prob, dist);
  }
};

}  // namespace

TEST_CASE("single-link continuous race: winner is forced, service follows the clock") {
  const std::vector<double> queue = {1.0};
  const auto profile = ContentionProfile::build(queue, kOnes1, kOnes1, kExp);
  const double z = std::exp(1.0);

  RandomStream rng(301, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 100000;
  std::size_t served = 0;
  double absorption_sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto out = fcsma_select_continuous(profile, kOnes1, kOnes1,
                                             CompletionRule::Threshold, rng);
    REQUIRE(out.winner.has_value());
    CHECK(*out.winner == 0);
    CHECK(out.absorption_time >= 0.0);
    served += out.served[0];
    absorption_sum += out.absorption_time;
  }
  const double p_serve = 1.0 - std::exp(-z);
  CHECK(std::abs(static_cast<double>(served) / samples - p_serve) <
        binomial_tolerance(p_serve, samples));
  CHECK(std::abs(absorption_sum / samples - 1.0 / z) <
        4.0 / z / std::sqrt(static_cast<double>(samples)));
}

TEST_CASE("proportional completion serves with the leftover slot fraction") {
  const std::vector<double> queue = {1.0};
  const auto profile = ContentionProfile::build(queue, kOnes1, kOnes1, kExp);
  const double z = std::exp(1.0);

  RandomStream rng(302, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 200000;
  std::size_t served = 0;
  for (std::size_t i = 0; i < samples; ++i)
    served += fcsma_select_continuous(profile, kOnes1, kOnes1,
                                      CompletionRule::Proportional, rng)
                  .served[0];
  // E[(1 - T)^+] with T ~ Exp(z)
  const double p_serve = 1.0 - (1.0 - std::exp(-z)) / z;
  CHECK(std::abs(static_cast<double>(served) / samples - p_serve) <
        binomial_tolerance(p_serve, samples));
}

TEST_CASE("two-link race matches the closed-form winner and service law") {
  const std::vector<double> queue = {2.0, 1.0};
  const std::vector<int> arrivals = {1, 5};
  const auto profile = ContentionProfile::build(queue, kOnes2, arrivals, kExp);
  const double z = std::exp(2.0) + std::exp(1.0);
  const double win0 = std::exp(2.0) / z;

  RandomStream rng(303, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 200000;
  std::size_t wins0 = 0, serves0 = 0, serves1 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto out = fcsma_select_continuous(profile, kOnes2, arrivals,
                                             CompletionRule::Threshold, rng);
    wins0 += *out.winner == 0;
    serves0 += out.served[0] > 0;
    serves1 += out.served[1] > 0;
    CHECK((out.served[0] == 0 || out.served[1] == 0));
  }
  CHECK(std::abs(static_cast<double>(wins0) / samples - win0) <
        binomial_tolerance(win0, samples));
  CHECK(std::abs(static_cast<double>(serves0) / samples -
                 race_service_probability(profile, 0)) <
        binomial_tolerance(race_service_probability(profile, 0), samples));
  CHECK(std::abs(static_cast<double>(serves1) / samples -
                 race_service_probability(profile, 1)) <
        binomial_tolerance(race_service_probability(profile, 1), samples));
}

TEST_CASE("a backlogged winner with nothing deliverable burns the slot") {
  // link 0 has no fresh arrivals, link 1 has no backlog: equal weights,
  // and a link-0 win is a dummy transmission that serves nobody
  const std::vector<double> queue = {3.0, 0.0};
  const std::vector<int> capacity = {1, 1};
  const std::vector<int> arrivals = {0, 1};
  const auto profile = ContentionProfile::build(queue, capacity, arrivals, kExp);
  CHECK(profile.weights[0] == 0.0);
  CHECK(profile.weights[1] == 0.0);

  RandomStream rng(304, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 100000;
  std::size_t wins0 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto out = fcsma_select_continuous(profile, capacity, arrivals,
                                             CompletionRule::Threshold, rng);
    if (*out.winner == 0) {
      ++wins0;
      CHECK(out.dummy);
      CHECK(out.served[0] == 0);
      CHECK(out.served[1] == 0);
    } else if (out.served[1] > 0) {
      CHECK(out.absorption_time < 1.0);
      CHECK_FALSE(out.dummy);
    }
  }
  CHECK(std::abs(static_cast<double>(wins0) / samples - 0.5) <
        binomial_tolerance(0.5, samples));
}

TEST_CASE("service amount is capped by channel and arrivals") {
  const std::vector<double> queue = {4.0};
  const std::vector<int> capacity = {3};
  const std::vector<int> arrivals = {7};
  const auto profile = ContentionProfile::build(queue, capacity, arrivals, kExp);
  RandomStream rng(305, StreamPurpose::Scheduler, 0);
  bool saw_service = false;
  for (int i = 0; i < 200; ++i) {
    const auto out = fcsma_select_continuous(profile, capacity, arrivals,
                                             CompletionRule::Threshold, rng);
    if (out.served[0] > 0) {
      CHECK(out.served[0] == 3);
      saw_service = true;
    }
  }
  CHECK(saw_service);
}

TEST_CASE("race draw counts are fixed per completion rule") {
  const std::vector<double> queue = {2.0, 1.0};
  const auto profile = ContentionProfile::build(queue, kOnes2, kOnes2, kExp);
  RandomStream rng(306, StreamPurpose::Scheduler, 0);
  fcsma_select_continuous(profile, kOnes2, kOnes2, CompletionRule::Threshold, rng);
  CHECK(rng.draw_index() == 3);
  fcsma_select_continuous(profile, kOnes2, kOnes2, CompletionRule::Proportional, rng);
  CHECK(rng.draw_index() == 7);
  fcsma_select_minislot(profile, kOnes2, kOnes2, 16, rng);
  CHECK(rng.draw_index() == 10);
}

TEST_CASE("one mini-slot never leaves room to transmit") {
  const std::vector<double> queue = {5.0, 3.0};
  const auto profile = ContentionProfile::build(queue, kOnes2, kOnes2, kExp);
  RandomStream rng(307, StreamPurpose::Scheduler, 0);
  for (int i = 0; i < 500; ++i) {
    const auto out = fcsma_select_minislot(profile, kOnes2, kOnes2, 1, rng);
    CHECK(out.served[0] == 0);
    CHECK(out.served[1] == 0);
  }
}

TEST_CASE("single link with two mini-slots serves iff it fires in the first") {
  const std::vector<double> queue = {1.0};
  const auto profile = ContentionProfile::build(queue, kOnes1, kOnes1, kExp);
  RandomStream rng(308, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 200000;
  std::size_t served = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto out = fcsma_select_minislot(profile, kOnes1, kOnes1, 2, rng);
    served += out.served[0];
    if (out.winner) CHECK((out.absorption_time == 0.5 || out.absorption_time == 1.0));
  }
  // firing probability per round is 1 - e^{-r/2} with r = e
  const double p = -std::expm1(-std::exp(1.0) / 2.0);
  CHECK(std::abs(static_cast<double>(served) / samples - p) <
        binomial_tolerance(p, samples));
}

TEST_CASE("geometric inversion matches a round-by-round scan") {
  const std::vector<double> queue = {1.2, 0.4, 2.0};
  const std::vector<int> ones = {1, 1, 1};
  const auto profile = ContentionProfile::build(queue, ones, ones, kExp);
  const int m = 6;
  const std::size_t samples = 200000;

  // category = winner link, or 3 when nobody fires within the slot
  std::vector<std::size_t> fast_counts(4, 0), scan_counts(4, 0);
  std::vector<std::size_t> fast_serves(3, 0), scan_serves(3, 0);

  RandomStream rng(309, StreamPurpose::Scheduler, 0);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto out = fcsma_select_minislot(profile, ones, ones, m, rng);
    ++fast_counts[out.winner ? *out.winner : 3];
    for (std::size_t l = 0; l < 3; ++l) fast_serves[l] += out.served[l] > 0;
  }

  RandomStream scan_rng(1309, StreamPurpose::Oracle, 0);
  std::vector<double> fire_p(3);
  for (std::size_t l = 0; l < 3; ++l)
    fire_p[l] = -std::expm1(-std::exp(profile.weights[l]) / m);
  for (std::size_t i = 0; i < samples; ++i) {
    int winner = 3;
    int round = 0;
    for (round = 0; round < m && winner == 3; ++round) {
      std::vector<int> firing;
      for (std::size_t l = 0; l < 3; ++l)
        if (scan_rng.bernoulli(fire_p[l])) firing.push_back(static_cast<int>(l));
      if (!firing.empty()) {
        std::size_t pick =
            static_cast<std::size_t>(scan_rng.uniform01() * firing.size());
        if (pick >= firing.size()) pick = firing.size() - 1;
        winner = firing[pick];
        break;
      }
    }
    ++scan_counts[winner == 3 ? 3 : winner];
    if (winner != 3 && round <= m - 2) ++scan_serves[winner];
  }

  for (std::size_t k = 0; k < 4; ++k) {
    const double pf = static_cast<double>(fast_counts[k]) / samples;
    const double ps = static_cast<double>(scan_counts[k]) / samples;
    const double pooled =
        4.0 * std::sqrt(2.0 * std::max(pf, ps) * (1.0 - std::min(pf, ps)) / samples);
    CHECK(std::abs(pf - ps) < pooled);
  }
  for (std::size_t l = 0; l < 3; ++l) {
    const double pf = static_cast<double>(fast_serves[l]) / samples;
    const double ps = static_cast<double>(scan_serves[l]) / samples;
    const double pooled =
        4.0 * std::sqrt(2.0 * std::max(pf, ps) * (1.0 - std::min(pf, ps)) / samples);
    CHECK(std::abs(pf - ps) < pooled);
  }
}

TEST_CASE("simultaneous first-round firings split the win evenly") {
  const std::vector<double> queue = {50.0, 50.0};
  const auto profile = ContentionProfile::build(queue, kOnes2, kOnes2, kExp);
  RandomStream rng(310, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 100000;
  std::size_t wins0 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto out = fcsma_select_minislot(profile, kOnes2, kOnes2, 8, rng);
    REQUIRE(out.winner.has_value());
    CHECK(out.absorption_time == doctest::Approx(0.125));
    CHECK(out.served[*out.winner] == 1);
    CHECK(out.served[1 - *out.winner] == 0);
    wins0 += *out.winner == 0;
  }
  CHECK(std::abs(static_cast<double>(wins0) / samples - 0.5) <
        binomial_tolerance(0.5, samples));
}

TEST_CASE("mini-slot race validates its round count") {
  const std::vector<double> queue = {1.0};
  const auto profile = ContentionProfile::build(queue, kOnes1, kOnes1, kExp);
  RandomStream rng(311, StreamPurpose::Scheduler, 0);
  CHECK_THROWS_AS(fcsma_select_minislot(profile, kOnes1, kOnes1, 0, rng),
                  std::invalid_argument);
}

TEST_CASE("glauber update activates through the sigmoid") {
  const std::vector<double> weights = {5.0};
  RandomStream rng(312, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 100000;
  std::size_t actives = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto next = qcsma_step(weights, QcsmaState{}, rng);
    actives += next.active.has_value();
  }
  const double p = 1.0 / (1.0 + std::exp(-5.0));
  CHECK(std::abs(static_cast<double>(actives) / samples - p) <
        binomial_tolerance(p, samples));
}

TEST_CASE("glauber update leaves the state alone when another link holds the channel") {
  const std::vector<double> weights = {0.0, 0.0};
  RandomStream rng(313, StreamPurpose::Scheduler, 0);
  QcsmaState holding{1};
  std::size_t releases = 0;
  const std::size_t samples = 100000;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto next = qcsma_step(weights, holding, rng);
    if (next.active) {
      CHECK(*next.active == 1);  // link 0 can never grab an occupied channel
    } else {
      ++releases;
    }
  }
  // release requires decision = holder (1/2) and a failed coin (1/2)
  CHECK(std::abs(static_cast<double>(releases) / samples - 0.25) <
        binomial_tolerance(0.25, samples));
}

TEST_CASE("qcsma slot distribution matches exhaustive enumeration") {
  QcsmaEnumerator enumerator;
  enumerator.weights = {0.0, 0.0};
  enumerator.capacity = {1, 1};
  enumerator.arrivals = {1, 1};
  enumerator.mini_slots = 2;
  const auto dist = enumerator.served_distribution(QcsmaState{});

  const std::vector<int> both = {1, 1}, only0 = {1, 0}, only1 = {0, 1}, none = {0, 0};
  CHECK(dist.at(both) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(dist.at(only0) == doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(dist.at(only1) == doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(dist.at(none) == doctest::Approx(0.25).epsilon(1e-12));

  RandomStream rng(314, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 200000;
  std::map<std::vector<int>, std::size_t> counts;
  for (std::size_t i = 0; i < samples; ++i) {
    QcsmaState state;  // fresh slot, idle start
    const auto out = qcsma_slot(enumerator.weights, enumerator.capacity,
                                enumerator.arrivals, 2, state, rng);
    ++counts[out.served];
  }
  for (const auto& [served, probability] : dist) {
    const double freq = static_cast<double>(counts[served]) / samples;
    CHECK(std::abs(freq - probability) <
          binomial_tolerance(probability, samples) + 1e-12);
  }
}

TEST_CASE("single qcsma link with one mini-slot serves half the time") {
  QcsmaEnumerator enumerator;
  enumerator.weights = {0.0};
  enumerator.capacity = {1};
  enumerator.arrivals = {1};
  enumerator.mini_slots = 1;
  const auto dist = enumerator.served_distribution(QcsmaState{});
  CHECK(dist.at({1}) == doctest::Approx(0.5).epsilon(1e-12));

  RandomStream rng(315, StreamPurpose::Scheduler, 0);
  const std::size_t samples = 100000;
  std::size_t served = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    QcsmaState state;
    served += qcsma_slot(enumerator.weights, enumerator.capacity,
                         enumerator.arrivals, 1, state, rng)
                  .served[0];
  }
  CHECK(std::abs(static_cast<double>(served) / samples - 0.5) <
        binomial_tolerance(0.5, samples));
}

TEST_CASE("an active link without data blocks the channel for the whole slot") {
  const std::vector<double> weights = {0.0, 0.0};
  const std::vector<int> capacity = {1, 0};
  const std::vector<int> arrivals = {1, 1};
  RandomStream rng(316, StreamPurpose::Scheduler, 0);
  std::size_t link0_served = 0;
  for (int i = 0; i < 2000; ++i) {
    QcsmaState state{1};  // link 1 holds the channel but min(c, a) = 0
    const auto out = qcsma_slot(weights, capacity, arrivals, 1, state, rng);
    CHECK(out.served[1] == 0);
    link0_served += out.served[0];
  }
  // with one update per slot, link 0 can only activate after a release;
  // a single mini-slot never offers that window
  CHECK(link0_served == 0);
}

TEST_CASE("qcsma per-slot service is capped even when a link re-activates") {
  const std::vector<double> weights = {40.0};
  const std::vector<int> capacity = {1};
  const std::vector<int> arrivals = {1};
  RandomStream rng(317, StreamPurpose::Scheduler, 0);
  for (int i = 0; i < 500; ++i) {
    QcsmaState state;
    const auto out = qcsma_slot(weights, capacity, arrivals, 16, state, rng);
    CHECK(out.served[0] == 1);  // sigmoid(40) = 1, serves in round 0, never again
  }
}

TEST_CASE("max-weight picks the heaviest deliverable link, ties to the lowest index") {
  const std::vector<int> ones3 = {1, 1, 1};
  const auto heavy =
      ContentionProfile::build(std::vector<double>{2.0, 5.0, 1.0}, ones3, ones3, kExp);
  auto out = maxweight_select(heavy, ones3, ones3);
  CHECK(*out.winner == 1);
  CHECK(out.served[1] == 1);
  CHECK(out.absorption_time == 0.0);

  const std::vector<int> blocked = {1, 0, 1};
  const auto faded =
      ContentionProfile::build(std::vector<double>{2.0, 5.0, 1.0}, blocked, ones3, kExp);
  out = maxweight_select(faded, blocked, ones3);
  CHECK(*out.winner == 0);

  const auto idle =
      ContentionProfile::build(std::vector<double>{0.0, 0.0, 0.0}, ones3,
                               std::vector<int>{0, 0, 0}, kExp);
  out = maxweight_select(idle, ones3, std::vector<int>{0, 0, 0});
  CHECK(*out.winner == 0);
  CHECK(out.dummy);
  CHECK(out.served == std::vector<int>{0, 0, 0});
}
