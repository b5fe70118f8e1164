#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "fcsma/rng.hpp"

using fcsma::RandomStream;
using fcsma::StreamPurpose;

TEST_CASE("identical stream coordinates reproduce the same sequence") {
  RandomStream a(42, StreamPurpose::Arrival, 3);
  RandomStream b(42, StreamPurpose::Arrival, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("seed, purpose and entity all separate streams") {
  RandomStream base(42, StreamPurpose::Arrival, 3);
  RandomStream seed(43, StreamPurpose::Arrival, 3);
  RandomStream purpose(42, StreamPurpose::Channel, 3);
  RandomStream entity(42, StreamPurpose::Arrival, 4);

  int seed_same = 0, purpose_same = 0, entity_same = 0;
  for (int i = 0; i < 64; ++i) {
    const auto x = base.next_u64();
    seed_same += x == seed.next_u64();
    purpose_same += x == purpose.next_u64();
    entity_same += x == entity.next_u64();
  }
  CHECK(seed_same == 0);
  CHECK(purpose_same == 0);
  CHECK(entity_same == 0);
}

TEST_CASE("drawing from one stream never shifts another") {
  RandomStream noisy(7, StreamPurpose::Channel, 0);
  RandomStream probe(7, StreamPurpose::Arrival, 0);

  std::vector<std::uint64_t> interleaved;
  for (int i = 0; i < 100; ++i) {
    for (int k = 0; k < 5; ++k) noisy.next_u64();
    interleaved.push_back(probe.next_u64());
  }

  RandomStream fresh(7, StreamPurpose::Arrival, 0);
  for (const auto x : interleaved) CHECK(x == fresh.next_u64());
}

TEST_CASE("jump_to replays and skips") {
  RandomStream a(99, StreamPurpose::Scheduler, 1);
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 20; ++i) first.push_back(a.next_u64());
  CHECK(a.draw_index() == 20);

  a.jump_to(0);
  for (int i = 0; i < 20; ++i) CHECK(a.next_u64() == first[i]);

  RandomStream b(99, StreamPurpose::Scheduler, 1);
  b.jump_to(10);
  CHECK(b.next_u64() == first[10]);
}

TEST_CASE("uniform01 stays in [0,1) and uniform_open in (0,1)") {
  RandomStream s(5, StreamPurpose::Oracle, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = s.uniform_open();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("uniform moments match within 4 sigma") {
  const int n = 1000000;
  RandomStream s(2024, StreamPurpose::Oracle, 7);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01();
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  const double second = sq / n;
  // sd(mean) = sqrt(1/12n); sd of the second moment uses Var(U^2) = 4/45
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(second - 1.0 / 3.0) < 4.0 * std::sqrt(4.0 / 45.0 / n));
}

TEST_CASE("two streams are uncorrelated") {
  const int n = 1000000;
  RandomStream a(11, StreamPurpose::Arrival, 0);
  RandomStream b(11, StreamPurpose::Arrival, 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += (a.uniform01() - 0.5) * (b.uniform01() - 0.5);
  const double corr = sum / n / (1.0 / 12.0);
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("bernoulli endpoints are exact") {
  RandomStream s(1, StreamPurpose::DropAllowance, 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(s.bernoulli(0.0));
    CHECK(s.bernoulli(1.0));
  }
}

TEST_CASE("bernoulli frequency matches its rate") {
  const int n = 1000000;
  const double p = 0.024;
  RandomStream s(31, StreamPurpose::Arrival, 2);
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += s.bernoulli(p);
  const double freq = static_cast<double>(hits) / n;
  CHECK(std::abs(freq - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("exponential and gumbel means match within 4 sigma") {
  const int n = 1000000;
  RandomStream s(77, StreamPurpose::Scheduler, 0);
  double exp_sum = 0.0, gum_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    exp_sum += s.standard_exponential();
    gum_sum += s.gumbel();
  }
  CHECK(std::abs(exp_sum / n - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));
  const double euler = 0.5772156649015329;
  const double gumbel_sd = M_PI / std::sqrt(6.0);
  CHECK(std::abs(gum_sum / n - euler) < 4.0 * gumbel_sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("exponential rate scales the mean") {
  const int n = 200000;
  RandomStream s(13, StreamPurpose::Scheduler, 5);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += s.exponential(4.0);
  CHECK(std::abs(sum / n - 0.25) < 4.0 * 0.25 / std::sqrt(static_cast<double>(n)));
}
