#include <benchmark/benchmark.h>

#include <vector>

#include "fcsma/contention.hpp"
#include "fcsma/engine.hpp"
#include "fcsma/rng.hpp"
#include "fcsma/schedulers.hpp"

namespace {

fcsma::ScenarioConfig reference_config(fcsma::SchedulerKind scheduler, int mini_slots) {
  fcsma::ScenarioConfig config;
  config.links = 10;
  config.arrival_rate.assign(10, 0.024);
  config.channel_on_probability.assign(10, 0.9);
  config.drop_fraction.assign(10, 0.2);
  config.scheduler = scheduler;
  config.mini_slots = mini_slots;
  config.horizon = 1;
  config.seed = 7;
  return config;
}

void BM_ProfileBuild(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> queue(n);
  std::vector<int> capacity(n, 1), arrivals(n, 1);
  for (std::size_t l = 0; l < n; ++l) queue[l] = static_cast<double>(l % 7);
  const fcsma::WeightFunction wf{fcsma::WeightKind::Exp};
  for (auto _ : state) {
    auto profile = fcsma::ContentionProfile::build(queue, capacity, arrivals, wf);
    benchmark::DoNotOptimize(profile);
  }
}
BENCHMARK(BM_ProfileBuild)->Arg(10)->Arg(100);

void BM_ContinuousRace(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> queue(n);
  std::vector<int> capacity(n, 1), arrivals(n, 1);
  for (std::size_t l = 0; l < n; ++l) queue[l] = static_cast<double>(l % 7);
  const fcsma::WeightFunction wf{fcsma::WeightKind::Exp};
  const auto profile = fcsma::ContentionProfile::build(queue, capacity, arrivals, wf);
  fcsma::RandomStream rng(1, fcsma::StreamPurpose::Scheduler);
  for (auto _ : state) {
    auto outcome = fcsma::fcsma_select_continuous(profile, capacity, arrivals,
                                                  fcsma::CompletionRule::Threshold, rng);
    benchmark::DoNotOptimize(outcome);
  }
}
BENCHMARK(BM_ContinuousRace)->Arg(10)->Arg(100);

void BM_MinislotRace(benchmark::State& state) {
  std::vector<double> queue = {2.0, 1.0, 0.5, 3.0};
  std::vector<int> capacity(4, 1), arrivals(4, 1);
  const fcsma::WeightFunction wf{fcsma::WeightKind::Exp};
  const auto profile = fcsma::ContentionProfile::build(queue, capacity, arrivals, wf);
  fcsma::RandomStream rng(1, fcsma::StreamPurpose::Scheduler);
  const int rounds = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto outcome = fcsma::fcsma_select_minislot(profile, capacity, arrivals, rounds, rng);
    benchmark::DoNotOptimize(outcome);
  }
}
BENCHMARK(BM_MinislotRace)->Arg(16)->Arg(1024);

void BM_EngineSlot(benchmark::State& state) {
  fcsma::SlotEngine engine(reference_config(fcsma::SchedulerKind::FcsmaContinuous, 1));
  for (auto _ : state) benchmark::DoNotOptimize(engine.step());
}
BENCHMARK(BM_EngineSlot);

void BM_QcsmaSlot(benchmark::State& state) {
  fcsma::SlotEngine engine(reference_config(
      fcsma::SchedulerKind::Qcsma, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(engine.step());
}
BENCHMARK(BM_QcsmaSlot)->Arg(1)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
