#ifndef FCSMA_CONFIG_HPP
#define FCSMA_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcsma/processes.hpp"
#include "fcsma/schedulers.hpp"
#include "fcsma/weight.hpp"

namespace fcsma {

enum class SchedulerKind { FcsmaContinuous, FcsmaMinislot, Qcsma, MaxWeight };

std::string_view scheduler_name(SchedulerKind kind);
std::optional<SchedulerKind> scheduler_from_name(std::string_view name);

// A fully specified experiment. Per-link fields are stored expanded to
// `links` entries; the parser broadcasts scalars.
//
// Text format: `key = value` lines, `#` comments, blank lines ignored.
// Keys:
//   n                       link count (required)
//   arrival.kind            bernoulli | batch-uniform      [bernoulli]
//   arrival.lambda          mean arrivals/slot, scalar or comma list (required)
//   arrival.a_max           batch cap                      [1]
//   channel.kind            on-off | constant              [on-off]
//   channel.p               ON probability, scalar or list (required for on-off)
//   channel.c_on            capacity when ON               [1]
//   channel.c               constant capacity              (required for constant)
//   drop.rho                allowed drop fraction, scalar or list (required)
//   drop.kind               bernoulli | constant           [bernoulli]
//   drop.i_max              allowance cap per slot         [1]
//   weight_function         exp | linear-plus-one | exp-sqrt | log-plus-e  [exp]
//   scheduler               fcsma-continuous | fcsma-minislot | qcsma | max-weight (required)
//   completion_rule         threshold | proportional       [threshold]
//   minislots               rounds per slot                [1]
//   qcsma.reset_each_slot   true | false                   [false]
//   horizon                 slots to simulate (required)
//   seed                    base RNG seed (required)
//   replications            independent repeats            [1]
struct ScenarioConfig {
  int links = 1;

  ArrivalModel::Kind arrival_kind = ArrivalModel::Kind::Bernoulli;
  std::vector<double> arrival_rate;
  int max_batch = 1;

  ChannelModel::Kind channel_kind = ChannelModel::Kind::OnOff;
  std::vector<double> channel_on_probability;
  int channel_capacity = 1;

  std::vector<double> drop_fraction;
  DropAllowanceModel::Kind drop_kind = DropAllowanceModel::Kind::Bernoulli;
  double max_allowance = 1.0;

  WeightKind weight_kind = WeightKind::Exp;
  SchedulerKind scheduler = SchedulerKind::FcsmaContinuous;
  CompletionRule completion_rule = CompletionRule::Threshold;
  int mini_slots = 1;
  bool qcsma_reset_each_slot = false;

  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  int replications = 1;

  ArrivalModel arrival_model() const;
  ChannelModel channel_model() const;
  DropAllowanceModel drop_model() const;  // mean = rho * lambda per link
  WeightFunction weight_function() const { return WeightFunction{weight_kind}; }
};

struct FieldError {
  std::string field;
  std::string message;
};

struct ScenarioParseResult {
  std::optional<ScenarioConfig> config;
  std::vector<FieldError> errors;
  bool ok() const { return config.has_value(); }
};

ScenarioParseResult parse_scenario(std::string_view text);

// Full cross-field validation; empty result means the config is usable.
std::vector<FieldError> validate_scenario(const ScenarioConfig& config);

// Canonical serialization: fixed key order, normalized number formatting,
// uniform per-link lists collapsed to scalars, inapplicable keys omitted.
// parse_scenario(canonical_text(c)) reproduces c, and canonical form is a
// fixed point of parse-then-serialize.
std::string canonical_text(const ScenarioConfig& config);

// Names accepted as sweep axes.
const std::vector<std::string>& sweep_axes();

// Sets one axis field (per-link fields broadcast) and re-validates.
// Returns an error message and leaves the config untouched on failure.
std::optional<std::string> apply_axis(ScenarioConfig& config,
                                      std::string_view axis, double value);

// Shortest round-trip decimal formatting, used for canonical configs and
// CSV output so identical values always print identically.
std::string format_double(double value);

}  // namespace fcsma

#endif
