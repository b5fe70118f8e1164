#include "fcsma/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace fcsma {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool parse_double_value(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_u64_value(std::string_view s, std::uint64_t& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_int_value(std::string_view s, int& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_double_list(std::string_view s, std::vector<double>& out) {
  out.clear();
  while (true) {
    const auto comma = s.find(',');
    const std::string_view item = trim(s.substr(0, comma));
    double v = 0.0;
    if (!parse_double_value(item, v)) return false;
    out.push_back(v);
    if (comma == std::string_view::npos) return true;
    s.remove_prefix(comma + 1);
  }
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "n",           "arrival.kind",   "arrival.lambda",
      "arrival.a_max", "channel.kind", "channel.p",
      "channel.c_on", "channel.c",     "drop.rho",
      "drop.kind",   "drop.i_max",     "weight_function",
      "scheduler",   "completion_rule", "minislots",
      "qcsma.reset_each_slot", "horizon", "seed",
      "replications",
  };
  return keys;
}

std::string join_list(const std::vector<double>& values) {
  const bool uniform =
      std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); });
  if (uniform) return format_double(values.front());
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string_view scheduler_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::FcsmaContinuous: return "fcsma-continuous";
    case SchedulerKind::FcsmaMinislot: return "fcsma-minislot";
    case SchedulerKind::Qcsma: return "qcsma";
    case SchedulerKind::MaxWeight: return "max-weight";
  }
  return "fcsma-continuous";
}

std::optional<SchedulerKind> scheduler_from_name(std::string_view name) {
  if (name == "fcsma-continuous") return SchedulerKind::FcsmaContinuous;
  if (name == "fcsma-minislot") return SchedulerKind::FcsmaMinislot;
  if (name == "qcsma") return SchedulerKind::Qcsma;
  if (name == "max-weight") return SchedulerKind::MaxWeight;
  return std::nullopt;
}

ArrivalModel ScenarioConfig::arrival_model() const {
  return ArrivalModel{arrival_kind, arrival_rate, max_batch};
}

ChannelModel ScenarioConfig::channel_model() const {
  return ChannelModel{channel_kind, channel_on_probability, channel_capacity};
}

DropAllowanceModel ScenarioConfig::drop_model() const {
  std::vector<double> mean(arrival_rate.size());
  for (std::size_t l = 0; l < mean.size(); ++l)
    mean[l] = drop_fraction[l] * arrival_rate[l];
  return DropAllowanceModel{drop_kind, std::move(mean), max_allowance};
}

std::vector<FieldError> validate_scenario(const ScenarioConfig& c) {
  std::vector<FieldError> errors;
  auto fail = [&](std::string field, std::string message) {
    errors.push_back({std::move(field), std::move(message)});
  };

  if (c.links < 1) {
    fail("n", "must be >= 1");
    return errors;
  }
  const auto n = static_cast<std::size_t>(c.links);

  if (c.arrival_rate.size() != n) {
    fail("arrival.lambda", "expected 1 or n values");
  } else {
    const double batch_mean = (c.max_batch + 1) / 2.0;
    for (double r : c.arrival_rate) {
      if (!(r >= 0.0)) fail("arrival.lambda", "must be >= 0");
      else if (c.arrival_kind == ArrivalModel::Kind::Bernoulli && r > 1.0)
        fail("arrival.lambda", "bernoulli arrivals need lambda <= 1");
      else if (c.arrival_kind == ArrivalModel::Kind::BatchUniform && r > batch_mean)
        fail("arrival.lambda", "batch-uniform arrivals need lambda <= (a_max + 1) / 2");
    }
  }
  if (c.max_batch < 1) fail("arrival.a_max", "must be >= 1");

  if (c.channel_kind == ChannelModel::Kind::OnOff) {
    if (c.channel_on_probability.size() != n) {
      fail("channel.p", "expected 1 or n values");
    } else {
      for (double p : c.channel_on_probability)
        if (!(p >= 0.0 && p <= 1.0)) fail("channel.p", "must lie in [0, 1]");
    }
    if (c.channel_capacity < 1) fail("channel.c_on", "must be >= 1");
  } else {
    if (c.channel_capacity < 0) fail("channel.c", "must be >= 0");
  }

  if (c.drop_fraction.size() != n) {
    fail("drop.rho", "expected 1 or n values");
  } else {
    for (double rho : c.drop_fraction)
      if (!(rho > 0.0 && rho < 1.0)) fail("drop.rho", "must lie in (0, 1)");
  }
  if (!(c.max_allowance > 0.0)) fail("drop.i_max", "must be > 0");

  if (c.drop_fraction.size() == n && c.arrival_rate.size() == n) {
    for (std::size_t l = 0; l < n; ++l) {
      const double mean = c.drop_fraction[l] * c.arrival_rate[l];
      if (c.drop_kind == DropAllowanceModel::Kind::Bernoulli) {
        if (mean > 1.0) fail("drop.kind", "bernoulli allowance needs rho * lambda <= 1");
        if (c.max_allowance < 1.0) fail("drop.i_max", "bernoulli allowance needs i_max >= 1");
      } else if (mean > c.max_allowance) {
        fail("drop.i_max", "constant allowance needs rho * lambda <= i_max");
      }
    }
  }

  if (c.mini_slots < 1) fail("minislots", "must be >= 1");
  if (c.replications < 0) fail("replications", "must be >= 0");
  return errors;
}

ScenarioParseResult parse_scenario(std::string_view text) {
  ScenarioParseResult result;
  auto& errors = result.errors;
  auto fail = [&](std::string field, std::string message) {
    errors.push_back({std::move(field), std::move(message)});
  };

  std::map<std::string, std::string, std::less<>> raw;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text.remove_prefix(newline == std::string_view::npos ? text.size() : newline + 1);
    ++line_no;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail("line " + std::to_string(line_no), "expected key = value");
      continue;
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (!known_keys().contains(key)) {
      fail(key, "unknown field");
      continue;
    }
    if (raw.contains(key)) {
      fail(key, "duplicate field");
      continue;
    }
    raw.emplace(key, value);
  }

  auto get = [&](std::string_view key) -> std::optional<std::string_view> {
    auto it = raw.find(key);
    if (it == raw.end()) return std::nullopt;
    return std::string_view{it->second};
  };

  ScenarioConfig c;

  if (auto v = get("n")) {
    if (!parse_int_value(*v, c.links)) fail("n", "expected an integer");
  } else {
    fail("n", "required field missing");
  }

  if (auto v = get("arrival.kind")) {
    if (*v == "bernoulli") c.arrival_kind = ArrivalModel::Kind::Bernoulli;
    else if (*v == "batch-uniform") c.arrival_kind = ArrivalModel::Kind::BatchUniform;
    else fail("arrival.kind", "expected bernoulli or batch-uniform");
  }
  if (auto v = get("arrival.lambda")) {
    if (!parse_double_list(*v, c.arrival_rate))
      fail("arrival.lambda", "expected a number or comma list");
  } else {
    fail("arrival.lambda", "required field missing");
  }
  if (auto v = get("arrival.a_max")) {
    if (!parse_int_value(*v, c.max_batch)) fail("arrival.a_max", "expected an integer");
  }

  if (auto v = get("channel.kind")) {
    if (*v == "on-off") c.channel_kind = ChannelModel::Kind::OnOff;
    else if (*v == "constant") c.channel_kind = ChannelModel::Kind::Constant;
    else fail("channel.kind", "expected on-off or constant");
  }
  if (c.channel_kind == ChannelModel::Kind::OnOff) {
    if (auto v = get("channel.p")) {
      if (!parse_double_list(*v, c.channel_on_probability))
        fail("channel.p", "expected a number or comma list");
    } else {
      fail("channel.p", "required field missing");
    }
    if (auto v = get("channel.c_on")) {
      if (!parse_int_value(*v, c.channel_capacity)) fail("channel.c_on", "expected an integer");
    }
    if (get("channel.c")) fail("channel.c", "not applicable to on-off channels");
  } else {
    if (auto v = get("channel.c")) {
      if (!parse_int_value(*v, c.channel_capacity)) fail("channel.c", "expected an integer");
    } else {
      fail("channel.c", "required field missing");
    }
    if (get("channel.p")) fail("channel.p", "not applicable to constant channels");
    if (get("channel.c_on")) fail("channel.c_on", "not applicable to constant channels");
  }

  if (auto v = get("drop.rho")) {
    if (!parse_double_list(*v, c.drop_fraction))
      fail("drop.rho", "expected a number or comma list");
  } else {
    fail("drop.rho", "required field missing");
  }
  if (auto v = get("drop.kind")) {
    if (*v == "bernoulli") c.drop_kind = DropAllowanceModel::Kind::Bernoulli;
    else if (*v == "constant") c.drop_kind = DropAllowanceModel::Kind::Constant;
    else fail("drop.kind", "expected bernoulli or constant");
  }
  if (auto v = get("drop.i_max")) {
    if (!parse_double_value(*v, c.max_allowance)) fail("drop.i_max", "expected a number");
  }

  if (auto v = get("weight_function")) {
    if (auto wf = WeightFunction::from_name(*v)) c.weight_kind = wf->kind;
    else fail("weight_function", "expected exp, linear-plus-one, exp-sqrt or log-plus-e");
  }
  if (auto v = get("scheduler")) {
    if (auto s = scheduler_from_name(*v)) c.scheduler = *s;
    else fail("scheduler", "expected fcsma-continuous, fcsma-minislot, qcsma or max-weight");
  } else {
    fail("scheduler", "required field missing");
  }
  if (auto v = get("completion_rule")) {
    if (*v == "threshold") c.completion_rule = CompletionRule::Threshold;
    else if (*v == "proportional") c.completion_rule = CompletionRule::Proportional;
    else fail("completion_rule", "expected threshold or proportional");
  }
  if (auto v = get("minislots")) {
    if (!parse_int_value(*v, c.mini_slots)) fail("minislots", "expected an integer");
  }
  if (auto v = get("qcsma.reset_each_slot")) {
    if (*v == "true") c.qcsma_reset_each_slot = true;
    else if (*v == "false") c.qcsma_reset_each_slot = false;
    else fail("qcsma.reset_each_slot", "expected true or false");
  }
  if (auto v = get("horizon")) {
    if (!parse_u64_value(*v, c.horizon)) fail("horizon", "expected a non-negative integer");
  } else {
    fail("horizon", "required field missing");
  }
  if (auto v = get("seed")) {
    if (!parse_u64_value(*v, c.seed)) fail("seed", "expected a non-negative integer");
  } else {
    fail("seed", "required field missing");
  }
  if (auto v = get("replications")) {
    if (!parse_int_value(*v, c.replications)) fail("replications", "expected an integer");
  }

  if (!errors.empty()) return result;

  // Broadcast scalar per-link fields.
  if (c.links >= 1) {
    const auto n = static_cast<std::size_t>(c.links);
    auto broadcast = [&](std::vector<double>& values) {
      if (values.size() == 1 && n > 1) values.assign(n, values.front());
    };
    broadcast(c.arrival_rate);
    broadcast(c.channel_on_probability);
    broadcast(c.drop_fraction);
  }

  auto semantic = validate_scenario(c);
  errors.insert(errors.end(), semantic.begin(), semantic.end());
  if (errors.empty()) result.config = std::move(c);
  return result;
}

std::string canonical_text(const ScenarioConfig& c) {
  std::string out;
  auto emit = [&](std::string_view key, std::string value) {
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  };

  emit("n", std::to_string(c.links));
  emit("arrival.kind", c.arrival_kind == ArrivalModel::Kind::Bernoulli
                           ? "bernoulli" : "batch-uniform");
  emit("arrival.lambda", join_list(c.arrival_rate));
  if (c.arrival_kind == ArrivalModel::Kind::BatchUniform)
    emit("arrival.a_max", std::to_string(c.max_batch));
  if (c.channel_kind == ChannelModel::Kind::OnOff) {
    emit("channel.kind", "on-off");
    emit("channel.p", join_list(c.channel_on_probability));
    emit("channel.c_on", std::to_string(c.channel_capacity));
  } else {
    emit("channel.kind", "constant");
    emit("channel.c", std::to_string(c.channel_capacity));
  }
  emit("drop.rho", join_list(c.drop_fraction));
  emit("drop.kind", c.drop_kind == DropAllowanceModel::Kind::Bernoulli
                        ? "bernoulli" : "constant");
  emit("drop.i_max", format_double(c.max_allowance));
  emit("weight_function", std::string{c.weight_function().name()});
  emit("scheduler", std::string{scheduler_name(c.scheduler)});
  emit("completion_rule", c.completion_rule == CompletionRule::Threshold
                              ? "threshold" : "proportional");
  emit("minislots", std::to_string(c.mini_slots));
  emit("qcsma.reset_each_slot", c.qcsma_reset_each_slot ? "true" : "false");
  emit("horizon", std::to_string(c.horizon));
  emit("seed", std::to_string(c.seed));
  emit("replications", std::to_string(c.replications));
  return out;
}

const std::vector<std::string>& sweep_axes() {
  static const std::vector<std::string> axes = {
      "arrival.lambda", "channel.p", "drop.rho", "minislots", "horizon"};
  return axes;
}

std::optional<std::string> apply_axis(ScenarioConfig& config,
                                      std::string_view axis, double value) {
  ScenarioConfig next = config;
  const auto n = static_cast<std::size_t>(std::max(config.links, 1));

  if (axis == "arrival.lambda") {
    next.arrival_rate.assign(n, value);
  } else if (axis == "channel.p") {
    if (next.channel_kind != ChannelModel::Kind::OnOff)
      return "axis channel.p requires channel.kind = on-off";
    next.channel_on_probability.assign(n, value);
  } else if (axis == "drop.rho") {
    next.drop_fraction.assign(n, value);
  } else if (axis == "minislots" || axis == "horizon") {
    if (!(std::floor(value) == value && value >= 0.0 && value <= 9.0e15))
      return std::string{axis} + " needs a non-negative integer value";
    if (axis == "minislots") {
      if (value < 1.0 || value > 2147483647.0) return "minislots out of range";
      next.mini_slots = static_cast<int>(value);
    } else {
      next.horizon = static_cast<std::uint64_t>(value);
    }
  } else {
    return "unknown axis: " + std::string{axis};
  }

  const auto errors = validate_scenario(next);
  if (!errors.empty()) {
    std::string message = "axis " + std::string{axis} + ": ";
    message += errors.front().field + " " + errors.front().message;
    return message;
  }
  config = std::move(next);
  return std::nullopt;
}

}  // namespace fcsma
