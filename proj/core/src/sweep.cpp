#include "fcsma/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <numeric>
#include <thread>

#include "fcsma/engine.hpp"
#include "fcsma/rng.hpp"

namespace fcsma {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string sanitize_cell(std::string_view message) {
  std::string out;
  for (char ch : message) out += (ch == ',' || ch == '\n') ? ';' : ch;
  return out;
}

}  // namespace

SweepParseResult parse_sweep(std::string_view text) {
  SweepParseResult result;
  std::string scenario_text;
  std::optional<std::string> axis, values_text, output;

  std::string_view rest = text;
  while (!rest.empty()) {
    const auto newline = rest.find('\n');
    std::string_view line = rest.substr(0, newline);
    rest.remove_prefix(newline == std::string_view::npos ? rest.size() : newline + 1);

    const std::string_view trimmed = trim(line);
    const auto eq = trimmed.find('=');
    std::string_view key =
        eq == std::string_view::npos ? std::string_view{} : trim(trimmed.substr(0, eq));
    if (key.starts_with("sweep.")) {
      const std::string value{trim(trimmed.substr(eq + 1))};
      if (key == "sweep.axis") axis = value;
      else if (key == "sweep.values") values_text = value;
      else if (key == "sweep.output") output = value;
      else result.errors.push_back({std::string{key}, "unknown field"});
      continue;
    }
    scenario_text += line;
    scenario_text += "\n";
  }

  SweepSpec spec;
  if (!axis) {
    result.errors.push_back({"sweep.axis", "required field missing"});
  } else {
    const auto& axes = sweep_axes();
    if (std::find(axes.begin(), axes.end(), *axis) == axes.end())
      result.errors.push_back({"sweep.axis", "unknown axis " + *axis});
    spec.axis = *axis;
  }
  if (!values_text) {
    result.errors.push_back({"sweep.values", "required field missing"});
  } else if (!values_text->empty()) {
    std::string_view items{*values_text};
    while (true) {
      const auto comma = items.find(',');
      const std::string_view item = trim(items.substr(0, comma));
      double v = 0.0;
      const char* item_end = item.data() + item.size();
      auto [ptr, ec] = std::from_chars(item.data(), item_end, v);
      if (item.empty() || ec != std::errc{} || ptr != item_end) {
        result.errors.push_back({"sweep.values", "expected a comma list of numbers"});
        break;
      }
      spec.values.push_back(v);
      if (comma == std::string_view::npos) break;
      items.remove_prefix(comma + 1);
    }
  }
  if (output) spec.output_path = *output;

  auto scenario = parse_scenario(scenario_text);
  result.errors.insert(result.errors.end(), scenario.errors.begin(), scenario.errors.end());
  if (!result.errors.empty()) return result;
  spec.base = std::move(*scenario.config);
  result.spec = std::move(spec);
  return result;
}

std::uint64_t replication_seed(std::uint64_t base_seed, int replication,
                               double axis_value) {
  std::uint64_t h =
      mix64(0x53574545u + static_cast<std::uint64_t>(replication) * 0x9E3779B97F4A7C15ull);
  for (unsigned char ch : format_double(axis_value))
    h = mix64(h ^ static_cast<std::uint64_t>(ch));
  return base_seed ^ h;
}

std::string sweep_csv_header(int links) {
  std::string header = "axis_value,replication,mean_total_x,final_total_x,drift_slope";
  for (int l = 0; l < links; ++l) header += ",drop_frac_" + std::to_string(l);
  header += ",stable,status\n";
  return header;
}

namespace {

std::string run_cell(const SweepSpec& spec, double value, int replication) {
  std::string row = format_double(value) + "," + std::to_string(replication) + ",";
  const int links = spec.base.links;

  auto error_row = [&](const std::string& message) {
    std::string out = row + "nan,nan,nan";
    for (int l = 0; l < links; ++l) out += ",nan";
    out += ",false,error: " + sanitize_cell(message) + "\n";
    return out;
  };

  ScenarioConfig config = spec.base;
  if (auto error = apply_axis(config, spec.axis, value)) return error_row(*error);
  config.seed = replication_seed(spec.base.seed, replication, value);

  try {
    const auto result = run_horizon(config);
    const auto& s = result.summary;
    row += format_double(s.mean_total_queue) + ",";
    row += format_double(s.final_total_queue) + ",";
    row += format_double(s.drift_slope);
    for (int l = 0; l < links; ++l)
      row += "," + format_double(s.drop_fraction[static_cast<std::size_t>(l)]);
    row += s.stable ? ",true" : ",false";
    row += ",ok\n";
    return row;
  } catch (const std::exception& e) {
    return error_row(e.what());
  }
}

}  // namespace

std::string run_sweep(const SweepSpec& spec, int workers) {
  // Sort values (stable, so duplicates keep their replication blocks) to
  // make the CSV diff-friendly regardless of the file's value order.
  std::vector<std::size_t> order(spec.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return spec.values[a] < spec.values[b];
  });

  const int replications = std::max(spec.base.replications, 0);
  const std::size_t cells = order.size() * static_cast<std::size_t>(replications);
  std::vector<std::string> rows(cells);

  auto cell_of = [&](std::size_t index) {
    const std::size_t value_index = order[index / replications];
    const int replication = static_cast<int>(index % replications);
    return std::pair{spec.values[value_index], replication};
  };

  const int thread_count =
      std::clamp<int>(workers, 1, static_cast<int>(std::max<std::size_t>(cells, 1)));
  if (thread_count <= 1 || cells <= 1) {
    for (std::size_t i = 0; i < cells; ++i) {
      const auto [value, replication] = cell_of(i);
      rows[i] = run_cell(spec, value, replication);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells) return;
        const auto [value, replication] = cell_of(i);
        rows[i] = run_cell(spec, value, replication);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::string csv = sweep_csv_header(spec.base.links);
  for (const auto& row : rows) csv += row;
  return csv;
}

}  // namespace fcsma
