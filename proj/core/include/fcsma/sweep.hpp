#ifndef FCSMA_SWEEP_HPP
#define FCSMA_SWEEP_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcsma/config.hpp"

namespace fcsma {

// A sweep file is a scenario file plus three extra keys:
//   sweep.axis     one of the names in sweep_axes() (required)
//   sweep.values   comma list of axis values, may be empty
//   sweep.output   default CSV path (optional; the CLI can override)
struct SweepSpec {
  ScenarioConfig base;
  std::string axis;
  std::vector<double> values;
  std::string output_path;
};

struct SweepParseResult {
  std::optional<SweepSpec> spec;
  std::vector<FieldError> errors;
  bool ok() const { return spec.has_value(); }
};

SweepParseResult parse_sweep(std::string_view text);

// Seed for one sweep cell. Mixes the replication index and the canonical
// text of the axis value into the base seed, so every cell gets an
// independent stream family and a cell's seed never depends on which other
// values happen to be in the sweep.
std::uint64_t replication_seed(std::uint64_t base_seed, int replication,
                               double axis_value);

std::string sweep_csv_header(int links);

// Runs every (axis value, replication) cell and renders one CSV. Rows are
// ordered by (axis value, replication); cells that fail to configure or
// run become rows with status "error: ..." and the sweep continues. The
// rendered bytes do not depend on the worker count.
std::string run_sweep(const SweepSpec& spec, int workers = 1);

}  // namespace fcsma

#endif
