#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fcsma/config.hpp"
#include "fcsma/engine.hpp"
#include "fcsma/region.hpp"
#include "fcsma/sweep.hpp"
#include "fcsma/verify.hpp"

namespace {

int fail(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return out.good();
}

void print_field_errors(const std::vector<fcsma::FieldError>& errors) {
  for (const auto& error : errors)
    std::cerr << "config error: " << error.field << ": " << error.message << "\n";
}

std::vector<int> to_int(const std::vector<double>& values) {
  std::vector<int> out;
  for (double v : values) out.push_back(static_cast<int>(v));
  return out;
}

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

int run_region_boundary(int links, double rho, double p) {
  const double boundary = fcsma::symmetric_boundary(links, rho, p);
  std::cout << "lambda_star = " << fcsma::format_double(boundary) << "\n";
  return 0;
}

int run_region_membership(int links, double rho, double p, double lambda) {
  const auto verdict = fcsma::membership_symmetric(links, rho, p, lambda);
  const char* name = verdict == fcsma::RegionVerdict::Inside    ? "inside"
                     : verdict == fcsma::RegionVerdict::Outside ? "outside"
                                                                : "boundary";
  std::cout << "excess_demand = "
            << fcsma::format_double(
                   fcsma::symmetric_excess_demand(links, rho, p, lambda))
            << "\n";
  std::cout << "verdict = " << name << "\n";
  return 0;
}

int run_region_lp(int links, double rho, double p, double lambda, double slack,
                  std::size_t directions, const std::string& out_path) {
  const auto instance = fcsma::make_symmetric_instance(links, lambda, rho, p);
  const auto lp = fcsma::lp_feasibility(instance, slack);
  const auto dual = fcsma::duality_oracle(instance, directions);

  std::cout << "max_slack = " << fcsma::format_double(lp.max_slack) << "\n";
  std::cout << "feasible = " << (lp.feasible ? "true" : "false") << "\n";
  std::cout << "boundary = " << (lp.boundary ? "true" : "false") << "\n";
  std::cout << "oracle_directions = " << dual.directions_checked << "\n";
  std::cout << "oracle_violation = " << (dual.violation_found ? "true" : "false") << "\n";
  if (dual.violation_found) {
    std::string direction;
    for (double w : dual.direction) {
      if (!direction.empty()) direction += " ";
      direction += fcsma::format_double(w);
    }
    std::cout << "oracle_direction = " << direction << "\n";
    std::cout << "oracle_demand = " << fcsma::format_double(dual.demand) << "\n";
    std::cout << "oracle_supply = " << fcsma::format_double(dual.supply) << "\n";
  }
  if (lp.feasible && dual.violation_found)
    std::cout << "note = oracle disagrees with the program; trusting the program\n";

  if (!out_path.empty() && !lp.witness.empty()) {
    std::string csv = "arrival_index,channel_index,schedule,alpha\n";
    for (std::size_t j = 0; j < lp.witness.size(); ++j) {
      for (std::size_t s = 0; s < lp.witness[j].size(); ++s) {
        csv += std::to_string(lp.joint_points[j].first) + "," +
               std::to_string(lp.joint_points[j].second) + "," +
               (s == 0 ? std::string{"idle"} : std::to_string(s - 1)) + "," +
               fcsma::format_double(lp.witness[j][s]) + "\n";
      }
    }
    if (!write_file(out_path, csv)) return fail("cannot write " + out_path);
  }
  return 0;
}

int run_simulate(const CommonFlags& flags) {
  const auto text = read_file(flags.config_path);
  if (!text) return fail("cannot read " + flags.config_path);
  auto parsed = fcsma::parse_scenario(*text);
  if (!parsed.ok()) {
    print_field_errors(parsed.errors);
    return 2;
  }
  auto config = *parsed.config;
  if (flags.seed) config.seed = *flags.seed;

  const auto result = fcsma::run_horizon(config);
  const auto& s = result.summary;
  std::cout << "slots = " << s.slots << "\n";
  std::cout << "defined = " << (s.defined ? "true" : "false") << "\n";
  std::cout << "mean_total_x = " << fcsma::format_double(s.mean_total_queue) << "\n";
  std::cout << "mean_total_g = " << fcsma::format_double(s.mean_total_log_weight) << "\n";
  std::cout << "final_total_x = " << fcsma::format_double(s.final_total_queue) << "\n";
  std::cout << "drift_slope = " << fcsma::format_double(s.drift_slope) << "\n";
  std::cout << "mid_mean = " << fcsma::format_double(s.mid_mean) << "\n";
  std::cout << "final_quarter_mean = " << fcsma::format_double(s.final_quarter_mean) << "\n";
  std::cout << "stable = " << (s.stable ? "true" : "false") << "\n";
  for (std::size_t l = 0; l < s.drop_fraction.size(); ++l)
    std::cout << "drop_frac_" << l << " = " << fcsma::format_double(s.drop_fraction[l])
              << "\n";

  if (!flags.out_path.empty()) {
    std::string csv = "slot,total_x,total_g\n";
    for (std::size_t t = 0; t < result.trace.size(); ++t) {
      csv += std::to_string(t) + "," + fcsma::format_double(result.trace[t].total_queue) +
             "," + fcsma::format_double(result.trace[t].total_log_weight) + "\n";
    }
    if (!write_file(flags.out_path, csv)) return fail("cannot write " + flags.out_path);
  }
  return 0;
}

int run_sweep_command(const CommonFlags& flags) {
  const auto text = read_file(flags.config_path);
  if (!text) return fail("cannot read " + flags.config_path);
  auto parsed = fcsma::parse_sweep(*text);
  if (!parsed.ok()) {
    print_field_errors(parsed.errors);
    return 2;
  }
  auto spec = *parsed.spec;
  if (flags.seed) spec.base.seed = *flags.seed;

  const std::string csv = fcsma::run_sweep(spec, flags.workers);
  const std::string out_path =
      !flags.out_path.empty() ? flags.out_path : spec.output_path;
  if (out_path.empty()) {
    std::cout << csv;
    return 0;
  }
  if (!write_file(out_path, csv)) return fail("cannot write " + out_path);
  std::cout << "rows = "
            << std::count(csv.begin(), csv.end(), '\n') - 1 << "\n";
  std::cout << "written = " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-constrained carrier-sense scheduling toolkit"};
  app.require_subcommand(1);

  // region
  auto* region = app.add_subcommand("region", "Admission region calculations");
  region->require_subcommand(1);
  int links = 10;
  double rho = 0.2, on_p = 0.9, lambda = 0.02, slack = 0.0;
  std::size_t directions = 10000;
  std::string region_out;

  auto* boundary = region->add_subcommand("boundary", "Largest sustainable symmetric rate");
  boundary->add_option("--n", links, "link count")->required();
  boundary->add_option("--rho", rho, "allowed drop fraction")->required();
  boundary->add_option("--p", on_p, "channel on probability")->required();

  auto* membership = region->add_subcommand("membership", "Verdict for one symmetric rate");
  membership->add_option("--n", links, "link count")->required();
  membership->add_option("--rho", rho, "allowed drop fraction")->required();
  membership->add_option("--p", on_p, "channel on probability")->required();
  membership->add_option("--lambda", lambda, "arrival rate to test")->required();

  auto* lp = region->add_subcommand("lp", "Feasibility program plus price-vector oracle");
  lp->add_option("--n", links, "link count")->required();
  lp->add_option("--rho", rho, "allowed drop fraction")->required();
  lp->add_option("--p", on_p, "channel on probability")->required();
  lp->add_option("--lambda", lambda, "arrival rate to test")->required();
  lp->add_option("--slack", slack, "required feasibility slack");
  lp->add_option("--directions", directions, "random oracle directions");
  lp->add_option("--out", region_out, "witness CSV path");

  // simulate / sweep
  CommonFlags simulate_flags, sweep_flags;
  std::uint64_t seed_value = 0;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario over its horizon");
  simulate->add_option("--config", simulate_flags.config_path, "scenario file")->required();
  auto* simulate_seed = simulate->add_option("--seed", seed_value, "override the config seed");
  simulate->add_option("--out", simulate_flags.out_path, "per-slot trace CSV path");

  auto* sweep = app.add_subcommand("sweep", "Run an axis sweep to CSV");
  sweep->add_option("--config", sweep_flags.config_path, "sweep file")->required();
  auto* sweep_seed = sweep->add_option("--seed", seed_value, "override the base seed");
  sweep->add_option("--out", sweep_flags.out_path, "output CSV path");
  sweep->add_option("--workers", sweep_flags.workers, "worker threads")
      ->check(CLI::Range(1, 1024));

  // verify
  auto* verify = app.add_subcommand("verify", "Statistical model checks");
  verify->require_subcommand(1);

  std::vector<double> state_x = {2.0, 1.0};
  std::vector<double> state_c = {1.0, 1.0};
  std::vector<double> state_a = {1.0, 5.0};
  std::string weight_name = "exp";
  std::size_t samples = 1000000;
  std::uint64_t verify_seed = 20240901;

  auto* eq8 = verify->add_subcommand("eq8", "Race selection and absorption identities");
  eq8->add_option("--x", state_x, "virtual queue state");
  eq8->add_option("--c", state_c, "channel capacities");
  eq8->add_option("--a", state_a, "arrivals");
  eq8->add_option("--weight", weight_name, "weight function name");
  eq8->add_option("--samples", samples, "race samples");
  eq8->add_option("--seed", verify_seed, "rng seed");

  int l2_links = 10, l2_states = 20;
  double l2_low = 5.0, l2_high = 50.0;
  std::vector<double> l2_eps = {0.1, 0.5};
  std::size_t l2_samples = 100000;

  auto* lemma2 = verify->add_subcommand("lemma2", "Low-weight selection tail bound");
  lemma2->add_option("--links", l2_links, "link count");
  lemma2->add_option("--states", l2_states, "random weight states");
  lemma2->add_option("--wstar-low", l2_low, "smallest max weight");
  lemma2->add_option("--wstar-high", l2_high, "largest max weight");
  lemma2->add_option("--eps", l2_eps, "epsilons to check");
  lemma2->add_option("--samples", l2_samples, "race samples per state");
  lemma2->add_option("--seed", verify_seed, "rng seed");

  CommonFlags stability_flags;
  double inside_rate = 0.024, outside_rate = 0.040;
  auto* stability = verify->add_subcommand("stability", "Both sides of the boundary");
  stability->add_option("--config", stability_flags.config_path, "scenario file")->required();
  stability->add_option("--inside", inside_rate, "rate inside the region");
  stability->add_option("--outside", outside_rate, "rate outside the region");
  auto* stability_seed = stability->add_option("--seed", seed_value, "override the config seed");

  std::vector<int> m_values = {4, 16, 64, 1024};
  auto* race = verify->add_subcommand("race-convergence",
                                      "Mini-slot winner law against the continuous race");
  race->add_option("--x", state_x, "virtual queue state");
  race->add_option("--c", state_c, "channel capacities");
  race->add_option("--a", state_a, "arrivals");
  race->add_option("--weight", weight_name, "weight function name");
  race->add_option("--m", m_values, "round counts, ascending");
  race->add_option("--samples", samples, "samples per round count");
  race->add_option("--seed", verify_seed, "rng seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (boundary->parsed()) return run_region_boundary(links, rho, on_p);
    if (membership->parsed()) return run_region_membership(links, rho, on_p, lambda);
    if (lp->parsed())
      return run_region_lp(links, rho, on_p, lambda, slack, directions, region_out);

    if (simulate->parsed()) {
      if (!simulate_seed->empty()) simulate_flags.seed = seed_value;
      return run_simulate(simulate_flags);
    }
    if (sweep->parsed()) {
      if (!sweep_seed->empty()) sweep_flags.seed = seed_value;
      return run_sweep_command(sweep_flags);
    }

    const auto weight = fcsma::WeightFunction::from_name(weight_name);
    if ((eq8->parsed() || race->parsed()) && !weight)
      return fail("unknown weight function " + weight_name);

    if (eq8->parsed()) {
      const auto report = fcsma::verify_eq8(state_x, to_int(state_c), to_int(state_a),
                                            *weight, samples, verify_seed);
      std::cout << report.to_text();
      return report.pass ? 0 : 1;
    }
    if (lemma2->parsed()) {
      const auto report = fcsma::verify_lemma2(l2_links, l2_states, l2_low, l2_high,
                                               l2_eps, l2_samples, verify_seed);
      std::cout << report.to_text();
      return report.pass ? 0 : 1;
    }
    if (stability->parsed()) {
      const auto text = read_file(stability_flags.config_path);
      if (!text) return fail("cannot read " + stability_flags.config_path);
      auto parsed = fcsma::parse_scenario(*text);
      if (!parsed.ok()) {
        print_field_errors(parsed.errors);
        return 2;
      }
      auto config = *parsed.config;
      if (!stability_seed->empty()) config.seed = seed_value;
      const auto report = fcsma::verify_stability(config, inside_rate, outside_rate);
      std::cout << report.to_text();
      return report.pass ? 0 : 1;
    }
    if (race->parsed()) {
      const auto report = fcsma::verify_race_convergence(
          state_x, to_int(state_c), to_int(state_a), *weight, m_values, samples,
          verify_seed);
      std::cout << report.to_text();
      return report.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return fail("no subcommand executed");
}
