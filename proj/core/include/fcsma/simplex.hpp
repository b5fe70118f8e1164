#ifndef FCSMA_SIMPLEX_HPP
#define FCSMA_SIMPLEX_HPP

#include <cstddef>
#include <vector>

namespace fcsma {

// Dense two-phase primal simplex for small equality-form programs:
//   maximize objective . x   subject to  constraints x = rhs,  x >= 0.
// Bland's rule throughout, so it terminates on degenerate problems. Meant
// for the region cross-checks (hundreds of variables), not for scale.
struct SimplexResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> solution;
};

SimplexResult solve_equality_lp(std::vector<std::vector<double>> constraints,
                                std::vector<double> rhs,
                                const std::vector<double>& objective,
                                double tolerance = 1e-9,
                                std::size_t max_iterations = 200000);

}  // namespace fcsma

#endif
