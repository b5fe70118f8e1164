#include "fcsma/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fcsma {

namespace {

class Tableau {
 public:
  // Columns: the n structural variables followed by m artificials.
  Tableau(std::vector<std::vector<double>> constraints, std::vector<double> rhs,
          double tolerance)
      : m_(constraints.size()),
        n_(constraints.empty() ? 0 : constraints.front().size()),
        tol_(tolerance),
        rows_(std::move(constraints)),
        rhs_(std::move(rhs)),
        basis_(m_) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (rows_[i].size() != n_) throw std::invalid_argument("ragged constraint matrix");
      if (rhs_[i] < 0.0) {
        for (auto& v : rows_[i]) v = -v;
        rhs_[i] = -rhs_[i];
      }
      rows_[i].resize(n_ + m_, 0.0);
      rows_[i][n_ + i] = 1.0;
      basis_[i] = n_ + i;
    }
  }

  std::size_t structural_columns() const { return n_; }
  std::size_t artificial_start() const { return n_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  double basic_value(std::size_t row) const { return rhs_[row]; }

  // Reduced-cost row for maximizing cost . x under the current basis.
  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> z(n_ + m_ + 1, 0.0);
    for (std::size_t j = 0; j < cost.size(); ++j) z[j] = -cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = basis_[i] < cost.size() ? cost[basis_[i]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < n_ + m_; ++j) z[j] += cb * rows_[i][j];
      z[n_ + m_] += cb * rhs_[i];
    }
    return z;
  }

  void pivot(std::size_t row, std::size_t col, std::vector<double>& z) {
    const double pivot_value = rows_[row][col];
    for (auto& v : rows_[row]) v /= pivot_value;
    rhs_[row] /= pivot_value;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = rows_[i][col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < n_ + m_; ++j) rows_[i][j] -= factor * rows_[row][j];
      rhs_[i] -= factor * rhs_[row];
      if (rhs_[i] < 0.0 && rhs_[i] > -tol_) rhs_[i] = 0.0;
    }
    const double zf = z[col];
    if (zf != 0.0) {
      for (std::size_t j = 0; j < n_ + m_; ++j) z[j] -= zf * rows_[row][j];
      z[n_ + m_] -= zf * rhs_[row];
    }
    basis_[row] = col;
  }

  // Bland's rule: lowest eligible entering column, lowest-index leaving row
  // among minimal ratios. allowed_columns bounds the entering choice.
  SimplexResult::Status iterate(std::vector<double>& z, std::size_t allowed_columns,
                                std::size_t max_iterations) {
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      std::size_t entering = allowed_columns;
      for (std::size_t j = 0; j < allowed_columns; ++j) {
        if (z[j] < -tol_) {
          entering = j;
          break;
        }
      }
      if (entering == allowed_columns) return SimplexResult::Status::Optimal;

      std::size_t leaving = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (rows_[i][entering] <= tol_) continue;
        const double ratio = rhs_[i] / rows_[i][entering];
        if (ratio < best_ratio - tol_ ||
            (ratio < best_ratio + tol_ && (leaving == m_ || basis_[i] < basis_[leaving]))) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving == m_) return SimplexResult::Status::Unbounded;
      pivot(leaving, entering, z);
    }
    return SimplexResult::Status::IterationLimit;
  }

  // After phase one, kick artificials out of the basis where possible and
  // drop rows that turned out redundant.
  void purge_artificials(std::vector<double>& z) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(rows_[i][j]) > tol_) {
          col = j;
          break;
        }
      }
      if (col < n_) pivot(i, col, z);
      // else: redundant constraint; the artificial stays basic at zero and
      // phase two never lets it grow because its column is barred.
    }
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = std::max(rhs_[i], 0.0);
    return x;
  }

 private:
  std::size_t m_, n_;
  double tol_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
  std::vector<std::size_t> basis_;
};

}  // namespace

SimplexResult solve_equality_lp(std::vector<std::vector<double>> constraints,
                                std::vector<double> rhs,
                                const std::vector<double>& objective,
                                double tolerance, std::size_t max_iterations) {
  if (constraints.size() != rhs.size())
    throw std::invalid_argument("constraint and rhs counts differ");
  const std::size_t n = constraints.empty() ? 0 : constraints.front().size();
  if (objective.size() != n)
    throw std::invalid_argument("objective length must match variable count");

  SimplexResult result;
  Tableau tableau(std::move(constraints), std::move(rhs), tolerance);
  const std::size_t total = tableau.structural_columns() +
                            (tableau.basis().empty() ? 0 : tableau.basis().size());

  // Phase one: maximize -(sum of artificials).
  std::vector<double> phase1_cost(total, 0.0);
  for (std::size_t j = tableau.artificial_start(); j < total; ++j) phase1_cost[j] = -1.0;
  auto z = tableau.reduced_costs(phase1_cost);
  auto status = tableau.iterate(z, total, max_iterations);
  if (status != SimplexResult::Status::Optimal) {
    result.status = status;
    return result;
  }
  double infeasibility = 0.0;
  for (std::size_t i = 0; i < tableau.basis().size(); ++i)
    if (tableau.basis()[i] >= tableau.artificial_start())
      infeasibility += tableau.basic_value(i);
  if (infeasibility > 1e-7) {
    result.status = SimplexResult::Status::Infeasible;
    return result;
  }
  tableau.purge_artificials(z);

  // Phase two: the real objective, artificial columns barred from entering.
  std::vector<double> phase2_cost(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = objective[j];
  z = tableau.reduced_costs(phase2_cost);
  status = tableau.iterate(z, tableau.structural_columns(), max_iterations);
  result.status = status;
  if (status != SimplexResult::Status::Optimal) return result;

  result.solution = tableau.solution();
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.objective += objective[j] * result.solution[j];
  return result;
}

}  // namespace fcsma
