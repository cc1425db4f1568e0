#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace dspanner {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

/// minimize objective . x  subject to  rows,  x >= lower_bounds.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<std::size_t, double>> terms;  // (variable, coefficient)
    RowSense sense = RowSense::kLessEqual;
    double rhs = 0.0;
  };

  std::size_t num_vars = 0;
  std::vector<double> objective;     // size num_vars
  std::vector<double> lower_bounds;  // size num_vars; empty means all zero
  std::vector<Row> rows;

  std::size_t add_variable(double cost, double lower_bound = 0.0);
  void add_row(std::vector<std::pair<std::size_t, double>> terms, RowSense sense, double rhs);
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  std::size_t max_iterations = 1'000'000;
  /// Consecutive degenerate pivots tolerated under Dantzig pricing before
  /// switching to Bland's rule until the objective moves again.
  std::size_t degenerate_streak_limit = 50;
};

enum class SimplexStatus { kOptimal, kInfeasible, kUnbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::kInfeasible;
  std::vector<double> values;  // size num_vars, includes lower-bound shifts
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Dense two-phase tableau simplex. Throws Error(NumericalFailure) when the
/// iteration cap is reached.
SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace dspanner
