#include "dspanner/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "dspanner/error.hpp"

namespace dspanner {

std::size_t LinearProgram::add_variable(double cost, double lower_bound) {
  objective.push_back(cost);
  lower_bounds.resize(num_vars, 0.0);
  lower_bounds.push_back(lower_bound);
  return num_vars++;
}

void LinearProgram::add_row(std::vector<std::pair<std::size_t, double>> terms, RowSense sense,
                            double rhs) {
  rows.push_back({std::move(terms), sense, rhs});
}

namespace {

constexpr double kDropTolerance = 1e-13;
constexpr std::size_t kRefineInterval = 100;
constexpr double kRelativePivot = 0.01;
constexpr double kPerturbation = 1e-7;

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options) : opt_(options) {
    const std::size_t n = lp.num_vars;
    m_ = lp.rows.size();
    num_struct_ = n;

    // Column layout: structural | one slack/surplus per inequality | artificials.
    std::size_t num_slack = 0;
    std::size_t num_art = 0;
    std::vector<double> rhs(m_);
    std::vector<double> sign(m_, 1.0);
    std::vector<RowSense> sense(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      double b = row.rhs;
      if (!lp.lower_bounds.empty()) {
        for (const auto& [j, a] : row.terms) b -= a * lp.lower_bounds[j];
      }
      RowSense s = row.sense;
      if (b < 0.0) {
        sign[i] = -1.0;
        b = -b;
        if (s == RowSense::kLessEqual) {
          s = RowSense::kGreaterEqual;
        } else if (s == RowSense::kGreaterEqual) {
          s = RowSense::kLessEqual;
        }
      }
      rhs[i] = b;
      sense[i] = s;
      if (s != RowSense::kEqual) ++num_slack;
      if (s != RowSense::kLessEqual) ++num_art;
    }
    first_art_ = n + num_slack;
    cols_ = first_art_ + num_art;
    width_ = cols_ + 1;
    data_.assign(m_ * width_, 0.0);
    basis_.assign(m_, 0);
    original_.resize(m_);
    rhs_ = rhs;
    target_ = rhs;

    std::size_t next_slack = n;
    std::size_t next_art = first_art_;
    for (std::size_t i = 0; i < m_; ++i) {
      double* r = row(i);
      for (const auto& [j, a] : lp.rows[i].terms) r[j] += sign[i] * a;
      r[cols_] = rhs[i];
      for (const auto& [j, a] : lp.rows[i].terms) original_[i].emplace_back(j, sign[i] * a);
      switch (sense[i]) {
        case RowSense::kLessEqual:
          r[next_slack] = 1.0;
          original_[i].emplace_back(next_slack, 1.0);
          basis_[i] = next_slack++;
          break;
        case RowSense::kGreaterEqual:
          r[next_slack] = -1.0;
          original_[i].emplace_back(next_slack++, -1.0);
          r[next_art] = 1.0;
          original_[i].emplace_back(next_art, 1.0);
          basis_[i] = next_art++;
          break;
        case RowSense::kEqual:
          r[next_art] = 1.0;
          original_[i].emplace_back(next_art, 1.0);
          basis_[i] = next_art++;
          break;
      }
    }
    initial_basis_ = basis_;
  }

  SimplexStatus phase_one() {
    // minimize the sum of artificials
    cost_.assign(cols_, 0.0);
    for (std::size_t j = first_art_; j < cols_; ++j) cost_[j] = 1.0;
    price();
    const SimplexStatus st = iterate(/*allow_artificial=*/true);
    if (st != SimplexStatus::kOptimal) return SimplexStatus::kInfeasible;
    refine();
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (is_artificial(basis_[i])) infeasibility += row(i)[cols_];
    }
    if (infeasibility > 1e-7) return SimplexStatus::kInfeasible;
    drive_out_artificials();
    return SimplexStatus::kOptimal;
  }

  SimplexStatus phase_two(const LinearProgram& lp) {
    cost_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < num_struct_; ++j) cost_[j] = lp.objective[j];
    price();
    perturb();
    SimplexStatus st = iterate(/*allow_artificial=*/false);
    target_ = rhs_;
    refine();
    if (st == SimplexStatus::kOptimal) {
      repair_primal();
      st = iterate(/*allow_artificial=*/false);
      refine();
    }
    return st;
  }

  std::vector<double> structural_values() const {
    std::vector<double> x(num_struct_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < num_struct_) x[basis_[i]] = row(i)[cols_];
    }
    return x;
  }

  std::size_t iterations() const { return iterations_; }

 private:
  double* row(std::size_t i) { return data_.data() + i * width_; }
  const double* row(std::size_t i) const { return data_.data() + i * width_; }
  bool is_artificial(std::size_t j) const { return j >= first_art_; }

  // Reduced costs d_j = c_j - c_B B^-1 A_j for the current basis.
  void price() {
    reduced_.assign(cost_.begin(), cost_.end());
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* r = row(i);
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= cb * r[j];
    }
  }

  SimplexStatus iterate(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? cols_ : first_art_;
    std::size_t degenerate_streak = 0;
    bool bland = false;
    for (;;) {
      if (iterations_ >= opt_.max_iterations) {
        throw Error(ErrorCode::kNumericalFailure,
                    "simplex iteration cap (" + std::to_string(opt_.max_iterations) + ") reached");
      }
      std::size_t enter = cols_;
      double best = -opt_.pivot_tolerance;
      for (std::size_t j = 0; j < limit; ++j) {
        if (reduced_[j] < best) {
          enter = j;
          if (bland) break;
          best = reduced_[j];
        }
      }
      if (enter == cols_) return SimplexStatus::kOptimal;

      const std::size_t leave = ratio_test(enter, bland);
      if (leave == m_) return SimplexStatus::kUnbounded;

      if (row(leave)[cols_] <= opt_.feasibility_tolerance) {
        if (++degenerate_streak >= opt_.degenerate_streak_limit) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      pivot(leave, enter);
      if (++iterations_ % kRefineInterval == 0) refine();
    }
  }

  // Iterative refinement of the basic values against the original rows. The
  // columns of the starting basis hold B^-1.
  void refine() {
    std::vector<double> value(cols_, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      std::fill(value.begin(), value.end(), 0.0);
      for (std::size_t i = 0; i < m_; ++i) value[basis_[i]] = row(i)[cols_];
      std::vector<double> residual(m_);
      for (std::size_t i = 0; i < m_; ++i) {
        double r = target_[i];
        for (const auto& [j, a] : original_[i]) r -= a * value[j];
        residual[i] = r;
      }
      for (std::size_t k = 0; k < m_; ++k) {
        double* rk = row(k);
        double delta = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
          if (residual[i] != 0.0) delta += rk[initial_basis_[i]] * residual[i];
        }
        rk[cols_] += delta;
        if (rk[cols_] < 0.0 && rk[cols_] > -opt_.feasibility_tolerance) rk[cols_] = 0.0;
      }
    }
  }

  // Raises every basic value except artificials by a small row-dependent
  // amount, i.e. solves with b + B delta, so that degenerate ties vanish.
  void perturb() {
    std::vector<double> shift(cols_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (is_artificial(basis_[i])) continue;
      const double u = static_cast<double>((static_cast<std::uint64_t>(i + 1) * 0x9e3779b97f4a7c15ULL) >> 11) *
                       0x1.0p-53;
      shift[basis_[i]] = kPerturbation * (1.0 + u);
      row(i)[cols_] += shift[basis_[i]];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& [j, a] : original_[i]) target_[i] += a * shift[j];
    }
  }

  // Dual simplex pivots until no basic value is below -tolerance. Reduced
  // costs stay nonnegative, so the basis remains optimal.
  void repair_primal() {
    for (;;) {
      if (iterations_ >= opt_.max_iterations) {
        throw Error(ErrorCode::kNumericalFailure,
                    "simplex iteration cap (" + std::to_string(opt_.max_iterations) + ") reached");
      }
      std::size_t leave = m_;
      double worst = -opt_.feasibility_tolerance;
      for (std::size_t i = 0; i < m_; ++i) {
        if (row(i)[cols_] < worst) {
          worst = row(i)[cols_];
          leave = i;
        }
      }
      if (leave == m_) return;
      const double* r = row(leave);
      std::size_t enter = cols_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (r[j] >= -opt_.pivot_tolerance) continue;
        const double ratio = std::max(reduced_[j], 0.0) / -r[j];
        if (ratio < best_ratio) {
          best_ratio = ratio;
          enter = j;
        }
      }
      if (enter == cols_) throw Error(ErrorCode::kNumericalFailure, "simplex: cannot restore primal feasibility");
      pivot(leave, enter);
      ++iterations_;
    }
  }

  // Step bound with every row relaxed by the feasibility tolerance.
  double harris_bound(std::size_t enter) const {
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = row(i)[enter];
      if (a <= opt_.pivot_tolerance) continue;
      bound = std::min(bound, (std::max(row(i)[cols_], 0.0) + opt_.feasibility_tolerance) / a);
    }
    return bound;
  }

  // Rows within the Harris bound whose pivot element is not much smaller than
  // the largest such element; Bland's rule takes the lowest basic variable,
  // otherwise the largest element wins.
  std::size_t ratio_test(std::size_t enter, bool bland) const {
    const double bound = harris_bound(enter);
    double max_a = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = row(i)[enter];
      if (a > opt_.pivot_tolerance && std::max(row(i)[cols_], 0.0) / a <= bound) max_a = std::max(max_a, a);
    }
    std::size_t leave = m_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = row(i)[enter];
      if (a <= opt_.pivot_tolerance || a < kRelativePivot * max_a || std::max(row(i)[cols_], 0.0) / a > bound) {
        continue;
      }
      if (leave == m_) {
        leave = i;
        continue;
      }
      const double best = row(leave)[enter];
      if (bland ? basis_[i] < basis_[leave] : (a > best || (a == best && basis_[i] < basis_[leave]))) leave = i;
    }
    return leave;
  }

  void pivot(std::size_t r, std::size_t c) {
    double* pr = row(r);
    const double inv = 1.0 / pr[c];
    nz_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (pr[j] == 0.0) continue;
      pr[j] *= inv;
      if (std::abs(pr[j]) < kDropTolerance) {
        pr[j] = 0.0;
        continue;
      }
      nz_.push_back(j);
    }
    pr[c] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double f = ri[c];
      if (f == 0.0) continue;
      for (std::size_t j : nz_) {
        double v = ri[j] - f * pr[j];
        ri[j] = std::abs(v) < kDropTolerance ? 0.0 : v;
      }
      ri[c] = 0.0;
      if (ri[cols_] < 0.0 && ri[cols_] > -opt_.feasibility_tolerance) ri[cols_] = 0.0;
    }
    const double f = reduced_[c];
    if (f != 0.0) {
      for (std::size_t j : nz_) {
        if (j < cols_) reduced_[j] -= f * pr[j];
      }
      reduced_[c] = 0.0;
    }
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      const double* r = row(i);
      std::size_t best = cols_;
      double best_abs = opt_.pivot_tolerance;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (std::abs(r[j]) > best_abs) {
          best_abs = std::abs(r[j]);
          best = j;
        }
      }
      // No candidate: the row is redundant and its artificial stays basic at zero.
      if (best != cols_) {
        pivot(i, best);
        ++iterations_;
      }
    }
  }

  SimplexOptions opt_;
  std::size_t m_ = 0;
  std::size_t num_struct_ = 0;
  std::size_t first_art_ = 0;
  std::size_t cols_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
  std::vector<double> cost_;
  std::vector<double> reduced_;
  std::vector<std::size_t> nz_;
  std::vector<std::vector<std::pair<std::size_t, double>>> original_;  // sign-adjusted rows
  std::vector<double> rhs_;
  std::vector<double> target_;  // right-hand side the basic values are refined against
  std::vector<std::size_t> initial_basis_;
  std::size_t iterations_ = 0;
};

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  if (lp.objective.size() != lp.num_vars ||
      (!lp.lower_bounds.empty() && lp.lower_bounds.size() != lp.num_vars)) {
    throw Error(ErrorCode::kInvalidArgument, "linear program: inconsistent variable arrays");
  }
  for (const auto& r : lp.rows) {
    for (const auto& [j, a] : r.terms) {
      if (j >= lp.num_vars || !std::isfinite(a)) {
        throw Error(ErrorCode::kInvalidArgument, "linear program: bad row term");
      }
    }
  }

  Tableau tableau(lp, options);
  SimplexResult result;
  if (tableau.phase_one() != SimplexStatus::kOptimal) {
    result.status = SimplexStatus::kInfeasible;
    result.iterations = tableau.iterations();
    return result;
  }
  result.status = tableau.phase_two(lp);
  result.iterations = tableau.iterations();
  result.values = tableau.structural_values();
  if (!lp.lower_bounds.empty()) {
    for (std::size_t j = 0; j < lp.num_vars; ++j) result.values[j] += lp.lower_bounds[j];
  }
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    result.objective += lp.objective[j] * result.values[j];
  }
  return result;
}

}  // namespace dspanner
