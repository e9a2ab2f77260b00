#pragma once

// Sparse linear program container and a bounded-variable revised simplex
// solver (dual method from a dual feasible start, primal otherwise).

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace wildfire::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : char { le = 'L', ge = 'G', eq = 'E' };

/// min c'x  s.t.  a_i'x (<=|>=|=) b_i,  l <= x <= u.
/// The matrix is stored by column; every column keeps its entries sorted by
/// row.
class LpProblem {
 public:
  struct Entry {
    int row;
    double value;
  };

  std::string name = "LP";

  int add_column(std::string name, double cost, double lower, double upper, bool integer = false);
  int add_row(std::string name, RowSense sense, double rhs);
  /// Adds `value` to A(row, col).
  void add_coef(int row, int col, double value);

  int num_cols() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(rhs_.size()); }
  std::size_t num_nonzeros() const;

  double cost(int j) const { return cost_[static_cast<std::size_t>(j)]; }
  double lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
  double upper(int j) const { return upper_[static_cast<std::size_t>(j)]; }
  bool is_integer(int j) const { return integer_[static_cast<std::size_t>(j)] != 0; }
  const std::string& col_name(int j) const { return col_names_[static_cast<std::size_t>(j)]; }
  const std::vector<Entry>& column(int j) const { return cols_[static_cast<std::size_t>(j)]; }

  RowSense sense(int i) const { return sense_[static_cast<std::size_t>(i)]; }
  double rhs(int i) const { return rhs_[static_cast<std::size_t>(i)]; }
  const std::string& row_name(int i) const { return row_names_[static_cast<std::size_t>(i)]; }

  void set_cost(int j, double c) { cost_[static_cast<std::size_t>(j)] = c; }
  void set_bounds(int j, double lower, double upper);
  void set_integer(int j, bool integer) { integer_[static_cast<std::size_t>(j)] = integer ? 1 : 0; }
  void set_rhs(int i, double b) { rhs_[static_cast<std::size_t>(i)] = b; }

  double objective(const std::vector<double>& x) const;
  std::vector<double> row_activity(const std::vector<double>& x) const;
  /// Largest absolute violation of any row or bound.
  double max_violation(const std::vector<double>& x) const;

  bool operator==(const LpProblem&) const;

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<std::uint8_t> integer_;
  std::vector<std::string> col_names_;
  std::vector<std::vector<Entry>> cols_;
  std::vector<RowSense> sense_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit, time_limit, numerical_error, no_incumbent };

std::string to_string(Status s);

struct LpSolution {
  Status status = Status::numerical_error;
  std::vector<double> x;
  double objective = 0.0;
  long iterations = 0;
  long degenerate_pivots = 0;
  long bland_pivots = 0;
  /// Best proven lower bound (branch and bound only).
  double bound = -kInf;
  /// Relative gap between objective and bound (branch and bound only).
  double gap = kInf;
  long nodes = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-6;
  double optimality_tol = 1e-7;
  double pivot_tol = 1e-9;
  long max_iterations = 200000;
  double time_limit = kInf;  // seconds
  int refactor_interval = 100;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_switch = 50;
  bool scale = true;
};

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options = {});

}  // namespace wildfire::lp
