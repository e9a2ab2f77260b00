#include "wildfire/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wildfire::lp {

namespace {
inline std::size_t idx(int i) { return static_cast<std::size_t>(i); }
}  // namespace

int LpProblem::add_column(std::string name, double cost, double lower, double upper, bool integer) {
  if (lower > upper) throw std::invalid_argument("add_column: lower bound exceeds upper bound for " + name);
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integer_.push_back(integer ? 1 : 0);
  col_names_.push_back(std::move(name));
  cols_.emplace_back();
  return num_cols() - 1;
}

int LpProblem::add_row(std::string name, RowSense sense, double rhs) {
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  row_names_.push_back(std::move(name));
  return num_rows() - 1;
}

void LpProblem::add_coef(int row, int col, double value) {
  if (row < 0 || row >= num_rows() || col < 0 || col >= num_cols()) throw std::out_of_range("add_coef: index");
  if (value == 0.0) return;
  auto& c = cols_[idx(col)];
  auto it = std::lower_bound(c.begin(), c.end(), row, [](const Entry& e, int r) { return e.row < r; });
  if (it != c.end() && it->row == row) {
    it->value += value;
    if (it->value == 0.0) c.erase(it);
  } else {
    c.insert(it, Entry{row, value});
  }
}

std::size_t LpProblem::num_nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

void LpProblem::set_bounds(int j, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("set_bounds: lower bound exceeds upper bound");
  lower_[idx(j)] = lower;
  upper_[idx(j)] = upper;
}

double LpProblem::objective(const std::vector<double>& x) const {
  double v = 0.0;
  for (int j = 0; j < num_cols(); ++j) v += cost_[idx(j)] * x[idx(j)];
  return v;
}

std::vector<double> LpProblem::row_activity(const std::vector<double>& x) const {
  std::vector<double> act(idx(num_rows()), 0.0);
  for (int j = 0; j < num_cols(); ++j) {
    for (const Entry& e : cols_[idx(j)]) act[idx(e.row)] += e.value * x[idx(j)];
  }
  return act;
}

double LpProblem::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    worst = std::max(worst, lower_[idx(j)] - x[idx(j)]);
    worst = std::max(worst, x[idx(j)] - upper_[idx(j)]);
  }
  const auto act = row_activity(x);
  for (int i = 0; i < num_rows(); ++i) {
    const double d = act[idx(i)] - rhs_[idx(i)];
    switch (sense_[idx(i)]) {
      case RowSense::le: worst = std::max(worst, d); break;
      case RowSense::ge: worst = std::max(worst, -d); break;
      case RowSense::eq: worst = std::max(worst, std::abs(d)); break;
    }
  }
  return worst;
}

bool LpProblem::operator==(const LpProblem& o) const {
  if (name != o.name || cost_ != o.cost_ || lower_ != o.lower_ || upper_ != o.upper_ || integer_ != o.integer_ ||
      col_names_ != o.col_names_ || sense_ != o.sense_ || rhs_ != o.rhs_ || row_names_ != o.row_names_) {
    return false;
  }
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (cols_[j].size() != o.cols_[j].size()) return false;
    for (std::size_t k = 0; k < cols_[j].size(); ++k) {
      if (cols_[j][k].row != o.cols_[j][k].row || cols_[j][k].value != o.cols_[j][k].value) return false;
    }
  }
  return true;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
    case Status::time_limit: return "time_limit";
    case Status::numerical_error: return "numerical_error";
    case Status::no_incumbent: return "no_incumbent";
  }
  return "unknown";
}

}  // namespace wildfire::lp
