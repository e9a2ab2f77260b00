// Bounded-variable revised simplex.
//
// Every row i gets a logical variable s_i with A x - s = 0, so all
// constraints become equalities and row senses turn into bounds on s. When
// the starting basis is dual feasible (the usual case for minimization with
// nonnegative costs) the dual simplex runs first; the primal simplex then
// finishes from whatever basis is left. Primal phase 1 minimizes the sum of
// bound violations of the basic variables. The basis is factorized with
// Eigen's SparseLU and updated in product form between refactorizations.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "wildfire/lp.hpp"

namespace wildfire::lp {

namespace {

enum class VarState : std::uint8_t { basic, at_lower, at_upper, free_zero };

struct Eta {
  int r;
  double pivot;
  std::vector<std::pair<int, double>> entries;  // alpha without row r
};

inline std::size_t idx(int i) { return static_cast<std::size_t>(i); }

double pow2_round(double v) { return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(v)))); }

// Internal outcome of one algorithm pass.
enum class Pass { optimal, infeasible, unbounded, iteration_limit, time_limit, numerical, switch_to_primal };

class Simplex {
 public:
  Simplex(const LpProblem& p, const SimplexOptions& o) : problem_(p), opt_(o) {}

  LpSolution run();

 private:
  using Entry = LpProblem::Entry;

  void setup();
  void scale_problem();
  void crash_basis();
  bool refactor();
  void recompute_basics();
  void compute_duals();
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  void load_column(int j, Eigen::VectorXd& v) const;
  double dot_column(int j, const Eigen::VectorXd& y) const;
  void pivot(int leave, int enter, const Eigen::VectorXd& alpha, double leave_value);
  bool out_of_budget(Pass& why) const;
  bool fixed(int j) const { return lo_[idx(j)] == up_[idx(j)]; }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool dual_feasible_start() const;
  /// Flips boxed nonbasic columns whose reduced cost has the wrong sign.
  /// Returns false when an unboxed column is dual infeasible.
  bool repair_dual();
  Pass dual();
  Pass primal(double phase1_tol);
  LpSolution finish(Status status);

  const LpProblem& problem_;
  SimplexOptions opt_;
  int m_ = 0, n_ = 0, total_ = 0;
  std::vector<std::vector<Entry>> cols_;
  std::vector<double> cost_, lo_, up_, x_, d_;
  std::vector<double> col_scale_, row_scale_;
  std::vector<double> ftol_;  // per-variable feasibility tolerance in scaled units
  std::vector<VarState> state_;
  std::vector<int> basis_, pos_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  int since_refactor_ = 0;
  std::chrono::steady_clock::time_point start_;
  LpSolution sol_;
};

void Simplex::setup() {
  m_ = problem_.num_rows();
  n_ = problem_.num_cols();
  total_ = n_ + m_;
  cols_.resize(idx(n_));
  cost_.assign(idx(total_), 0.0);
  lo_.assign(idx(total_), 0.0);
  up_.assign(idx(total_), 0.0);
  for (int j = 0; j < n_; ++j) {
    cols_[idx(j)] = problem_.column(j);
    cost_[idx(j)] = problem_.cost(j);
    lo_[idx(j)] = problem_.lower(j);
    up_[idx(j)] = problem_.upper(j);
  }
  for (int i = 0; i < m_; ++i) {
    const double b = problem_.rhs(i);
    double& l = lo_[idx(n_ + i)];
    double& u = up_[idx(n_ + i)];
    switch (problem_.sense(i)) {
      case RowSense::le: l = -kInf; u = b; break;
      case RowSense::ge: l = b; u = kInf; break;
      case RowSense::eq: l = b; u = b; break;
    }
  }
  col_scale_.assign(idx(n_), 1.0);
  row_scale_.assign(idx(m_), 1.0);
  if (opt_.scale) scale_problem();
  // A violation must stay within tolerance both in scaled units and once
  // mapped back through the scale factor.
  const double ftol = opt_.feasibility_tol;
  ftol_.resize(idx(total_));
  for (int j = 0; j < n_; ++j) ftol_[idx(j)] = std::min(ftol, ftol / col_scale_[idx(j)]);
  for (int i = 0; i < m_; ++i) ftol_[idx(n_ + i)] = std::min(ftol, ftol * row_scale_[idx(i)]);
}

// Geometric-mean scaling by powers of two, alternating rows and columns.
void Simplex::scale_problem() {
  for (int pass = 0; pass < 6; ++pass) {
    std::vector<double> rmin(idx(m_), kInf), rmax(idx(m_), 0.0);
    for (int j = 0; j < n_; ++j) {
      for (const Entry& e : cols_[idx(j)]) {
        const double a = std::abs(e.value) * col_scale_[idx(j)] * row_scale_[idx(e.row)];
        rmin[idx(e.row)] = std::min(rmin[idx(e.row)], a);
        rmax[idx(e.row)] = std::max(rmax[idx(e.row)], a);
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (rmax[idx(i)] > 0.0) row_scale_[idx(i)] *= pow2_round(1.0 / std::sqrt(rmin[idx(i)] * rmax[idx(i)]));
    }
    for (int j = 0; j < n_; ++j) {
      double cmin = kInf, cmax = 0.0;
      for (const Entry& e : cols_[idx(j)]) {
        const double a = std::abs(e.value) * col_scale_[idx(j)] * row_scale_[idx(e.row)];
        cmin = std::min(cmin, a);
        cmax = std::max(cmax, a);
      }
      if (cmax > 0.0) col_scale_[idx(j)] *= pow2_round(1.0 / std::sqrt(cmin * cmax));
    }
  }
  for (int j = 0; j < n_; ++j) {
    const double c = col_scale_[idx(j)];
    for (Entry& e : cols_[idx(j)]) e.value *= c * row_scale_[idx(e.row)];
    cost_[idx(j)] *= c;
    lo_[idx(j)] /= c;
    up_[idx(j)] /= c;
  }
  for (int i = 0; i < m_; ++i) {
    lo_[idx(n_ + i)] *= row_scale_[idx(i)];
    up_[idx(n_ + i)] *= row_scale_[idx(i)];
  }
}

// Slack basis. Structural columns rest at the bound their cost prefers, so
// the start is dual feasible whenever that is possible.
void Simplex::crash_basis() {
  x_.assign(idx(total_), 0.0);
  d_.assign(idx(total_), 0.0);
  state_.assign(idx(total_), VarState::at_lower);
  basis_.resize(idx(m_));
  pos_.assign(idx(total_), -1);
  for (int j = 0; j < n_; ++j) {
    const bool lo_ok = std::isfinite(lo_[idx(j)]);
    const bool up_ok = std::isfinite(up_[idx(j)]);
    const bool prefer_upper = cost_[idx(j)] < 0.0 && up_ok;
    if (lo_ok && !prefer_upper) {
      state_[idx(j)] = VarState::at_lower;
      x_[idx(j)] = lo_[idx(j)];
    } else if (up_ok) {
      state_[idx(j)] = VarState::at_upper;
      x_[idx(j)] = up_[idx(j)];
    } else {
      state_[idx(j)] = VarState::free_zero;
      x_[idx(j)] = 0.0;
    }
  }
  for (int i = 0; i < m_; ++i) {
    basis_[idx(i)] = n_ + i;
    pos_[idx(n_ + i)] = i;
    state_[idx(n_ + i)] = VarState::basic;
  }
}

void Simplex::load_column(int j, Eigen::VectorXd& v) const {
  v.setZero(m_);
  if (j < n_) {
    for (const Entry& e : cols_[idx(j)]) v[e.row] = e.value;
  } else {
    v[j - n_] = -1.0;
  }
}

double Simplex::dot_column(int j, const Eigen::VectorXd& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (const Entry& e : cols_[idx(j)]) s += e.value * y[e.row];
  return s;
}

bool Simplex::refactor() {
  etas_.clear();
  since_refactor_ = 0;
  if (m_ == 0) return true;
  std::vector<Eigen::Triplet<double>> trip;
  for (int p = 0; p < m_; ++p) {
    const int j = basis_[idx(p)];
    if (j < n_) {
      for (const Entry& e : cols_[idx(j)]) trip.emplace_back(e.row, p, e.value);
    } else {
      trip.emplace_back(j - n_, p, -1.0);
    }
  }
  Eigen::SparseMatrix<double> b(m_, m_);
  b.setFromTriplets(trip.begin(), trip.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  return lu_.info() == Eigen::Success;
}

void Simplex::recompute_basics() {
  if (m_ == 0) return;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < total_; ++j) {
    if (state_[idx(j)] == VarState::basic || x_[idx(j)] == 0.0) continue;
    if (j < n_) {
      for (const Entry& e : cols_[idx(j)]) rhs[e.row] -= e.value * x_[idx(j)];
    } else {
      rhs[j - n_] += x_[idx(j)];
    }
  }
  ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[idx(basis_[idx(p)])] = rhs[p];
}

void Simplex::compute_duals() {
  Eigen::VectorXd y(m_);
  for (int p = 0; p < m_; ++p) y[p] = cost_[idx(basis_[idx(p)])];
  btran(y);
  for (int j = 0; j < total_; ++j) {
    d_[idx(j)] = state_[idx(j)] == VarState::basic ? 0.0 : cost_[idx(j)] - dot_column(j, y);
  }
}

void Simplex::ftran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v);
  for (const Eta& eta : etas_) {
    const double xr = v[eta.r] / eta.pivot;
    if (xr != 0.0) {
      for (const auto& [i, a] : eta.entries) v[i] -= a * xr;
    }
    v[eta.r] = xr;
  }
}

void Simplex::btran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->r];
    for (const auto& [i, a] : it->entries) s -= a * v[i];
    v[it->r] = s / it->pivot;
  }
  v = lu_.transpose().solve(v);
}

void Simplex::pivot(int leave, int enter, const Eigen::VectorXd& alpha, double leave_value) {
  const int out = basis_[idx(leave)];
  x_[idx(out)] = leave_value;
  state_[idx(out)] = leave_value == lo_[idx(out)] ? VarState::at_lower : VarState::at_upper;
  pos_[idx(out)] = -1;
  basis_[idx(leave)] = enter;
  pos_[idx(enter)] = leave;
  state_[idx(enter)] = VarState::basic;
  Eta eta{leave, alpha[leave], {}};
  for (int p = 0; p < m_; ++p) {
    if (p != leave && alpha[p] != 0.0) eta.entries.emplace_back(p, alpha[p]);
  }
  etas_.push_back(std::move(eta));
  ++since_refactor_;
}

bool Simplex::out_of_budget(Pass& why) const {
  if (sol_.iterations >= opt_.max_iterations) {
    why = Pass::iteration_limit;
    return true;
  }
  if (elapsed() > opt_.time_limit) {
    why = Pass::time_limit;
    return true;
  }
  return false;
}

bool Simplex::dual_feasible_start() const {
  for (int j = 0; j < n_; ++j) {
    const double c = cost_[idx(j)];
    if (c > 0.0 && !std::isfinite(lo_[idx(j)])) return false;
    if (c < 0.0 && !std::isfinite(up_[idx(j)])) return false;
  }
  return true;
}

bool Simplex::repair_dual() {
  const double dtol = opt_.optimality_tol;
  bool flipped = false;
  for (int j = 0; j < total_; ++j) {
    const VarState st = state_[idx(j)];
    if (st == VarState::basic || fixed(j)) continue;
    const double dj = d_[idx(j)];
    if (st == VarState::at_lower && dj < -dtol) {
      if (!std::isfinite(up_[idx(j)])) return false;
      state_[idx(j)] = VarState::at_upper;
      x_[idx(j)] = up_[idx(j)];
      flipped = true;
    } else if (st == VarState::at_upper && dj > dtol) {
      if (!std::isfinite(lo_[idx(j)])) return false;
      state_[idx(j)] = VarState::at_lower;
      x_[idx(j)] = lo_[idx(j)];
      flipped = true;
    } else if (st == VarState::free_zero && std::abs(dj) > dtol) {
      return false;
    }
  }
  if (flipped) recompute_basics();
  return true;
}

Pass Simplex::dual() {
  const double dtol = opt_.optimality_tol;
  Eigen::VectorXd rho(m_), alpha(m_);
  std::vector<double> row(idx(total_), 0.0);
  int degenerate_run = 0;
  bool bland = false;
  bool fresh = false;

  compute_duals();
  if (!repair_dual()) return Pass::switch_to_primal;

  while (true) {
    Pass why;
    if (out_of_budget(why)) return why;
    if (since_refactor_ >= opt_.refactor_interval) {
      if (!refactor()) return Pass::numerical;
      recompute_basics();
      compute_duals();
      if (!repair_dual()) return Pass::switch_to_primal;
    }

    // Leaving row: largest bound violation, or lowest index under Bland.
    int r = -1;
    double worst = 0.0;
    for (int p = 0; p < m_; ++p) {
      const int j = basis_[idx(p)];
      const double v = x_[idx(j)];
      const double viol = std::max(lo_[idx(j)] - v, v - up_[idx(j)]);
      if (viol <= ftol_[idx(j)]) continue;
      if (bland) {
        if (r < 0 || j < basis_[idx(r)]) r = p;
      } else if (viol > worst) {
        worst = viol;
        r = p;
      }
    }
    if (r < 0) {
      if (fresh) return Pass::optimal;
      // Confirm on a fresh factorization.
      if (!refactor()) return Pass::numerical;
      recompute_basics();
      compute_duals();
      if (!repair_dual()) return Pass::switch_to_primal;
      fresh = true;
      continue;
    }
    fresh = false;

    const int leaving = basis_[idx(r)];
    const bool below = x_[idx(leaving)] < lo_[idx(leaving)];
    const double target = below ? lo_[idx(leaving)] : up_[idx(leaving)];
    const double s = below ? -1.0 : 1.0;

    rho.setZero(m_);
    rho[r] = 1.0;
    btran(rho);

    // Harris ratio test on the reduced costs.
    double tmax = kInf;
    for (int j = 0; j < total_; ++j) {
      const VarState st = state_[idx(j)];
      row[idx(j)] = 0.0;
      if (st == VarState::basic || fixed(j)) continue;
      const double a = dot_column(j, rho);
      row[idx(j)] = a;
      const double sa = s * a;
      const bool eligible = (st == VarState::at_lower && sa > opt_.pivot_tol) ||
                            (st == VarState::at_upper && sa < -opt_.pivot_tol) ||
                            (st == VarState::free_zero && std::abs(sa) > opt_.pivot_tol);
      if (!eligible) continue;
      tmax = std::min(tmax, (std::abs(d_[idx(j)]) + dtol) / std::abs(a));
    }
    if (!std::isfinite(tmax)) return Pass::infeasible;
    int q = -1;
    double best_alpha = 0.0;
    for (int j = 0; j < total_; ++j) {
      const double a = row[idx(j)];
      if (a == 0.0) continue;
      const VarState st = state_[idx(j)];
      const double sa = s * a;
      const bool eligible = (st == VarState::at_lower && sa > opt_.pivot_tol) ||
                            (st == VarState::at_upper && sa < -opt_.pivot_tol) ||
                            (st == VarState::free_zero && std::abs(sa) > opt_.pivot_tol);
      if (!eligible) continue;
      const double t = std::abs(d_[idx(j)]) / std::abs(a);
      if (t > tmax) continue;
      const bool better = bland ? (q < 0 || j < q) : std::abs(a) > best_alpha;
      if (better) {
        q = j;
        best_alpha = std::abs(a);
      }
    }
    if (q < 0) return Pass::infeasible;

    load_column(q, alpha);
    ftran(alpha);
    if (std::abs(alpha[r]) < opt_.pivot_tol ||
        std::abs(alpha[r] - row[idx(q)]) > 1e-6 * (1.0 + std::abs(alpha[r]))) {
      // Row and column disagree: the factorization has drifted.
      if (since_refactor_ == 0) return Pass::numerical;
      if (!refactor()) return Pass::numerical;
      recompute_basics();
      compute_duals();
      if (!repair_dual()) return Pass::switch_to_primal;
      continue;
    }

    ++sol_.iterations;
    const double theta_d = d_[idx(q)] / row[idx(q)];
    if (std::abs(theta_d) <= 1e-12) {
      ++sol_.degenerate_pivots;
      if (++degenerate_run > opt_.degenerate_switch) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    if (bland) ++sol_.bland_pivots;

    // Primal step: the leaving variable lands exactly on its violated bound.
    const double step = (x_[idx(leaving)] - target) / alpha[r];
    x_[idx(q)] += step;
    for (int p = 0; p < m_; ++p) {
      if (alpha[p] != 0.0) x_[idx(basis_[idx(p)])] -= step * alpha[p];
    }
    // Dual step.
    for (int j = 0; j < total_; ++j) {
      if (row[idx(j)] != 0.0) d_[idx(j)] -= theta_d * row[idx(j)];
    }
    d_[idx(q)] = 0.0;
    d_[idx(leaving)] = -theta_d;
    pivot(r, q, alpha, target);
  }
}

Pass Simplex::primal(double tighten) {
  const double otol = opt_.optimality_tol;
  Eigen::VectorXd y(m_), alpha(m_);
  std::vector<double> cb(idx(m_));
  int degenerate_run = 0;
  bool bland = false;
  int recoveries = 0;
  bool verified = false;
  bool in_phase2 = true;

  while (true) {
    Pass why;
    if (out_of_budget(why)) return why;
    if (since_refactor_ >= opt_.refactor_interval) {
      if (!refactor()) return Pass::numerical;
      recompute_basics();
    }

    // Phase 1 starts when a basic variable leaves its tolerance band and
    // keeps going until every one is well inside it.
    const double band = in_phase2 ? tighten : 0.1 * tighten;
    bool phase1 = false;
    for (int p = 0; p < m_; ++p) {
      const int j = basis_[idx(p)];
      const double tol = band * ftol_[idx(j)];
      double c = 0.0;
      if (x_[idx(j)] < lo_[idx(j)] - tol) c = -1.0;
      if (x_[idx(j)] > up_[idx(j)] + tol) c = 1.0;
      cb[idx(p)] = c;
      phase1 = phase1 || c != 0.0;
    }
    in_phase2 = !phase1;
    if (!phase1) {
      for (int p = 0; p < m_; ++p) cb[idx(p)] = cost_[idx(basis_[idx(p)])];
    }
    for (int p = 0; p < m_; ++p) y[p] = cb[idx(p)];
    btran(y);

    // Pricing: Dantzig, or smallest eligible index under Bland's rule.
    int enter = -1;
    double enter_d = 0.0;
    double best = 0.0;
    for (int j = 0; j < total_; ++j) {
      const VarState st = state_[idx(j)];
      if (st == VarState::basic || fixed(j)) continue;
      const double d = (phase1 ? 0.0 : cost_[idx(j)]) - dot_column(j, y);
      bool eligible = false;
      switch (st) {
        case VarState::at_lower: eligible = d < -otol; break;
        case VarState::at_upper: eligible = d > otol; break;
        case VarState::free_zero: eligible = std::abs(d) > otol; break;
        case VarState::basic: break;
      }
      if (!eligible) continue;
      if (bland) {
        enter = j;
        enter_d = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        enter_d = d;
      }
    }

    if (enter < 0) {
      if (phase1) return Pass::infeasible;
      if (!verified) {
        verified = true;
        if (!refactor()) return Pass::numerical;
        recompute_basics();
        continue;
      }
      return Pass::optimal;
    }
    verified = false;

    load_column(enter, alpha);
    ftran(alpha);
    const double dir = enter_d < 0.0 ? 1.0 : -1.0;

    // Harris two-pass ratio test with phase-1 bound handling: an infeasible
    // basic variable blocks only when it moves toward its violated bound.
    auto blocking = [&](int p, double& dist, double& target) {
      const int j = basis_[idx(p)];
      const double rate = -dir * alpha[p];
      const double xj = x_[idx(j)];
      const double l = lo_[idx(j)];
      const double u = up_[idx(j)];
      const bool below = phase1 && cb[idx(p)] < 0.0;
      const bool above = phase1 && cb[idx(p)] > 0.0;
      if (rate > 0.0) {
        if (below) {
          target = l;
        } else if (above || !std::isfinite(u)) {
          return false;
        } else {
          target = u;
        }
        dist = target - xj;
      } else {
        if (above) {
          target = u;
        } else if (below || !std::isfinite(l)) {
          return false;
        } else {
          target = l;
        }
        dist = xj - target;
      }
      return true;
    };

    double theta_max = kInf;
    for (int p = 0; p < m_; ++p) {
      if (std::abs(alpha[p]) <= opt_.pivot_tol) continue;
      double dist = 0.0, target = 0.0;
      if (!blocking(p, dist, target)) continue;
      const double harris = 0.05 * tighten * ftol_[idx(basis_[idx(p)])];
      theta_max = std::min(theta_max, (std::max(dist, 0.0) + harris) / std::abs(alpha[p]));
    }
    int leave = -1;
    double leave_target = 0.0;
    double theta = kInf;
    if (std::isfinite(theta_max)) {
      double best_pivot = 0.0;
      int best_var = -1;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= opt_.pivot_tol) continue;
        double dist = 0.0, target = 0.0;
        if (!blocking(p, dist, target)) continue;
        const double t = std::max(dist, 0.0) / std::abs(alpha[p]);
        if (t > theta_max) continue;
        const int var = basis_[idx(p)];
        const bool better = bland ? (best_var < 0 || var < best_var) : std::abs(alpha[p]) > best_pivot;
        if (better) {
          best_pivot = std::abs(alpha[p]);
          best_var = var;
          leave = p;
          leave_target = target;
          theta = t;
        }
      }
    }

    const double span = up_[idx(enter)] - lo_[idx(enter)];
    const bool flip = std::isfinite(span) && span <= theta;
    if (flip) theta = span;
    if (!flip && leave < 0) {
      if (!phase1) return Pass::unbounded;
      if (++recoveries > 3) return Pass::numerical;
      if (!refactor()) return Pass::numerical;
      recompute_basics();
      continue;
    }

    ++sol_.iterations;
    if (bland) ++sol_.bland_pivots;
    if (theta <= 1e-12) {
      ++sol_.degenerate_pivots;
      if (++degenerate_run > opt_.degenerate_switch) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    const double step = dir * theta;
    x_[idx(enter)] += step;
    if (step != 0.0) {
      for (int p = 0; p < m_; ++p) {
        if (alpha[p] != 0.0) x_[idx(basis_[idx(p)])] -= step * alpha[p];
      }
    }
    if (flip) {
      const bool to_upper = dir > 0.0;
      state_[idx(enter)] = to_upper ? VarState::at_upper : VarState::at_lower;
      x_[idx(enter)] = to_upper ? up_[idx(enter)] : lo_[idx(enter)];
      continue;
    }
    pivot(leave, enter, alpha, leave_target);
  }
}

LpSolution Simplex::finish(Status status) {
  sol_.status = status;
  sol_.x.assign(idx(n_), 0.0);
  for (int j = 0; j < n_; ++j) sol_.x[idx(j)] = x_.empty() ? 0.0 : x_[idx(j)] * col_scale_[idx(j)];
  if (status == Status::optimal) {
    // Nonbasic columns sit exactly on their original bounds.
    for (int j = 0; j < n_; ++j) {
      if (state_[idx(j)] == VarState::at_lower) sol_.x[idx(j)] = problem_.lower(j);
      if (state_[idx(j)] == VarState::at_upper) sol_.x[idx(j)] = problem_.upper(j);
    }
  }
  sol_.objective = problem_.objective(sol_.x);
  return sol_;
}

LpSolution Simplex::run() {
  start_ = std::chrono::steady_clock::now();
  setup();
  for (int j = 0; j < n_; ++j) {
    if (problem_.lower(j) > problem_.upper(j)) return finish(Status::infeasible);
  }
  crash_basis();
  if (!refactor()) return finish(Status::numerical_error);
  recompute_basics();

  auto to_status = [](Pass p) {
    switch (p) {
      case Pass::optimal: return Status::optimal;
      case Pass::infeasible: return Status::infeasible;
      case Pass::unbounded: return Status::unbounded;
      case Pass::iteration_limit: return Status::iteration_limit;
      case Pass::time_limit: return Status::time_limit;
      default: return Status::numerical_error;
    }
  };

  if (dual_feasible_start()) {
    const Pass p = dual();
    if (p == Pass::iteration_limit || p == Pass::time_limit) return finish(to_status(p));
    // Any other outcome is confirmed (or repaired) by the primal method.
  }
  // Tighten the tolerance bands on each retry if the unscaled answer still
  // violates the feasibility tolerance.
  double tighten = 1.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const Pass p = primal(tighten);
    if (p != Pass::optimal) return finish(to_status(p));
    LpSolution out = finish(Status::optimal);
    if (problem_.max_violation(out.x) <= opt_.feasibility_tol) return out;
    tighten *= 0.1;
    if (!refactor()) break;
    recompute_basics();
  }
  LpSolution out = finish(Status::optimal);
  out.status = Status::numerical_error;
  return out;
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options) {
  Simplex s(problem, options);
  return s.run();
}

}  // namespace wildfire::lp
