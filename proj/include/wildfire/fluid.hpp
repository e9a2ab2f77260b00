#pragma once

// Deterministic fluid approximation of the fire MDP as a mixed integer
// program over continuous intensities I_t(x) and fuels F_t(x), fuel-exhaustion
// indicators z_t(x) and team assignments A_t(x, i).

#include <vector>

#include "wildfire/grid_mdp.hpp"
#include "wildfire/lp.hpp"

namespace wildfire::fluid {

/// Intensity upper bounds are clamped here to keep big-M terms finite.
inline constexpr double kIntensityCap = 1e12;

struct Calibration {
  int horizon = 10;    // T
  double delta = 0.1;  // fuel threshold
  /// zeta[x] lists (y, zeta(y, x)) for every y in N(x).
  std::vector<std::vector<SpreadModel::Source>> zeta;
  /// Suppression rate per cell, shared by all teams and periods.
  std::vector<double> zeta_tilde;
  /// ibar[t][x] for t = 0..T.
  std::vector<std::vector<double>> ibar;
  std::vector<double> f0;
  /// Set when some ibar entry hit kIntensityCap.
  bool capped = false;

  int cells() const { return static_cast<int>(f0.size()); }
};

Calibration calibrate(const SpreadModel& spread, const FireState& state, int horizon, double delta = 0.1);

/// `importance` minimizes sum |R(x)| I_t(x), treating rewards as positive
/// importance weights. `literal` uses the raw (negative) rewards, which
/// rewards intensity instead of penalizing it.
enum class Objective { importance, literal };

struct FluidModel {
  lp::LpProblem lp;
  int horizon = 0;
  int cells = 0;
  int teams = 0;

  int I(int t, Cell x) const { return t * cells + x; }
  int F(int t, Cell x) const { return block() + t * cells + x; }
  int z(int t, Cell x) const { return 2 * block() + t * cells + x; }
  int A(int t, Cell x, int i) const { return 3 * block() + (t * cells + x) * teams + i; }

  int block() const { return (horizon + 1) * cells; }
};

/// Column names use base-36 cell indices so that k <= 36 grids fit the
/// 8-character MPS name field.
FluidModel build_model(const Calibration& calib, const FireState& state, const RewardModel& rewards, int teams,
                       Objective objective = Objective::importance);

struct BnbOptions {
  double time_limit = lp::kInf;  // seconds
  /// Relative gap at which search stops.
  double gap_tol = 1e-9;
  double integrality_tol = 1e-6;
  /// Branching class per column (lower branches first); empty means all 0.
  std::vector<int> priority;
  lp::SimplexOptions simplex;
};

/// Best-first branch and bound over the integer columns, most-fractional
/// branching inside the lowest priority class that has a fractional value.
lp::LpSolution branch_and_bound(const lp::LpProblem& problem, const BnbOptions& options = {});

/// Branching classes that put every z column ahead of every A column.
std::vector<int> fluid_priorities(const FluidModel& model);

}  // namespace wildfire::fluid
