#pragma once

// References for the fluid program: an exhaustive search over every binary
// setting of a tiny instance (each setting leaves an intensity-only LP that
// goes to the dense tableau solver) and the uncontrolled forward recursion.

#include <cmath>
#include <limits>
#include <vector>

#include "oracles/lp_oracles.hpp"
#include "wildfire/fluid.hpp"

namespace oracle {

struct FluidInstance {
  int horizon = 0;
  int teams = 0;
  double delta = 0.1;
  std::vector<double> weight;  // objective weight per cell
  std::vector<double> i0;      // 1 when burning
  std::vector<double> f0;
  std::vector<double> q;       // suppression rate per cell
  /// ibar[t][x]
  std::vector<std::vector<double>> ibar;
  /// src[x] = (y, zeta(y, x))
  std::vector<std::vector<std::pair<int, double>>> src;

  int cells() const { return static_cast<int>(f0.size()); }
};

/// The data the builder consumes, recomputed from first principles.
inline FluidInstance make_instance(const wildfire::FireModel& m, const wildfire::FireState& s, int horizon,
                                   double delta) {
  FluidInstance in;
  const int n = m.cells();
  in.horizon = horizon;
  in.teams = m.teams();
  in.delta = delta;
  in.src.resize(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    in.weight.push_back(-m.rewards()[x]);
    in.i0.push_back(s.is_burning(x) ? 1.0 : 0.0);
    in.q.push_back(m.spread().suppression(x));
    for (int y : m.grid().neighbors(x)) {
      const double p = m.spread().ignition(x, y);
      if (p > 0.0) in.src[static_cast<std::size_t>(x)].emplace_back(y, p);
    }
  }
  in.ibar.push_back(in.i0);
  for (int t = 1; t <= horizon; ++t) {
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
      double v = in.ibar.back()[static_cast<std::size_t>(x)];
      for (auto [y, p] : in.src[static_cast<std::size_t>(x)]) v += in.ibar.back()[static_cast<std::size_t>(y)];
      next[static_cast<std::size_t>(x)] = v;
    }
    in.ibar.push_back(next);
  }
  for (int x = 0; x < n; ++x) {
    double f = delta;
    const int last = std::min(horizon, s.fuel[static_cast<std::size_t>(x)]);
    for (int t = 0; t <= last; ++t) f += in.ibar[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
    in.f0.push_back(f);
  }
  return in;
}

struct ExhaustiveResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  long settings = 0;  // binary settings examined
};

/// Minimum of the mixed program over every z_0..z_{T-1} and every team
/// placement for periods 0..T-1 (4g allows each team one cell or none).
/// z_T and A_T appear in no coupling row: z_T only bounds F_T, and the union
/// of its two cases is 0 <= F_T <= F0, which is imposed directly.
inline ExhaustiveResult exhaustive_milp(const FluidInstance& in) {
  const int n = in.cells();
  const int T = in.horizon;
  // Columns are I_1..I_T.
  auto var = [&](int t, int x) { return (t - 1) * n + x; };
  const double tol = 1e-9;

  // Allowed z_0 values follow from F_0 = F0.
  std::vector<std::vector<int>> z0_options(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const double f = in.f0[static_cast<std::size_t>(x)];
    if (f >= in.delta - tol) z0_options[static_cast<std::size_t>(x)].push_back(0);
    if (f <= in.delta + tol) z0_options[static_cast<std::size_t>(x)].push_back(1);
  }

  ExhaustiveResult best;
  const int per_period = in.teams == 0 ? 1 : static_cast<int>(std::pow(n + 1, in.teams));
  long a_total = 1;
  for (int t = 0; t < T; ++t) a_total *= per_period;
  const int free_z = (T - 1) * n;

  std::vector<int> z(static_cast<std::size_t>(T * n));
  std::vector<double> teams_on(static_cast<std::size_t>(T * n));
  for (long a_code = 0; a_code < a_total; ++a_code) {
    std::fill(teams_on.begin(), teams_on.end(), 0.0);
    long code = a_code;
    for (int t = 0; t < T; ++t) {
      for (int i = 0; i < in.teams; ++i) {
        const int cell = static_cast<int>(code % (n + 1)) - 1;
        code /= n + 1;
        if (cell >= 0) teams_on[static_cast<std::size_t>(t * n + cell)] += 1.0;
      }
    }
    // z_0 combinations times free z_1..z_{T-1}.
    long z0_total = 1;
    for (const auto& o : z0_options) z0_total *= static_cast<long>(o.size());
    for (long z0_code = 0; z0_code < z0_total; ++z0_code) {
      long c0 = z0_code;
      for (int x = 0; x < n; ++x) {
        const auto& o = z0_options[static_cast<std::size_t>(x)];
        z[static_cast<std::size_t>(x)] = o[static_cast<std::size_t>(c0 % static_cast<long>(o.size()))];
        c0 /= static_cast<long>(o.size());
      }
      for (long zc = 0; zc < (1L << free_z); ++zc) {
        for (int k = 0; k < free_z; ++k) z[static_cast<std::size_t>(n + k)] = static_cast<int>((zc >> k) & 1);
        ++best.settings;

        wildfire::lp::LpProblem p;
        for (int t = 1; t <= T; ++t) {
          for (int x = 0; x < n; ++x) {
            p.add_column("i", in.weight[static_cast<std::size_t>(x)], 0.0, wildfire::lp::kInf);
          }
        }
        bool dead = false;
        auto add = [&](std::vector<std::pair<int, double>> coefs, wildfire::lp::RowSense sense, double rhs) {
          if (coefs.empty()) {
            const bool ok = sense == wildfire::lp::RowSense::le   ? 0.0 <= rhs + tol
                            : sense == wildfire::lp::RowSense::ge ? 0.0 >= rhs - tol
                                                                  : std::abs(rhs) <= tol;
            if (!ok) dead = true;
            return;
          }
          const int r = p.add_row("r", sense, rhs);
          for (auto [j, v] : coefs) p.add_coef(r, j, v);
        };
        using wildfire::lp::RowSense;
        for (int t = 1; t <= T; ++t) {
          for (int x = 0; x < n; ++x) {
            const auto xs = static_cast<std::size_t>(x);
            // I_t(x) >= I_{t-1}(x) + sum zeta I_{t-1}(y) - ibar_t q teams - M z_{t-1}(x)
            double big_m = in.f0[xs];
            for (auto [y, pz] : in.src[xs]) big_m += in.f0[static_cast<std::size_t>(y)];
            double rhs = -in.ibar[static_cast<std::size_t>(t)][xs] * in.q[xs] *
                             teams_on[static_cast<std::size_t>((t - 1) * n + x)] -
                         big_m * z[static_cast<std::size_t>((t - 1) * n + x)];
            std::vector<std::pair<int, double>> coefs{{var(t, x), 1.0}};
            if (t == 1) {
              rhs += in.i0[xs];
              for (auto [y, pz] : in.src[xs]) rhs += pz * in.i0[static_cast<std::size_t>(y)];
            } else {
              coefs.emplace_back(var(t - 1, x), -1.0);
              for (auto [y, pz] : in.src[xs]) coefs.emplace_back(var(t - 1, y), -pz);
            }
            add(coefs, RowSense::ge, rhs);
          }
        }
        for (int t = 0; t <= T; ++t) {
          for (int x = 0; x < n; ++x) {
            const auto xs = static_cast<std::size_t>(x);
            // used = sum_{t' < t} I_t'(x); F_t = F0 - used.
            std::vector<std::pair<int, double>> used;
            double used_const = 0.0;
            for (int s = 0; s < t; ++s) {
              if (s == 0) {
                used_const += in.i0[xs];
              } else {
                used.emplace_back(var(s, x), 1.0);
              }
            }
            const double f0 = in.f0[xs];
            double lo_f = 0.0, hi_f = f0;  // z_T: the union of both cases
            if (t < T) {
              const int zt = z[static_cast<std::size_t>(t * n + x)];
              lo_f = zt ? 0.0 : in.delta;
              hi_f = zt ? in.delta : f0;
            }
            // lo_f <= F0 - used <= hi_f
            add(used, RowSense::le, f0 - lo_f - used_const);
            add(used, RowSense::ge, f0 - hi_f - used_const);
            if (t < T) {
              const int zt = z[static_cast<std::size_t>(t * n + x)];
              add({{var(t + 1, x), 1.0}}, RowSense::le, f0 * (1 - zt));
            }
          }
        }
        if (dead) continue;
        const TableauResult r = tableau_solve(p);
        if (r.status != TableauStatus::optimal) continue;
        double obj = r.objective;
        for (int x = 0; x < n; ++x) obj += in.weight[static_cast<std::size_t>(x)] * in.i0[static_cast<std::size_t>(x)];
        if (obj < best.objective) {
          best.objective = obj;
          best.feasible = true;
        }
      }
    }
  }
  return best;
}

struct Trajectory {
  /// False when fuel would go negative before the fire is cut off.
  bool feasible = true;
  std::vector<std::vector<double>> intensity;  // [t][x], t = 0..T
};

/// Uncontrolled fluid dynamics: I_t = I_{t-1} + sum zeta I_{t-1}(y) while the
/// cell's fuel stays above delta; once F_t <= delta the intensity from t+1 on
/// is zero.
inline Trajectory forward_recursion(const FluidInstance& in) {
  const int n = in.cells();
  const int T = in.horizon;
  Trajectory out;
  out.intensity.push_back(in.i0);
  std::vector<double> fuel = in.f0;
  std::vector<int> cut(static_cast<std::size_t>(n), 0);
  for (int t = 1; t <= T; ++t) {
    const auto& prev = out.intensity.back();
    for (int x = 0; x < n; ++x) {
      const auto xs = static_cast<std::size_t>(x);
      cut[xs] = fuel[xs] <= in.delta + 1e-12 ? 1 : 0;
    }
    std::vector<double> cur(static_cast<std::size_t>(n), 0.0);
    for (int x = 0; x < n; ++x) {
      const auto xs = static_cast<std::size_t>(x);
      fuel[xs] -= prev[xs];
      if (fuel[xs] < -1e-9) out.feasible = false;
      if (cut[xs]) continue;
      double v = prev[xs];
      for (auto [y, p] : in.src[xs]) v += p * prev[static_cast<std::size_t>(y)];
      cur[xs] = v;
    }
    out.intensity.push_back(cur);
  }
  return out;
}

}  // namespace oracle
