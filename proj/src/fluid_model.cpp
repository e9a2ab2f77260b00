#include "wildfire/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wildfire::fluid {

namespace {

inline std::size_t idx(int i) { return static_cast<std::size_t>(i); }

std::string base36(int v) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), kDigits[v % 36]);
    v /= 36;
  }
  return s;
}

std::string name(char prefix, int t, int x) { return prefix + std::to_string(t) + "_" + base36(x); }

}  // namespace

Calibration calibrate(const SpreadModel& spread, const FireState& state, int horizon, double delta) {
  if (horizon < 1) throw std::invalid_argument("calibrate: horizon must be at least 1");
  if (!(delta > 0.0)) throw std::invalid_argument("calibrate: delta must be positive");
  const int n = state.cells();
  Calibration c;
  c.horizon = horizon;
  c.delta = delta;
  c.zeta.resize(idx(n));
  c.zeta_tilde.resize(idx(n));
  for (Cell x = 0; x < n; ++x) {
    const auto src = spread.sources(x);
    c.zeta[idx(x)].assign(src.begin(), src.end());
    c.zeta_tilde[idx(x)] = spread.suppression(x);
  }

  c.ibar.assign(idx(horizon + 1), std::vector<double>(idx(n), 0.0));
  for (Cell x = 0; x < n; ++x) c.ibar[0][idx(x)] = state.is_burning(x) ? 1.0 : 0.0;
  for (int t = 1; t <= horizon; ++t) {
    const auto& prev = c.ibar[idx(t - 1)];
    auto& cur = c.ibar[idx(t)];
    for (Cell x = 0; x < n; ++x) {
      double v = prev[idx(x)];
      for (const auto& s : c.zeta[idx(x)]) v += prev[idx(s.from)];
      if (v > kIntensityCap) {
        v = kIntensityCap;
        c.capped = true;
      }
      cur[idx(x)] = v;
    }
  }

  c.f0.assign(idx(n), delta);
  for (Cell x = 0; x < n; ++x) {
    const int last = std::min(horizon, state.fuel[idx(x)]);
    for (int t = 0; t <= last; ++t) c.f0[idx(x)] += c.ibar[idx(t)][idx(x)];
  }
  return c;
}

FluidModel build_model(const Calibration& calib, const FireState& state, const RewardModel& rewards, int teams,
                       Objective objective) {
  const int n = calib.cells();
  const int T = calib.horizon;
  if (state.cells() != n || rewards.cells() != n) throw std::invalid_argument("build_model: cell count mismatch");
  if (static_cast<int>(calib.ibar.size()) != T + 1) throw std::invalid_argument("build_model: horizon mismatch");
  if (teams < 0) throw std::invalid_argument("build_model: negative team count");

  FluidModel m;
  m.horizon = T;
  m.cells = n;
  m.teams = teams;
  lp::LpProblem& lp = m.lp;
  lp.name = "FLUID";

  for (int t = 0; t <= T; ++t) {
    for (Cell x = 0; x < n; ++x) {
      const double w = objective == Objective::importance ? -rewards[x] : rewards[x];
      const double lo = t == 0 ? (state.is_burning(x) ? 1.0 : 0.0) : 0.0;
      const double up = t == 0 ? lo : lp::kInf;
      lp.add_column(name('I', t, x), w, lo, up);
    }
  }
  for (int t = 0; t <= T; ++t) {
    for (Cell x = 0; x < n; ++x) lp.add_column(name('F', t, x), 0.0, 0.0, lp::kInf);
  }
  for (int t = 0; t <= T; ++t) {
    for (Cell x = 0; x < n; ++x) lp.add_column(name('Z', t, x), 0.0, 0.0, 1.0, true);
  }
  for (int t = 0; t <= T; ++t) {
    for (Cell x = 0; x < n; ++x) {
      for (int i = 0; i < teams; ++i) {
        lp.add_column(name('A', t, x) + "_" + base36(i), 0.0, 0.0, 1.0, true);
      }
    }
  }

  // Intensity dynamics, t = 1..T:
  // I_t(x) - I_{t-1}(x) - sum zeta I_{t-1}(y) + sum_i ibar_t zeta~ A_{t-1}(x,i) + M z_{t-1}(x) >= 0
  for (int t = 1; t <= T; ++t) {
    for (Cell x = 0; x < n; ++x) {
      const int r = lp.add_row(name('B', t, x), lp::RowSense::ge, 0.0);
      lp.add_coef(r, m.I(t, x), 1.0);
      lp.add_coef(r, m.I(t - 1, x), -1.0);
      double big_m = calib.f0[idx(x)];
      for (const auto& s : calib.zeta[idx(x)]) {
        lp.add_coef(r, m.I(t - 1, s.from), -s.p);
        big_m += calib.f0[idx(s.from)];
      }
      const double cut = calib.ibar[idx(t)][idx(x)] * calib.zeta_tilde[idx(x)];
      for (int i = 0; i < teams; ++i) lp.add_coef(r, m.A(t - 1, x, i), cut);
      lp.add_coef(r, m.z(t - 1, x), big_m);
    }
  }
  // Fuel accounting: F_t(x) + sum_{t' < t} I_t'(x) = F0(x).
  for (int t = 0; t <= T; ++t) {
    for (Cell x = 0; x < n; ++x) {
      const int r = lp.add_row(name('C', t, x), lp::RowSense::eq, calib.f0[idx(x)]);
      lp.add_coef(r, m.F(t, x), 1.0);
      for (int s = 0; s < t; ++s) lp.add_coef(r, m.I(s, x), 1.0);
    }
  }
  // F_t(x) >= delta (1 - z_t(x)).
  for (int t = 0; t <= T; ++t) {
    for (Cell x = 0; x < n; ++x) {
      const int r = lp.add_row(name('D', t, x), lp::RowSense::ge, calib.delta);
      lp.add_coef(r, m.F(t, x), 1.0);
      lp.add_coef(r, m.z(t, x), calib.delta);
    }
  }
  // F_t(x) <= delta z_t(x) + F0(x) (1 - z_t(x)).
  for (int t = 0; t <= T; ++t) {
    for (Cell x = 0; x < n; ++x) {
      const int r = lp.add_row(name('E', t, x), lp::RowSense::le, calib.f0[idx(x)]);
      lp.add_coef(r, m.F(t, x), 1.0);
      lp.add_coef(r, m.z(t, x), calib.f0[idx(x)] - calib.delta);
    }
  }
  // I_{t+1}(x) <= F0(x) (1 - z_t(x)), t = 0..T-1.
  for (int t = 0; t < T; ++t) {
    for (Cell x = 0; x < n; ++x) {
      const int r = lp.add_row(name('H', t, x), lp::RowSense::le, calib.f0[idx(x)]);
      lp.add_coef(r, m.I(t + 1, x), 1.0);
      lp.add_coef(r, m.z(t, x), calib.f0[idx(x)]);
    }
  }
  // Each team works at most one cell per period.
  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < teams; ++i) {
      const int r = lp.add_row("G" + std::to_string(t) + "_" + base36(i), lp::RowSense::le, 1.0);
      for (Cell x = 0; x < n; ++x) lp.add_coef(r, m.A(t, x, i), 1.0);
    }
  }
  return m;
}

std::vector<int> fluid_priorities(const FluidModel& model) {
  std::vector<int> p(idx(model.lp.num_cols()), 0);
  for (int j = model.A(0, 0, 0); j < model.lp.num_cols(); ++j) p[idx(j)] = 1;
  return p;
}

}  // namespace wildfire::fluid
