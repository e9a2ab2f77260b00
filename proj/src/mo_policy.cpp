#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <unordered_set>

#include "wildfire/mo.hpp"

namespace wildfire::fluid {

namespace {

inline std::size_t idx(int i) { return static_cast<std::size_t>(i); }

constexpr double kScoreEps = 1e-9;

std::vector<double> first_period_mass(const FluidModel& m, const std::vector<double>& x) {
  std::vector<double> v(idx(m.cells), 0.0);
  for (Cell c = 0; c < m.cells; ++c) {
    for (int i = 0; i < m.teams; ++i) v[idx(c)] += x[idx(m.A(0, c, i))];
  }
  return v;
}

}  // namespace

void MoConfig::validate() const {
  if (horizon < 1) throw ConfigError("mo.horizon: must be at least 1");
  if (!(delta > 0.0)) throw ConfigError("mo.delta: must be positive");
  if (!(time_limit >= 0.0)) throw ConfigError("mo.time_limit: must be nonnegative");
  if (exact_z_limit < 0) throw ConfigError("mo.exact_z_limit: must be nonnegative");
  if (!(simplex.feasibility_tol > 0.0)) throw ConfigError("mo.feasibility_tol: must be positive");
  if (!(simplex.optimality_tol > 0.0)) throw ConfigError("mo.optimality_tol: must be positive");
}

MoConfig mo_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("mo: expected an object");
  static const std::unordered_set<std::string> known = {"horizon",         "delta",          "time_limit",
                                                        "exact_z_limit",   "objective",      "feasibility_tol",
                                                        "optimality_tol"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ConfigError("mo." + key + ": unknown field");
  }
  MoConfig c;
  auto num = [&](const char* key, double& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) throw ConfigError(std::string("mo.") + key + ": expected a number");
    out = doc[key].get<double>();
  };
  auto integer = [&](const char* key, int& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) throw ConfigError(std::string("mo.") + key + ": expected an integer");
    out = doc[key].get<int>();
  };
  integer("horizon", c.horizon);
  num("delta", c.delta);
  num("time_limit", c.time_limit);
  integer("exact_z_limit", c.exact_z_limit);
  num("feasibility_tol", c.simplex.feasibility_tol);
  num("optimality_tol", c.simplex.optimality_tol);
  if (doc.contains("objective")) {
    const auto& o = doc["objective"];
    if (!o.is_string() || (o != "importance" && o != "literal")) {
      throw ConfigError("mo.objective: expected \"importance\" or \"literal\"");
    }
    c.objective = o == "literal" ? Objective::literal : Objective::importance;
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const MoConfig& c) {
  return {{"horizon", c.horizon},
          {"delta", c.delta},
          {"time_limit", c.time_limit},
          {"exact_z_limit", c.exact_z_limit},
          {"objective", c.objective == Objective::literal ? "literal" : "importance"},
          {"feasibility_tol", c.simplex.feasibility_tol},
          {"optimality_tol", c.simplex.optimality_tol}};
}

Action score_action(const std::vector<double>& v, const FireState& state, int teams) {
  auto burning = state.burning_cells();
  if (burning.empty() || teams == 0) return Action::idle(teams);
  // A burning cell with no fuel goes out next step whatever the teams do.
  std::vector<Cell> live;
  for (Cell c : burning) {
    if (state.fuel[idx(c)] > 0) live.push_back(c);
  }
  if (!live.empty()) burning = std::move(live);
  std::vector<Cell> ranked = burning;
  std::stable_sort(ranked.begin(), ranked.end(), [&](Cell a, Cell b) { return v[idx(a)] > v[idx(b)]; });
  std::vector<Cell> chosen;
  for (Cell c : ranked) {
    if (static_cast<int>(chosen.size()) == teams) break;
    if (v[idx(c)] > kScoreEps) chosen.push_back(c);
  }
  if (chosen.empty()) chosen.push_back(ranked.front());
  Action a = Action::idle(teams);
  for (int i = 0; i < teams; ++i) {
    a.teams[idx(i)] = i < static_cast<int>(chosen.size()) ? chosen[idx(i)] : chosen.front();
  }
  return a;
}

ScoreResult relax_and_score(const FluidModel& model, const FireState& state, const MoConfig& config,
                            const WeightMap* fallback_weights) {
  const auto start = std::chrono::steady_clock::now();
  auto remaining = [&] {
    return config.time_limit - std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  ScoreResult out;
  auto accept = [&](const lp::LpSolution& s, const char* method) {
    out.solution = s;
    out.method = method;
    out.v = first_period_mass(model, s.x);
    out.action = score_action(out.v, state, model.teams);
    return out;
  };

  lp::LpProblem relaxed = model.lp;
  for (Cell c = 0; c < model.cells; ++c) {
    for (int t = 0; t <= model.horizon; ++t) {
      for (int i = 0; i < model.teams; ++i) relaxed.set_integer(model.A(t, c, i), false);
    }
  }

  const int z_count = model.block();
  if (z_count <= config.exact_z_limit) {
    BnbOptions bo;
    bo.time_limit = std::max(0.0, remaining());
    bo.priority = fluid_priorities(model);
    bo.simplex = config.simplex;
    const lp::LpSolution s = branch_and_bound(relaxed, bo);
    if (!s.x.empty() && (s.status == lp::Status::optimal || s.status == lp::Status::time_limit)) {
      return accept(s, "exact");
    }
  }

  for (int j = 0; j < relaxed.num_cols(); ++j) relaxed.set_integer(j, false);
  lp::SimplexOptions so = config.simplex;
  so.time_limit = std::max(0.0, remaining());
  const lp::LpSolution lp_sol = lp::solve_lp(relaxed, so);
  if (lp_sol.status != lp::Status::optimal) {
    out.solution = lp_sol;
    out.method = "fallback";
    out.fallback = true;
    out.v.assign(idx(model.cells), 0.0);
    out.action = fallback_weights ? fw_policy(state, *fallback_weights, model.teams) : Action::idle(model.teams);
    return out;
  }

  // Round z on the fuel threshold, fix it, and re-solve once.
  lp::LpProblem fixed = relaxed;
  for (int t = 0; t <= model.horizon; ++t) {
    for (Cell c = 0; c < model.cells; ++c) {
      const int j = model.z(t, c);
      const double f = lp_sol.x[idx(model.F(t, c))];
      const double zr = f <= config.delta + 1e-9 ? 1.0 : 0.0;
      fixed.set_bounds(j, zr, zr);
    }
  }
  so.time_limit = std::max(0.0, remaining());
  const lp::LpSolution fixed_sol = lp::solve_lp(fixed, so);
  if (fixed_sol.status == lp::Status::optimal) {
    lp::LpSolution s = fixed_sol;
    s.iterations += lp_sol.iterations;
    s.degenerate_pivots += lp_sol.degenerate_pivots;
    s.bound = lp_sol.objective;
    s.gap = std::max(0.0, s.objective - s.bound) / std::max(1.0, std::abs(s.objective));
    return accept(s, "rounded");
  }
  return accept(lp_sol, "relaxed");
}

MoPolicy::MoPolicy(const FireModel& model, MoConfig config, std::shared_ptr<const WeightMap> weights)
    : model_(model), config_(std::move(config)), weights_(std::move(weights)) {
  config_.validate();
  if (!weights_) {
    weights_ = std::make_shared<WeightMap>(
        fw_weights(all_pairs_distances(model_.grid(), model_.spread()), model_.rewards()));
  }
}

const char* MoPolicy::trace_header() {
  return "epoch,method,status,iterations,degenerate_pivots,nodes,objective,bound,gap,fallback";
}

ScoreResult MoPolicy::plan(const FireState& state, std::ostream* trace) {
  ScoreResult r;
  if (is_terminal(state)) {
    r.action = Action::idle(model_.teams());
    r.v.assign(idx(model_.cells()), 0.0);
    r.method = "idle";
    r.solution.status = lp::Status::optimal;
  } else {
    const Calibration calib = calibrate(model_.spread(), state, config_.horizon, config_.delta);
    if (calib.capped) std::cerr << "warning: intensity bound capped at " << kIntensityCap << '\n';
    const FluidModel m = build_model(calib, state, model_.rewards(), model_.teams(), config_.objective);
    r = relax_and_score(m, state, config_, weights_.get());
    if (r.fallback) std::cerr << "warning: fluid relaxation failed (" << lp::to_string(r.solution.status)
                              << "), using the FW action\n";
  }
  if (trace) {
    *trace << epoch_ << ',' << r.method << ',' << lp::to_string(r.solution.status) << ',' << r.solution.iterations
           << ',' << r.solution.degenerate_pivots << ',' << r.solution.nodes << ',' << r.solution.objective << ','
           << r.solution.bound << ',' << r.solution.gap << ',' << (r.fallback ? 1 : 0) << '\n';
  }
  ++epoch_;
  return r;
}

}  // namespace wildfire::fluid
