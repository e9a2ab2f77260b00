#pragma once

// Receding-horizon controller built on the fluid model: calibrate from the
// current state, solve with relaxed assignments, and place teams on the
// cells with the largest first-period assignment mass v(x).

#include <iosfwd>
#include <memory>
#include <string>

#include <json.hpp>

#include "wildfire/fluid.hpp"
#include "wildfire/heuristics.hpp"

namespace wildfire::fluid {

struct MoConfig {
  int horizon = 10;
  double delta = 0.1;
  double time_limit = 60.0;  // seconds per decision epoch
  /// Keep z binary (branch and bound) when the model has at most this many
  /// z columns; otherwise z is relaxed, rounded and fixed.
  int exact_z_limit = 64;
  Objective objective = Objective::importance;
  lp::SimplexOptions simplex;

  void validate() const;
};

MoConfig mo_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const MoConfig& c);

struct ScoreResult {
  Action action;
  std::vector<double> v;  // per cell
  /// Set when the relaxation failed and the FW heuristic (or idle, without
  /// weights) was used instead.
  bool fallback = false;
  /// "exact", "rounded", "relaxed" or "fallback".
  std::string method;
  lp::LpSolution solution;
};

/// Top-|I| rule over burning cells that still have fuel (all burning cells if
/// none do); surplus teams stack on the top cell.
Action score_action(const std::vector<double>& v, const FireState& state, int teams);

ScoreResult relax_and_score(const FluidModel& model, const FireState& state, const MoConfig& config,
                            const WeightMap* fallback_weights = nullptr);

class MoPolicy {
 public:
  MoPolicy(const FireModel& model, MoConfig config, std::shared_ptr<const WeightMap> weights = nullptr);

  /// One decision epoch. `trace`, when given, receives one CSV row.
  ScoreResult plan(const FireState& state, std::ostream* trace = nullptr);

  static const char* trace_header();

 private:
  const FireModel& model_;
  MoConfig config_;
  std::shared_ptr<const WeightMap> weights_;
  long epoch_ = 0;
};

}  // namespace wildfire::fluid
