#pragma once

// Scenario documents: a grid family (grid1, grid2) whose initial fires are
// generated per seed, or a custom grid with an explicit initial state.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "wildfire/grid_mdp.hpp"
#include "wildfire/mcts.hpp"
#include "wildfire/mo.hpp"

namespace wildfire {

enum class Family { grid1, grid2, custom };

std::string to_string(Family f);

struct EdgeOverride {
  Cell to;    // x
  Cell from;  // y
  double p;   // P(x, y)
};

struct Scenario {
  Family family = Family::grid1;
  int k = 8;
  Neighborhood neighborhood = Neighborhood::four;
  double p_default = 0.06;
  double q_default = 0.8;
  double lambda = 0.0;  // grid2 only
  int teams = 4;
  std::vector<double> rewards;            // custom only
  std::optional<FireState> initial;       // custom only
  std::vector<EdgeOverride> p_edges;
  MctsConfig mcts;
  fluid::MoConfig mo;

  GridSpec grid() const;
  SpreadModel spread() const;
  RewardModel reward_model() const;
  FireModel model() const;

  /// Uncontrolled propagation steps used by the family generator.
  int generation_steps() const;
  /// Episodes stop after this many steps even if the fire still burns.
  int step_cap() const;
  /// Generated fire for the families, the stored state for custom grids.
  FireState initial_state(std::uint64_t seed) const;
};

/// Throws ConfigError naming the offending field.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);
nlohmann::json to_json(const Scenario& s);

/// R at 1-based (i, j) from the lower-left is -(1 + (i-1) + (j-1)); the
/// upper-right corner is -10.
RewardModel grid1_rewards(int k);
/// R(i, j) = -C exp(-lambda i) with C chosen so that each row sums to -1.
RewardModel grid2_rewards(int k, double lambda);

/// floor(k / (divisor * p)), guarded against representation error.
int initial_fuel_level(int k, double p, double divisor);
/// floor(fuel * k^-0.25), same guard.
int scale_fuel(int fuel, int k);

/// Full fuel everywhere, ignite `origin`, run `steps` steps with no teams,
/// then scale every fuel level by k^-0.25.
FireState generate_fire(const FireModel& model, int k, int fuel, Cell origin, int steps, Rng& rng);

FireState gen_grid1_initial(int k, const SpreadModel& spread, double p, Rng& rng);
FireState gen_grid2_initial(int k, const SpreadModel& spread, double p, Rng& rng);

}  // namespace wildfire
