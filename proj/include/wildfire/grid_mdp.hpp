#pragma once

// Tactical wildfire MDP: grid cells carry a burning flag and an integer fuel
// level; suppression teams are assigned to cells each step. The transition
// law is synchronous and every stochastic call takes an explicit engine.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wildfire {

using Rng = std::mt19937_64;
using Cell = int;

/// Team target used when no cell is burning.
inline constexpr Cell kIdle = -1;

enum class Neighborhood { four, eight };

std::string to_string(Neighborhood n);
Neighborhood neighborhood_from_string(const std::string& s);

/// Rectangular grid. Cells are indexed row-major with row 0 on the lower
/// edge, so cell (col, row) = row * width + col and cell 0 is lower-left.
struct GridSpec {
  int width = 1;
  int height = 1;
  Neighborhood neighborhood = Neighborhood::four;

  GridSpec() = default;
  explicit GridSpec(int k, Neighborhood n = Neighborhood::four);
  GridSpec(int w, int h, Neighborhood n);

  int cells() const { return width * height; }
  bool contains(Cell x) const { return x >= 0 && x < cells(); }
  Cell index(int col, int row) const { return row * width + col; }
  int col(Cell x) const { return x % width; }
  int row(Cell x) const { return x / width; }
  bool adjacent(Cell x, Cell y) const;
  std::vector<Cell> neighbors(Cell x) const;
};

/// Ignition probabilities P(x, y) (fire in y ignites x) stored as incoming
/// edges per cell, plus per-cell suppression success Q(x).
class SpreadModel {
 public:
  struct Source {
    Cell from;
    double p;
  };

  SpreadModel() = default;
  /// P(x, y) = p for every grid neighbor y of x, Q(x) = q everywhere.
  static SpreadModel uniform(const GridSpec& grid, double p, double q);

  int cells() const { return static_cast<int>(q_.size()); }

  /// Sets P(x, y). y must be a grid neighbor of x; p = 0 removes the edge.
  void set_ignition(Cell x, Cell y, double p);
  double ignition(Cell x, Cell y) const;
  /// Cells y with P(x, y) > 0, i.e. N(x).
  std::span<const Source> sources(Cell x) const { return incoming_[static_cast<std::size_t>(x)]; }

  void set_suppression(Cell x, double q);
  double suppression(Cell x) const { return q_[static_cast<std::size_t>(x)]; }

 private:
  GridSpec grid_;
  std::vector<std::vector<Source>> incoming_;
  std::vector<double> q_;
};

/// Per-cell reward charged every step the cell burns. Always nonpositive.
struct RewardModel {
  std::vector<double> r;

  RewardModel() = default;
  explicit RewardModel(std::vector<double> values);
  double operator[](Cell x) const { return r[static_cast<std::size_t>(x)]; }
  int cells() const { return static_cast<int>(r.size()); }
};

struct FireState {
  std::vector<std::uint8_t> burning;
  std::vector<int> fuel;

  FireState() = default;
  explicit FireState(int cells) : burning(static_cast<std::size_t>(cells), 0), fuel(static_cast<std::size_t>(cells), 0) {}

  int cells() const { return static_cast<int>(fuel.size()); }
  bool is_burning(Cell x) const { return burning[static_cast<std::size_t>(x)] != 0; }
  int burning_count() const;
  std::vector<Cell> burning_cells() const;

  bool operator==(const FireState&) const = default;
};

struct FireStateHash {
  std::size_t operator()(const FireState& s) const noexcept;
};

/// One target cell per suppression team (or kIdle).
struct Action {
  std::vector<Cell> teams;

  Action() = default;
  explicit Action(std::vector<Cell> t) : teams(std::move(t)) {}
  static Action idle(int team_count) { return Action(std::vector<Cell>(static_cast<std::size_t>(team_count), kIdle)); }

  int size() const { return static_cast<int>(teams.size()); }
  bool is_idle() const;
  int teams_on(Cell x) const;

  auto operator<=>(const Action&) const = default;
};

struct ActionHash {
  std::size_t operator()(const Action& a) const noexcept;
};

/// rho_1: probability that a currently non-burning cell x ignites.
double ignition_prob(const FireState& state, const SpreadModel& spread, Cell x);

/// rho_2: probability that a currently burning cell x stops burning.
double extinguish_prob(const FireState& state, const SpreadModel& spread, const Action& action, Cell x);

/// True when no cell burns.
bool is_terminal(const FireState& state);

struct StepResult {
  FireState next;
  double reward = 0.0;
};

struct Transition {
  FireState next;
  double probability = 0.0;
  double reward = 0.0;
};

/// Malformed scenario or snapshot document; what() names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EnumerationTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The generative model G: grid, spread, rewards and team count.
class FireModel {
 public:
  FireModel() = default;
  FireModel(GridSpec grid, SpreadModel spread, RewardModel rewards, int teams);

  const GridSpec& grid() const { return grid_; }
  const SpreadModel& spread() const { return spread_; }
  const RewardModel& rewards() const { return rewards_; }
  int teams() const { return teams_; }
  int cells() const { return grid_.cells(); }

  /// Sum of R(x) over the burning cells of `state`.
  double reward(const FireState& state) const;

  /// Samples (s', r) ~ G(s, a). The reward is charged on the pre-transition
  /// burning set.
  StepResult step(const FireState& state, const Action& action, Rng& rng) const;

  /// Exact joint outcome distribution. Throws EnumerationTooLarge when more
  /// than `max_stochastic_cells` cells have 0 < rho < 1.
  std::vector<Transition> enumerate_transitions(const FireState& state, const Action& action,
                                                int max_stochastic_cells = 20) const;

  void validate(const FireState& state) const;
  void validate(const Action& action) const;

 private:
  double flip_prob(const FireState& state, const Action& action, Cell x) const;

  GridSpec grid_;
  SpreadModel spread_;
  RewardModel rewards_;
  int teams_ = 0;
};

// State snapshots share the scenario document layout: dense row-major
// `fuel` and `burning` arrays.
nlohmann::json state_to_json(const FireState& state);
FireState state_from_json(const nlohmann::json& doc, int cells);

}  // namespace wildfire
