#pragma once

// Baseline suppression policies: the uniform random straw man and the
// Floyd-Warshall weighted heuristic, which ranks cells by the sum of nearby
// rewards divided by spread distance.

#include <limits>
#include <vector>

#include "wildfire/grid_mdp.hpp"

namespace wildfire {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Dense all-pairs shortest path table. The edge x -> y has length P(x, y).
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(int n) : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kUnreachable) {}

  int size() const { return n_; }
  double operator()(Cell x, Cell y) const { return d_[at(x, y)]; }
  double& operator()(Cell x, Cell y) { return d_[at(x, y)]; }

 private:
  std::size_t at(Cell x, Cell y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(y);
  }
  int n_ = 0;
  std::vector<double> d_;
};

struct WeightMap {
  std::vector<double> weight;    // W(x) = sum_{y != x} R(y) / D(x, y)
  std::vector<double> priority;  // -W(x); larger means suppress first
  /// Cells sorted by decreasing priority, ties by lowest index.
  std::vector<Cell> order;
  /// Competition rank of every cell in `order` (tied priorities share a rank).
  std::vector<int> rank;
};

DistanceTable all_pairs_distances(const GridSpec& grid, const SpreadModel& spread);

WeightMap fw_weights(const DistanceTable& distances, const RewardModel& rewards);

/// Deterministic FW heuristic: highest-priority burning cells first, one team
/// per cell, wrapping around when teams outnumber burning cells.
Action fw_policy(const FireState& state, const WeightMap& weights, int teams);

/// Sampled FW heuristic: burning cells drawn with probability proportional to
/// 1 / rank among the burning cells, without replacement until exhausted.
Action fw_sample_policy(const FireState& state, const WeightMap& weights, int teams, Rng& rng);

/// Uniform choice of burning cells without replacement; surplus teams are
/// placed uniformly with replacement.
Action random_policy(const FireState& state, int teams, Rng& rng);

}  // namespace wildfire
