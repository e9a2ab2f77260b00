#pragma once

#include <vector>

#include "wildfire/grid_mdp.hpp"

namespace wildfire {

struct Summary {
  int n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Linear interpolation between order statistics (Hyndman-Fan type 7).
double quantile(std::vector<double> values, double p);
Summary summarize(const std::vector<double>& values);

/// Two-sided exact sign test on paired samples; ties are dropped.
double sign_test(const std::vector<double>& a, const std::vector<double>& b);

struct BranchingFactor {
  double exact;     // N^I / I!
  double stirling;  // (e N / I)^I / sqrt(2 pi I)
};

BranchingFactor branching_factor(double n_burning, int teams);

struct FireStats {
  int samples = 0;
  double mean_burning = 0.0;
  int max_burning = 0;
  /// Mean fuel over burning cells, pooled across samples.
  double mean_burning_fuel = 0.0;
  /// Mean fuel over cells that never ignited (not burning, fuel left).
  double mean_unburnt_fuel = 0.0;
  double mean_burnt_out = 0.0;
};

FireStats initial_fire_stats(const std::vector<FireState>& fires);

}  // namespace wildfire
