#pragma once

// Closed-loop episodes and paired-seed benchmarks.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "wildfire/policies.hpp"
#include "wildfire/scenario.hpp"
#include "wildfire/statistics.hpp"

namespace wildfire {

struct StepRecord {
  int step = 0;
  Action action;
  double reward = 0.0;
  int burning = 0;
};

struct EpisodeResult {
  std::string policy;
  std::uint64_t seed = 0;
  double reward = 0.0;
  int steps = 0;
  /// The step cap stopped the episode while cells still burned.
  bool capped = false;
  long fallbacks = 0;
  int initial_burning = 0;
  std::vector<StepRecord> trace;
};

// Independent streams per seed: the initial fire uses `seed` directly.
Rng dynamics_rng(std::uint64_t seed);
Rng policy_rng(std::uint64_t seed);

EpisodeResult run_episode(const FireModel& model, const FireState& initial, Policy& policy, std::uint64_t seed,
                          int step_cap, bool record_trace = false);

EpisodeResult run_episode(const Scenario& scenario, const std::string& policy, std::uint64_t seed,
                          bool record_trace = false, std::shared_ptr<const WeightMap> weights = nullptr);

struct PolicySummary {
  std::string policy;
  Summary reward;
  double mean_steps = 0.0;
  /// Percent improvement of the mean reward over the random baseline; NaN
  /// when random was not run.
  double improvement_pct = 0.0;
  /// Two-sided paired sign-test p-value against random; NaN without it.
  double sign_p = 0.0;
  int capped = 0;
  long fallbacks = 0;
};

struct BenchmarkResult {
  std::vector<std::string> policies;
  std::vector<std::uint64_t> seeds;
  /// Policy-major: episodes[p * seeds.size() + r].
  std::vector<EpisodeResult> episodes;
  std::vector<PolicySummary> summary;
  FireStats initial;

  const EpisodeResult& at(std::size_t policy, std::size_t rep) const { return episodes[policy * seeds.size() + rep]; }
  std::vector<double> rewards(std::size_t policy) const;
};

/// Replication r uses seed + r for every policy. Episodes run on `jobs`
/// threads and are stored by (policy, replication) index.
BenchmarkResult run_benchmark(const Scenario& scenario, const std::vector<std::string>& policies, int reps,
                              std::uint64_t seed, int jobs = 1);

void write_results_csv(std::ostream& out, const BenchmarkResult& r);
void write_summary_csv(std::ostream& out, const BenchmarkResult& r);
void write_trace_csv(std::ostream& out, const EpisodeResult& e);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace wildfire
