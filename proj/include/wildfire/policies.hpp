#pragma once

// Uniform interface over the four suppression policies used in experiments.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "wildfire/heuristics.hpp"
#include "wildfire/mcts.hpp"
#include "wildfire/mo.hpp"

namespace wildfire {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const FireState& state, Rng& rng) = 0;
  virtual const char* name() const = 0;
  /// Planner log destination (CSV); policies without a planner ignore it.
  virtual void set_trace(std::ostream*) {}
  /// Decisions that used a fallback action instead of a planned one.
  long fallbacks() const { return fallbacks_; }

 protected:
  long fallbacks_ = 0;
};

/// Known names: random, fw, mcts, mo.
const std::vector<std::string>& policy_names();

/// `weights` may be shared between policies built on the same model; it is
/// computed when null.
std::unique_ptr<Policy> make_policy(const std::string& name, const FireModel& model, const MctsConfig& mcts,
                                    const fluid::MoConfig& mo, std::shared_ptr<const WeightMap> weights = nullptr);

std::shared_ptr<const WeightMap> model_weights(const FireModel& model);

}  // namespace wildfire
