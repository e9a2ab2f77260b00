#pragma once

// Monte Carlo tree search with double progressive widening over the fire
// MDP, with genetic-style action generation (mutate / recombine members of
// the tried-action set chosen by tournament).

#include <functional>
#include <iosfwd>
#include <memory>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "wildfire/grid_mdp.hpp"
#include "wildfire/heuristics.hpp"

namespace wildfire {

enum class RolloutKind { random, fw };

struct MctsConfig {
  double exploration = 50.0;   // c
  double action_k = 40.0;      // k
  double action_alpha = 0.5;   // alpha
  double state_k = 40.0;       // k'
  double state_alpha = 0.2;    // alpha'
  int depth = 10;              // search and rollout horizon d
  double gamma = 1.0;
  double budget_seconds = 60.0;
  /// When positive, the search runs exactly this many iterations and the
  /// wall-clock budget is ignored.
  long budget_iterations = 0;
  double u_mutate = 0.3;
  double u_recombine = 0.3;
  RolloutKind rollout = RolloutKind::fw;
  bool use_genetic = true;
  bool reuse_tree = false;
  double prior_state_visits = 0.0;   // N0(s)
  double prior_action_visits = 0.0;  // N0(s,a)
  double prior_action_value = 0.0;   // Q0(s,a)
  double prior_child_visits = 1.0;   // N0(s,a,s')

  void validate() const;
};

MctsConfig mcts_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const MctsConfig& c);

class SearchTree {
 public:
  struct Child {
    FireState state;
    std::size_t hash = 0;
    double reward = 0.0;
    double visits = 0.0;
  };
  struct Edge {
    Action action;
    double visits = 0.0;
    double value = 0.0;
    std::vector<Child> children;
  };
  struct Node {
    double visits = 0.0;
    std::vector<Edge> edges;

    const Edge* find(const Action& a) const;
  };

  Node* find(const FireState& s);
  const Node* find(const FireState& s) const;
  Node& insert(const FireState& s, double prior_visits);
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }
  /// Drops every node that cannot be reached from `root` through stored
  /// children.
  void retain_reachable(const FireState& root);

 private:
  std::unordered_map<FireState, Node, FireStateHash> nodes_;
};

using PolicyFn = std::function<Action(const FireState&, Rng&)>;

struct PlanResult {
  Action action;
  /// Set when no search statistics were available (zero budget) and the
  /// rollout policy's action was returned instead.
  bool fallback = false;
  long iterations = 0;
  double value = 0.0;
};

/// Each team's cell is resampled with probability 1/|I| (conditioned on at
/// least one team changing) to a different burning cell.
Action mutate(const Action& a, const FireState& state, Rng& rng);

/// Uniform crossover.
Action recombine(const Action& a1, const Action& a2, Rng& rng);

/// Binary tournament over the tried actions of `node`: two uniform draws with
/// replacement, higher Q wins, first draw wins ties.
const Action& tournament_select(const SearchTree::Node& node, Rng& rng);

/// Discounted return of following `policy` for `depth` steps.
double rollout(const FireState& s, int depth, const PolicyFn& policy, const FireModel& model, double gamma, Rng& rng);

class Mcts {
 public:
  Mcts(const FireModel& model, MctsConfig config, std::shared_ptr<const WeightMap> weights = nullptr);

  /// Runs simulations from `root` until the budget is spent and returns the
  /// tried action with the highest Q. `trace`, when given, receives one CSV
  /// row per iteration.
  PlanResult plan(const FireState& root, Rng& rng, std::ostream* trace = nullptr);

  double simulate(const FireState& s, int depth, Rng& rng);
  Action getnext(const FireState& s, Rng& rng);

  enum class Source { mutate, recombine, rollout_policy };
  /// One draw of the action generator without the duplicate check.
  Action generate(const SearchTree::Node* node, const FireState& s, Rng& rng, Source* source = nullptr);

  Action default_action(const FireState& s, Rng& rng) const;

  const MctsConfig& config() const { return config_; }
  SearchTree& tree() { return tree_; }
  const SearchTree& tree() const { return tree_; }

 private:
  double rollout_from(const FireState& s, int depth, Rng& rng) const;

  const FireModel& model_;
  MctsConfig config_;
  std::shared_ptr<const WeightMap> weights_;
  SearchTree tree_;
};

/// Teams are interchangeable, so actions are stored with sorted targets.
Action canonical(Action a);

}  // namespace wildfire
