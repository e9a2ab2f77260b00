#include "wildfire/mcts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace wildfire {

namespace {

constexpr int kDuplicateRetries = 10;

inline std::size_t idx(Cell x) { return static_cast<std::size_t>(x); }

// Widening gate: a new member is admitted while |set| < k * n^alpha, and
// always when the set is empty.
bool may_widen(std::size_t members, double k, double n, double alpha) {
  if (members == 0) return true;
  return static_cast<double>(members) < k * std::pow(n, alpha);
}

}  // namespace

void MctsConfig::validate() const {
  if (!(exploration >= 0.0)) throw ConfigError("mcts.c: exploration bonus must be nonnegative");
  if (!(action_alpha > 0.0 && action_alpha <= 1.0)) throw ConfigError("mcts.alpha: must lie in (0,1]");
  if (!(state_alpha > 0.0 && state_alpha <= 1.0)) throw ConfigError("mcts.alpha_state: must lie in (0,1]");
  if (!(action_k > 0.0)) throw ConfigError("mcts.k: must be positive");
  if (!(state_k > 0.0)) throw ConfigError("mcts.k_state: must be positive");
  if (depth < 0) throw ConfigError("mcts.depth: must be nonnegative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("mcts.gamma: must lie in [0,1]");
  if (!(budget_seconds >= 0.0)) throw ConfigError("mcts.budget_seconds: must be nonnegative");
  if (budget_iterations < 0) throw ConfigError("mcts.budget_iterations: must be nonnegative");
  if (!(u_mutate >= 0.0 && u_mutate <= 1.0)) throw ConfigError("mcts.u_mutate: must lie in [0,1]");
  if (!(u_recombine >= 0.0 && u_recombine <= 1.0)) throw ConfigError("mcts.u_recombine: must lie in [0,1]");
  if (u_mutate + u_recombine > 1.0 + 1e-12) throw ConfigError("mcts.u_recombine: u_mutate + u_recombine must not exceed 1");
  if (prior_state_visits < 0.0 || prior_action_visits < 0.0 || prior_child_visits < 0.0) {
    throw ConfigError("mcts.priors: visit priors must be nonnegative");
  }
}

MctsConfig mcts_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("mcts: expected an object");
  static const std::unordered_set<std::string> known = {
      "c",           "k",           "alpha",          "k_state",       "alpha_state",
      "depth",       "gamma",       "budget_seconds", "budget_iterations", "u_mutate",
      "u_recombine", "rollout",     "use_genetic",    "reuse_tree",    "prior_state_visits",
      "prior_action_visits", "prior_action_value", "prior_child_visits"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ConfigError("mcts." + key + ": unknown field");
  }
  MctsConfig c;
  auto num = [&](const char* key, double& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) throw ConfigError(std::string("mcts.") + key + ": expected a number");
    out = doc[key].get<double>();
  };
  auto integer = [&](const char* key, auto& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) throw ConfigError(std::string("mcts.") + key + ": expected an integer");
    out = doc[key].get<std::remove_reference_t<decltype(out)>>();
  };
  auto flag = [&](const char* key, bool& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_boolean()) throw ConfigError(std::string("mcts.") + key + ": expected a boolean");
    out = doc[key].get<bool>();
  };
  num("c", c.exploration);
  num("k", c.action_k);
  num("alpha", c.action_alpha);
  num("k_state", c.state_k);
  num("alpha_state", c.state_alpha);
  integer("depth", c.depth);
  num("gamma", c.gamma);
  num("budget_seconds", c.budget_seconds);
  integer("budget_iterations", c.budget_iterations);
  num("u_mutate", c.u_mutate);
  num("u_recombine", c.u_recombine);
  flag("use_genetic", c.use_genetic);
  flag("reuse_tree", c.reuse_tree);
  num("prior_state_visits", c.prior_state_visits);
  num("prior_action_visits", c.prior_action_visits);
  num("prior_action_value", c.prior_action_value);
  num("prior_child_visits", c.prior_child_visits);
  if (doc.contains("rollout")) {
    if (!doc["rollout"].is_string()) throw ConfigError("mcts.rollout: expected \"fw\" or \"random\"");
    const auto r = doc["rollout"].get<std::string>();
    if (r == "fw") {
      c.rollout = RolloutKind::fw;
    } else if (r == "random") {
      c.rollout = RolloutKind::random;
    } else {
      throw ConfigError("mcts.rollout: expected \"fw\" or \"random\", got \"" + r + "\"");
    }
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const MctsConfig& c) {
  return {{"c", c.exploration},
          {"k", c.action_k},
          {"alpha", c.action_alpha},
          {"k_state", c.state_k},
          {"alpha_state", c.state_alpha},
          {"depth", c.depth},
          {"gamma", c.gamma},
          {"budget_seconds", c.budget_seconds},
          {"budget_iterations", c.budget_iterations},
          {"u_mutate", c.u_mutate},
          {"u_recombine", c.u_recombine},
          {"rollout", c.rollout == RolloutKind::fw ? "fw" : "random"},
          {"use_genetic", c.use_genetic},
          {"reuse_tree", c.reuse_tree},
          {"prior_state_visits", c.prior_state_visits},
          {"prior_action_visits", c.prior_action_visits},
          {"prior_action_value", c.prior_action_value},
          {"prior_child_visits", c.prior_child_visits}};
}

const SearchTree::Edge* SearchTree::Node::find(const Action& a) const {
  for (const Edge& e : edges) {
    if (e.action == a) return &e;
  }
  return nullptr;
}

SearchTree::Node* SearchTree::find(const FireState& s) {
  auto it = nodes_.find(s);
  return it == nodes_.end() ? nullptr : &it->second;
}

const SearchTree::Node* SearchTree::find(const FireState& s) const {
  auto it = nodes_.find(s);
  return it == nodes_.end() ? nullptr : &it->second;
}

SearchTree::Node& SearchTree::insert(const FireState& s, double prior_visits) {
  auto [it, fresh] = nodes_.try_emplace(s);
  if (fresh) it->second.visits = prior_visits;
  return it->second;
}

void SearchTree::retain_reachable(const FireState& root) {
  std::unordered_map<FireState, Node, FireStateHash> kept;
  std::vector<FireState> frontier{root};
  while (!frontier.empty()) {
    FireState s = std::move(frontier.back());
    frontier.pop_back();
    if (kept.count(s)) continue;
    auto it = nodes_.find(s);
    if (it == nodes_.end()) continue;
    for (const Edge& e : it->second.edges) {
      for (const Child& c : e.children) frontier.push_back(c.state);
    }
    kept.emplace(std::move(s), std::move(it->second));
  }
  nodes_ = std::move(kept);
}

Action canonical(Action a) {
  std::sort(a.teams.begin(), a.teams.end());
  return a;
}

Action mutate(const Action& a, const FireState& state, Rng& rng) {
  const int n = a.size();
  if (n == 0) return a;
  const std::vector<Cell> burning = state.burning_cells();
  std::bernoulli_distribution coin(1.0 / n);
  std::vector<char> change(static_cast<std::size_t>(n), 0);
  bool any = false;
  while (!any) {
    for (auto& c : change) {
      c = coin(rng) ? 1 : 0;
      any = any || c;
    }
  }
  Action out = a;
  std::vector<Cell> alternatives;
  for (int i = 0; i < n; ++i) {
    if (!change[static_cast<std::size_t>(i)]) continue;
    const Cell current = a.teams[static_cast<std::size_t>(i)];
    alternatives.clear();
    for (Cell x : burning) {
      if (x != current) alternatives.push_back(x);
    }
    if (alternatives.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, alternatives.size() - 1);
    out.teams[static_cast<std::size_t>(i)] = alternatives[pick(rng)];
  }
  return out;
}

Action recombine(const Action& a1, const Action& a2, Rng& rng) {
  if (a1.size() != a2.size()) throw std::invalid_argument("recombine: actions differ in length");
  std::bernoulli_distribution coin(0.5);
  Action out = a1;
  for (std::size_t i = 0; i < out.teams.size(); ++i) {
    if (coin(rng)) out.teams[i] = a2.teams[i];
  }
  return out;
}

const Action& tournament_select(const SearchTree::Node& node, Rng& rng) {
  if (node.edges.empty()) throw std::invalid_argument("tournament_select: no tried actions");
  std::uniform_int_distribution<std::size_t> pick(0, node.edges.size() - 1);
  const SearchTree::Edge& first = node.edges[pick(rng)];
  const SearchTree::Edge& second = node.edges[pick(rng)];
  return second.value > first.value ? second.action : first.action;
}

double rollout(const FireState& s, int depth, const PolicyFn& policy, const FireModel& model, double gamma, Rng& rng) {
  double total = 0.0;
  double discount = 1.0;
  FireState cur = s;
  for (int t = 0; t < depth; ++t) {
    if (is_terminal(cur)) break;
    const Action a = policy(cur, rng);
    StepResult r = model.step(cur, a, rng);
    total += discount * r.reward;
    discount *= gamma;
    cur = std::move(r.next);
  }
  return total;
}

Mcts::Mcts(const FireModel& model, MctsConfig config, std::shared_ptr<const WeightMap> weights)
    : model_(model), config_(config), weights_(std::move(weights)) {
  config_.validate();
  if (config_.rollout == RolloutKind::fw && !weights_) {
    weights_ = std::make_shared<const WeightMap>(
        fw_weights(all_pairs_distances(model_.grid(), model_.spread()), model_.rewards()));
  }
}

Action Mcts::default_action(const FireState& s, Rng& rng) const {
  if (config_.rollout == RolloutKind::fw) return fw_sample_policy(s, *weights_, model_.teams(), rng);
  return random_policy(s, model_.teams(), rng);
}

double Mcts::rollout_from(const FireState& s, int depth, Rng& rng) const {
  const PolicyFn pi0 = [this](const FireState& st, Rng& r) { return default_action(st, r); };
  return rollout(s, depth, pi0, model_, config_.gamma, rng);
}

Action Mcts::generate(const SearchTree::Node* node, const FireState& s, Rng& rng, Source* source) {
  auto from = [&](Source src) {
    if (source) *source = src;
  };
  const std::size_t tried = node ? node->edges.size() : 0;
  if (config_.use_genetic && tried > 0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    if (u < config_.u_mutate) {
      from(Source::mutate);
      return canonical(mutate(tournament_select(*node, rng), s, rng));
    }
    if (u < config_.u_mutate + config_.u_recombine && tried >= 2) {
      const Action& a1 = tournament_select(*node, rng);
      const Action& a2 = tournament_select(*node, rng);
      from(Source::recombine);
      return canonical(recombine(a1, a2, rng));
    }
  }
  from(Source::rollout_policy);
  return canonical(default_action(s, rng));
}

Action Mcts::getnext(const FireState& s, Rng& rng) {
  const SearchTree::Node* node = tree_.find(s);
  Action a = generate(node, s, rng);
  for (int retry = 0; retry < kDuplicateRetries && node && node->find(a); ++retry) a = generate(node, s, rng);
  return a;
}

double Mcts::simulate(const FireState& s, int depth, Rng& rng) {
  if (depth == 0) return 0.0;
  if (is_terminal(s)) return 0.0;
  SearchTree::Node* node = tree_.find(s);
  if (!node) {
    tree_.insert(s, config_.prior_state_visits);
    return rollout_from(s, depth, rng);
  }

  node->visits += 1.0;
  if (may_widen(node->edges.size(), config_.action_k, node->visits, config_.action_alpha)) {
    Action a = getnext(s, rng);
    if (!node->find(a)) {
      node->edges.push_back({std::move(a), config_.prior_action_visits, config_.prior_action_value, {}});
    }
  }

  // UCB selection; an action with N(s,a) = 0 takes precedence.
  std::size_t chosen = 0;
  double best = -std::numeric_limits<double>::infinity();
  const double log_n = std::log(node->visits);
  for (std::size_t i = 0; i < node->edges.size(); ++i) {
    const SearchTree::Edge& e = node->edges[i];
    if (e.visits <= 0.0) {
      chosen = i;
      break;
    }
    const double score = e.value + config_.exploration * std::sqrt(log_n / e.visits);
    if (score > best) {
      best = score;
      chosen = i;
    }
  }

  FireState next;
  double reward = 0.0;
  {
    SearchTree::Edge& e = node->edges[chosen];
    if (may_widen(e.children.size(), config_.state_k, e.visits, config_.state_alpha)) {
      StepResult r = model_.step(s, e.action, rng);
      const std::size_t h = FireStateHash{}(r.next);
      auto it = std::find_if(e.children.begin(), e.children.end(),
                             [&](const SearchTree::Child& c) { return c.hash == h && c.state == r.next; });
      if (it == e.children.end()) {
        e.children.push_back({r.next, h, r.reward, config_.prior_child_visits});
      } else {
        it->visits += 1.0;
      }
      next = std::move(r.next);
      reward = r.reward;
    } else {
      double total = 0.0;
      for (const auto& c : e.children) total += c.visits;
      std::size_t pick = 0;
      if (total > 0.0) {
        std::uniform_real_distribution<double> unif(0.0, total);
        double u = unif(rng);
        for (; pick + 1 < e.children.size(); ++pick) {
          if (u < e.children[pick].visits) break;
          u -= e.children[pick].visits;
        }
      } else {
        std::uniform_int_distribution<std::size_t> any(0, e.children.size() - 1);
        pick = any(rng);
      }
      SearchTree::Child& c = e.children[pick];
      c.visits += 1.0;
      next = c.state;
      reward = c.reward;
    }
  }

  const double q = reward + config_.gamma * simulate(next, depth - 1, rng);
  // `node` stays valid (unordered_map references are stable); the edge is
  // re-indexed in case the recursion grew this node's edge list.
  SearchTree::Edge& e = node->edges[chosen];
  e.visits += 1.0;
  e.value += (q - e.value) / e.visits;
  return q;
}

PlanResult Mcts::plan(const FireState& root, Rng& rng, std::ostream* trace) {
  PlanResult out;
  if (is_terminal(root)) {
    out.action = Action::idle(model_.teams());
    return out;
  }
  if (config_.reuse_tree) {
    tree_.retain_reachable(root);
  } else {
    tree_.clear();
  }
  if (trace) *trace << "iteration,root_visits,root_actions,best_q\n";

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const bool by_count = config_.budget_iterations > 0;
  auto more = [&]() {
    if (by_count) return out.iterations < config_.budget_iterations;
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
    return elapsed < config_.budget_seconds;
  };
  while (more()) {
    simulate(root, config_.depth, rng);
    ++out.iterations;
    if (trace) {
      const SearchTree::Node* n = tree_.find(root);
      double best_q = -std::numeric_limits<double>::infinity();
      for (const auto& e : n->edges) {
        if (e.visits > 0.0) best_q = std::max(best_q, e.value);
      }
      *trace << out.iterations << ',' << n->visits << ',' << n->edges.size() << ',' << best_q << '\n';
    }
  }

  const SearchTree::Node* n = tree_.find(root);
  const SearchTree::Edge* best = nullptr;
  if (n) {
    for (const auto& e : n->edges) {
      if (e.visits <= 0.0) continue;
      if (!best || e.value > best->value) best = &e;
    }
  }
  if (!best) {
    out.action = default_action(root, rng);
    out.fallback = true;
    return out;
  }
  out.action = best->action;
  out.value = best->value;
  return out;
}

}  // namespace wildfire
