#include "wildfire/policies.hpp"

#include <ostream>

namespace wildfire {

namespace {

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(int teams) : teams_(teams) {}
  Action act(const FireState& s, Rng& rng) override { return random_policy(s, teams_, rng); }
  const char* name() const override { return "random"; }

 private:
  int teams_;
};

class FwPolicy final : public Policy {
 public:
  FwPolicy(int teams, std::shared_ptr<const WeightMap> w) : teams_(teams), weights_(std::move(w)) {}
  Action act(const FireState& s, Rng&) override { return fw_policy(s, *weights_, teams_); }
  const char* name() const override { return "fw"; }

 private:
  int teams_;
  std::shared_ptr<const WeightMap> weights_;
};

class MctsPolicy final : public Policy {
 public:
  MctsPolicy(const FireModel& m, const MctsConfig& c, std::shared_ptr<const WeightMap> w) : mcts_(m, c, std::move(w)) {}
  Action act(const FireState& s, Rng& rng) override {
    if (trace_) *trace_ << "# epoch " << epoch_++ << '\n';
    PlanResult r = mcts_.plan(s, rng, trace_);
    if (r.fallback) ++fallbacks_;
    return r.action;
  }
  const char* name() const override { return "mcts"; }
  void set_trace(std::ostream* t) override { trace_ = t; }

 private:
  Mcts mcts_;
  std::ostream* trace_ = nullptr;
  long epoch_ = 0;
};

class MoPolicyAdapter final : public Policy {
 public:
  MoPolicyAdapter(const FireModel& m, const fluid::MoConfig& c, std::shared_ptr<const WeightMap> w)
      : mo_(m, c, std::move(w)) {}
  Action act(const FireState& s, Rng&) override {
    fluid::ScoreResult r = mo_.plan(s, trace_);
    if (r.fallback) ++fallbacks_;
    return r.action;
  }
  const char* name() const override { return "mo"; }
  void set_trace(std::ostream* t) override {
    trace_ = t;
    if (trace_) *trace_ << fluid::MoPolicy::trace_header() << '\n';
  }

 private:
  fluid::MoPolicy mo_;
  std::ostream* trace_ = nullptr;
};

}  // namespace

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names = {"random", "fw", "mcts", "mo"};
  return names;
}

std::shared_ptr<const WeightMap> model_weights(const FireModel& model) {
  return std::make_shared<WeightMap>(fw_weights(all_pairs_distances(model.grid(), model.spread()), model.rewards()));
}

std::unique_ptr<Policy> make_policy(const std::string& name, const FireModel& model, const MctsConfig& mcts,
                                    const fluid::MoConfig& mo, std::shared_ptr<const WeightMap> weights) {
  if (name == "random") return std::make_unique<RandomPolicy>(model.teams());
  if (!weights) weights = model_weights(model);
  if (name == "fw") return std::make_unique<FwPolicy>(model.teams(), weights);
  if (name == "mcts") return std::make_unique<MctsPolicy>(model, mcts, weights);
  if (name == "mo") return std::make_unique<MoPolicyAdapter>(model, mo, weights);
  throw ConfigError("policies: unknown policy \"" + name + "\"");
}

}  // namespace wildfire
