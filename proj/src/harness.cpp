#include "wildfire/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

namespace wildfire {

Rng dynamics_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
  return Rng(seq);
}

Rng policy_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 2u};
  return Rng(seq);
}

EpisodeResult run_episode(const FireModel& model, const FireState& initial, Policy& policy, std::uint64_t seed,
                          int step_cap, bool record_trace) {
  EpisodeResult out;
  out.policy = policy.name();
  out.seed = seed;
  out.initial_burning = initial.burning_count();
  Rng dyn = dynamics_rng(seed);
  Rng pol = policy_rng(seed);
  FireState s = initial;
  while (!is_terminal(s) && out.steps < step_cap) {
    const Action a = policy.act(s, pol);
    model.validate(a);
    StepResult r = model.step(s, a, dyn);
    out.reward += r.reward;
    ++out.steps;
    if (record_trace) out.trace.push_back({out.steps, a, r.reward, s.burning_count()});
    s = std::move(r.next);
  }
  out.capped = !is_terminal(s);
  out.fallbacks = policy.fallbacks();
  return out;
}

EpisodeResult run_episode(const Scenario& scenario, const std::string& policy, std::uint64_t seed, bool record_trace,
                          std::shared_ptr<const WeightMap> weights) {
  const FireModel model = scenario.model();
  auto p = make_policy(policy, model, scenario.mcts, scenario.mo, std::move(weights));
  return run_episode(model, scenario.initial_state(seed), *p, seed, scenario.step_cap(), record_trace);
}

std::vector<double> BenchmarkResult::rewards(std::size_t policy) const {
  std::vector<double> v;
  for (std::size_t r = 0; r < seeds.size(); ++r) v.push_back(at(policy, r).reward);
  return v;
}

BenchmarkResult run_benchmark(const Scenario& scenario, const std::vector<std::string>& policies, int reps,
                              std::uint64_t seed, int jobs) {
  if (reps < 1) throw ConfigError("reps: must be at least 1");
  if (policies.empty()) throw ConfigError("policies: need at least one policy");
  for (const auto& p : policies) {
    bool known = false;
    for (const auto& n : policy_names()) known = known || n == p;
    if (!known) throw ConfigError("policies: unknown policy \"" + p + "\"");
  }
  BenchmarkResult out;
  out.policies = policies;
  for (int r = 0; r < reps; ++r) out.seeds.push_back(seed + static_cast<std::uint64_t>(r));

  const FireModel model = scenario.model();
  const auto weights = model_weights(model);
  std::vector<FireState> fires;
  for (auto s : out.seeds) fires.push_back(scenario.initial_state(s));
  out.initial = initial_fire_stats(fires);

  const std::size_t total = policies.size() * out.seeds.size();
  out.episodes.resize(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed) {
      const std::size_t task = next++;
      if (task >= total) return;
      const std::size_t p = task / out.seeds.size();
      const std::size_t r = task % out.seeds.size();
      try {
        auto policy = make_policy(policies[p], model, scenario.mcts, scenario.mo, weights);
        out.episodes[task] = run_episode(model, fires[r], *policy, out.seeds[r], scenario.step_cap());
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t random_index = policies.size();
  for (std::size_t p = 0; p < policies.size(); ++p) {
    if (policies[p] == "random") random_index = p;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t p = 0; p < policies.size(); ++p) {
    PolicySummary s;
    s.policy = policies[p];
    const auto v = out.rewards(p);
    s.reward = summarize(v);
    double steps = 0.0;
    for (std::size_t r = 0; r < out.seeds.size(); ++r) {
      steps += out.at(p, r).steps;
      s.capped += out.at(p, r).capped;
      s.fallbacks += out.at(p, r).fallbacks;
    }
    s.mean_steps = steps / static_cast<double>(out.seeds.size());
    if (random_index < policies.size()) {
      const Summary base = summarize(out.rewards(random_index));
      s.improvement_pct = base.mean == 0.0 ? 0.0 : 100.0 * (s.reward.mean - base.mean) / std::abs(base.mean);
      s.sign_p = sign_test(v, out.rewards(random_index));
    } else {
      s.improvement_pct = nan;
      s.sign_p = nan;
    }
    out.summary.push_back(s);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& out, const BenchmarkResult& r) {
  out << "# wildfire-results v1\n";
  out << "policy,seed,reward,steps,capped,fallbacks,initial_burning\n";
  for (const auto& e : r.episodes) {
    out << e.policy << ',' << e.seed << ',' << format_double(e.reward) << ',' << e.steps << ',' << (e.capped ? 1 : 0)
        << ',' << e.fallbacks << ',' << e.initial_burning << '\n';
  }
}

void write_summary_csv(std::ostream& out, const BenchmarkResult& r) {
  out << "# wildfire-summary v1\n";
  out << "policy,n,mean,median,q1,q3,min,max,mean_steps,improvement_pct,sign_p,capped,fallbacks\n";
  for (const auto& s : r.summary) {
    out << s.policy << ',' << s.reward.n << ',' << format_double(s.reward.mean) << ','
        << format_double(s.reward.median) << ',' << format_double(s.reward.q1) << ',' << format_double(s.reward.q3)
        << ',' << format_double(s.reward.min) << ',' << format_double(s.reward.max) << ','
        << format_double(s.mean_steps) << ',' << format_double(s.improvement_pct) << ',' << format_double(s.sign_p)
        << ',' << s.capped << ',' << s.fallbacks << '\n';
  }
}

void write_trace_csv(std::ostream& out, const EpisodeResult& e) {
  out << "# wildfire-trace v1\n";
  out << "step,burning,reward,action\n";
  for (const auto& s : e.trace) {
    out << s.step << ',' << s.burning << ',' << format_double(s.reward) << ',';
    for (std::size_t i = 0; i < s.action.teams.size(); ++i) out << (i ? " " : "") << s.action.teams[i];
    out << '\n';
  }
}

}  // namespace wildfire
