// Acceptance gate: runs each criterion and prints one PASS/FAIL line per
// criterion. Exit status is nonzero when any criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include "oracles/fluid_oracles.hpp"
#include "oracles/lp_oracles.hpp"
#include "oracles/mdp_oracles.hpp"
#include "oracles/random_lp.hpp"
#include "wildfire/fluid.hpp"
#include "wildfire/harness.hpp"
#include "wildfire/mcts.hpp"

using namespace wildfire;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

// Upper tail P(X >= k) for X ~ Binomial(n, p).
double binomial_upper_tail(long n, double p, long k) {
  if (k <= 0) return 1.0;
  double tail = 0.0;
  for (long i = k; i <= n; ++i) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                            static_cast<double>(i) * std::log(p) + static_cast<double>(n - i) * std::log1p(-p);
    const double term = std::exp(log_term);
    tail += term;
    if (term < tail * 1e-17 && i > n * p) break;
  }
  return std::min(1.0, tail);
}

// ---------------------------------------------------------------------------
// 1. Sampled steps against the enumerated law.

using Key = std::pair<std::vector<std::uint8_t>, std::vector<int>>;

Key key(const FireState& s) { return {s.burning, s.fuel}; }

Verdict transition_law() {
  const GridSpec g(2);
  SpreadModel spread = SpreadModel::uniform(g, 0.3, 0.6);
  // Distinct probabilities on every directed edge and cell.
  for (Cell x = 0; x < 4; ++x) {
    spread.set_suppression(x, 0.5 + 0.1 * x);
    for (Cell y : g.neighbors(x)) spread.set_ignition(x, y, 0.1 + 0.1 * ((3 * x + y) % 5));
  }
  const RewardModel rewards({-1, -2, -3, -4});
  const long samples = 100000;
  // Two-sided normal tail beyond 3 standard errors.
  const double nominal = std::erfc(3.0 / std::sqrt(2.0));

  long pairs = 0, outcomes = 0, beyond = 0, hard = 0;
  double worst = 0.0;
  Rng rng(20240601);
  for (int teams = 0; teams <= 2; ++teams) {
    const FireModel m(g, spread, rewards, teams);
    // Transition probabilities depend on fuel only through fuel > 0, so
    // fuel in {0, 1} per cell covers every law on the 2x2 grid.
    for (unsigned burn = 0; burn < 16; ++burn) {
      for (unsigned fuel = 0; fuel < 16; ++fuel) {
        FireState s(4);
        for (int x = 0; x < 4; ++x) {
          s.burning[static_cast<std::size_t>(x)] = (burn >> x) & 1u;
          s.fuel[static_cast<std::size_t>(x)] = static_cast<int>((fuel >> x) & 1u);
        }
        for (const Action& a : oracle::candidate_actions(s, teams)) {
          ++pairs;
          std::map<Key, double> law;
          for (const auto& t : m.enumerate_transitions(s, a)) law[key(t.next)] += t.probability;
          std::map<Key, long> counts;
          for (long i = 0; i < samples; ++i) counts[key(m.step(s, a, rng).next)] += 1;
          for (const auto& [state, c] : counts) hard += law.count(state) == 0;
          for (const auto& [state, p] : law) {
            ++outcomes;
            const double freq = static_cast<double>(counts.count(state) ? counts.at(state) : 0) / samples;
            const double se = std::sqrt(p * (1.0 - p) / samples);
            if (se == 0.0) {
              hard += freq != p;
              continue;
            }
            const double z = std::abs(freq - p) / se;
            worst = std::max(worst, z);
            beyond += z > 3.0;
          }
        }
      }
    }
  }
  // With thousands of outcomes some 3-SE excursions are expected by chance;
  // the count of excursions must be consistent with the nominal rate.
  const double tail = binomial_upper_tail(outcomes, nominal, beyond);
  Verdict v;
  v.pass = hard == 0 && tail >= 1e-3;
  v.detail = std::to_string(pairs) + " state/action pairs, " + std::to_string(outcomes) + " outcomes, " +
             std::to_string(beyond) + " beyond 3 SE (expected " + fmt(nominal * outcomes, 3) + ", tail p " +
             fmt(tail, 3) + "), max |z| " + fmt(worst, 3) + ", impossible/degenerate mismatches " +
             std::to_string(hard);
  return v;
}

// ---------------------------------------------------------------------------
// 2. Search against expectimax.

Verdict search_vs_expectimax() {
  const GridSpec g(2);
  const FireModel m(g, SpreadModel::uniform(g, 0.3, 0.6), RewardModel({-1, -2, -3, -4}), 1);
  FireState root(4);
  root.fuel = {2, 2, 2, 2};
  root.burning = {1, 1, 0, 1};
  const int depth = 3;
  oracle::Expectimax ex(m, 1.0);
  const auto exact = ex.root(root, depth);

  MctsConfig c;
  c.exploration = 10.0;
  c.action_k = 1e9;
  c.action_alpha = 1.0;
  c.state_k = 1e9;
  c.state_alpha = 1.0;
  c.depth = depth;
  c.gamma = 1.0;
  c.budget_iterations = 100000;
  const int runs = 50;
  int agree = 0, q_ok = 0;
  double worst = 0.0;
  for (int seed = 0; seed < runs; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    Mcts mcts(m, c);
    const auto r = mcts.plan(root, rng);
    agree += r.action == exact.best;
    const double err = std::abs(r.value - exact.value) / std::abs(exact.value);
    worst = std::max(worst, err);
    q_ok += err <= 0.05;
  }
  std::string qs;
  for (std::size_t i = 0; i < exact.actions.size(); ++i) {
    qs += (i ? ", " : "") + std::to_string(exact.actions[i].teams[0]) + ":" + fmt(exact.q[i], 5);
  }
  Verdict v;
  v.pass = agree >= 0.95 * runs && q_ok == runs;
  v.detail = "optimal action cell " + std::to_string(exact.best.teams[0]) + " chosen in " + std::to_string(agree) +
             "/" + std::to_string(runs) + " runs, root Q within 5% in " + std::to_string(q_ok) + "/" +
             std::to_string(runs) + " (max rel. error " + fmt(worst, 3) + "); exact Q {" + qs + "}";
  return v;
}

// ---------------------------------------------------------------------------
// 3 and 4. Fluid program against exhaustive search and the recursion.

struct RandomInstance {
  FireModel model;
  FireState state;
};

RandomInstance random_instance(std::mt19937_64& rng, int k, int teams, int min_fuel, int max_fuel) {
  std::uniform_real_distribution<double> rew(-5.0, -0.5), pr(0.05, 0.4), qr(0.5, 0.9);
  std::uniform_int_distribution<int> fuel(min_fuel, max_fuel);
  std::bernoulli_distribution on(0.4);
  const GridSpec g(k);
  std::vector<double> r(static_cast<std::size_t>(g.cells()));
  for (auto& v : r) v = rew(rng);
  SpreadModel spread = SpreadModel::uniform(g, pr(rng), qr(rng));
  FireState s(g.cells());
  for (Cell x = 0; x < g.cells(); ++x) {
    s.fuel[static_cast<std::size_t>(x)] = fuel(rng);
    s.burning[static_cast<std::size_t>(x)] = on(rng) ? 1 : 0;
  }
  if (s.burning_count() == 0) s.burning[0] = 1;
  return {FireModel(g, spread, RewardModel(r), teams), s};
}

fluid::FluidModel build(const RandomInstance& in, int horizon) {
  return fluid::build_model(fluid::calibrate(in.model.spread(), in.state, horizon), in.state, in.model.rewards(),
                            in.model.teams());
}

lp::LpSolution solve_exact(const fluid::FluidModel& fm) {
  fluid::BnbOptions o;
  o.priority = fluid::fluid_priorities(fm);
  return fluid::branch_and_bound(fm.lp, o);
}

Verdict milp_vs_exhaustive() {
  std::mt19937_64 rng(31);
  const int horizon = 3;
  int equal = 0;
  double worst = 0.0;
  std::string objs;
  for (int i = 0; i < 5; ++i) {
    const auto in = random_instance(rng, 2, 1, 1, 4);
    const auto ref = oracle::exhaustive_milp(oracle::make_instance(in.model, in.state, horizon, 0.1));
    const auto got = solve_exact(build(in, horizon));
    objs += (i ? ", " : "") + (ref.feasible ? fmt(ref.objective, 10) : std::string("infeasible"));
    if (!ref.feasible) {
      equal += got.status == lp::Status::infeasible;
      continue;
    }
    if (got.status != lp::Status::optimal) continue;
    const double diff = std::abs(got.objective - ref.objective) / std::max(1.0, std::abs(ref.objective));
    worst = std::max(worst, diff);
    // Equal up to floating-point summation order.
    equal += diff <= 1e-9;
  }
  Verdict v;
  v.pass = equal == 5;
  v.detail = std::to_string(equal) + "/5 instances equal (max rel. diff " + fmt(worst, 3) + "); objectives {" + objs +
             "}";
  return v;
}

Verdict fluid_vs_recursion() {
  std::mt19937_64 rng(47);
  const int horizon = 5;
  struct Group {
    const char* name;
    int min_fuel;
    int instances;
    int matched = 0;
    int infeasible = 0;
  };
  // Fuel beyond the horizon never reaches the cut-off; fuel from 1 makes
  // cells run out inside it.
  std::vector<Group> groups{{"fuel > horizon", horizon + 1, 3}, {"fuel from 1", 1, 6}};
  double worst = 0.0, worst_tight = 0.0;
  int total = 0, matched = 0;
  for (auto& grp : groups) {
    for (int i = 0; i < grp.instances; ++i) {
      ++total;
      const auto in = random_instance(rng, 3, 0, grp.min_fuel, 9);
      const auto inst = oracle::make_instance(in.model, in.state, horizon, 0.1);
      const auto ref = oracle::forward_recursion(inst);
      const auto fm = build(in, horizon);
      const auto sol = solve_exact(fm);
      if (sol.status != lp::Status::optimal) {
        grp.infeasible += sol.status == lp::Status::infeasible;
        continue;
      }
      double err = 0.0, tight = 0.0;
      for (int t = 0; t <= horizon; ++t) {
        for (Cell x = 0; x < 9; ++x) {
          const double got = sol.x[static_cast<std::size_t>(fm.I(t, x))];
          err = std::max(err, std::abs(got - ref.intensity[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)]));
          if (t == 0 || got <= 1e-9) continue;
          double rhs = sol.x[static_cast<std::size_t>(fm.I(t - 1, x))];
          for (auto [y, p] : inst.src[static_cast<std::size_t>(x)]) {
            rhs += p * sol.x[static_cast<std::size_t>(fm.I(t - 1, y))];
          }
          tight = std::max(tight, std::abs(got - rhs));
        }
      }
      worst = std::max(worst, err);
      worst_tight = std::max(worst_tight, tight);
      const bool ok = ref.feasible && err <= 1e-6 && tight <= 1e-6;
      grp.matched += ok;
      matched += ok;
    }
  }
  Verdict v;
  v.pass = matched == total;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    v.detail += (g ? "; " : "") + std::string(groups[g].name) + ": " + std::to_string(groups[g].matched) + "/" +
                std::to_string(groups[g].instances) + " match, " + std::to_string(groups[g].infeasible) +
                " infeasible";
  }
  v.detail += "; max entry error " + fmt(worst, 3) + ", max slack where I>0 " + fmt(worst_tight, 3);
  if (!v.pass) {
    v.detail += " (a burning cell whose fuel runs out inside the horizon cannot be cut off: the cut needs the"
                " previous intensity to be at most delta)";
  }
  return v;
}

// ---------------------------------------------------------------------------
// 5. Simplex against vertex enumeration.

Verdict simplex_vs_vertices() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> vars(2, 7), rows(2, 6), ub(0, 3);
  int agree = 0, stalled = 0, infeasible = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    oracle::RandomLpOptions o;
    o.vars = vars(rng);
    o.rows = rows(rng);
    o.upper_bounded = std::min(o.vars, ub(rng));
    o.degenerate = 0.5;
    const auto p = oracle::random_lp(rng, o);
    const auto ref = oracle::vertex_enumeration(p);
    const auto s = lp::solve_lp(p);
    if (s.status == lp::Status::iteration_limit || s.status == lp::Status::numerical_error) ++stalled;
    if (!ref.feasible) {
      ++infeasible;
      agree += s.status == lp::Status::infeasible;
      continue;
    }
    if (s.status != lp::Status::optimal) continue;
    const double diff = std::abs(s.objective - ref.objective);
    worst = std::max(worst, diff);
    agree += diff <= 1e-6 && p.max_violation(s.x) <= 1e-6;
  }
  Verdict v;
  v.pass = agree == 100 && stalled == 0;
  v.detail = std::to_string(agree) + "/100 agree (" + std::to_string(infeasible) + " infeasible), max |diff| " +
             fmt(worst, 3) + ", stalled " + std::to_string(stalled);
  return v;
}

// ---------------------------------------------------------------------------
// 6 and 7. Initial fires and the branching factor.

Verdict initial_fire_table(const std::string& config) {
  const Scenario s = load_scenario(config);
  std::vector<FireState> fires;
  for (std::uint64_t seed = 1; seed <= 256; ++seed) fires.push_back(s.initial_state(seed));
  const FireStats st = initial_fire_stats(fires);
  Verdict v;
  const bool mean_ok = std::abs(st.mean_burning - 37.6) <= 0.25 * 37.6;
  const bool max_ok = std::abs(st.max_burning - 62.0) <= 0.25 * 62.0;
  v.pass = mean_ok && max_ok;
  v.detail = "mean burning " + fmt(st.mean_burning, 4) + " (target 37.6 +-25%), max " + std::to_string(st.max_burning) +
             " (target 62 +-25%); reported only: burning-cell fuel " + fmt(st.mean_burning_fuel, 4) +
             ", unburnt-cell fuel " + fmt(st.mean_unburnt_fuel, 4);
  return v;
}

Verdict branching() {
  const auto b = branching_factor(275.5, 4);
  Verdict v;
  v.pass = b.exact >= 2.1e8 && b.exact <= 2.6e8;
  v.detail = "N^I/I! = " + fmt(b.exact, 5) + ", Stirling " + fmt(b.stirling, 5) + " (range [2.1e8, 2.6e8])";
  return v;
}

// ---------------------------------------------------------------------------
// 8. Policy ordering.

Verdict policy_ordering(const std::string& config, int jobs, const std::string& out_dir) {
  const Scenario s = load_scenario(config);
  const std::vector<std::string> policies{"random", "fw", "mcts", "mo"};
  const BenchmarkResult r = run_benchmark(s, policies, 64, 1, jobs);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream res(fs::path(out_dir) / "ordering_results.csv");
    write_results_csv(res, r);
    std::ofstream sum(fs::path(out_dir) / "ordering_summary.csv");
    write_summary_csv(sum, r);
  }
  Verdict v;
  v.pass = true;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    const auto& ps = r.summary[p];
    v.detail += (p ? "; " : "") + ps.policy + " mean " + fmt(ps.reward.mean, 6);
    if (p == 0) continue;
    const bool ok = ps.reward.mean > r.summary[0].reward.mean && ps.sign_p < 0.05;
    v.pass = v.pass && ok;
    v.detail += " (" + fmt(ps.improvement_pct, 3) + "%, p " + fmt(ps.sign_p, 3) + (ok ? ")" : ", not met)");
  }
  return v;
}

// ---------------------------------------------------------------------------
// 9. Byte-identical output from separate processes.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict determinism(const std::string& cli) {
  if (cli.empty() || !fs::exists(cli)) return {false, "command-line tool not found: " + cli};
  const fs::path dir = fs::temp_directory_path() / ("wildfire_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  nlohmann::json doc = {{"family", "grid1"},
                        {"k", 8},
                        {"teams", 4},
                        {"mcts", {{"budget_iterations", 300}, {"depth", 6}}},
                        {"mo", {{"horizon", 4}, {"time_limit", 600}}}};
  const fs::path config = dir / "scenario.json";
  std::ofstream(config) << doc.dump(2);

  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  const std::string bench = "benchmark --scenario \"" + config.string() + "\" --policies random,fw,mcts,mo --reps 3 --seed 9";
  bool ok = run(bench + " --out \"" + (dir / "a").string() + "\"") &&
            run(bench + " --out \"" + (dir / "b").string() + "\"") &&
            run(bench + " --jobs 3 --out \"" + (dir / "c").string() + "\"");
  for (const char* policy : {"mcts", "mo"}) {
    const std::string sim = std::string("simulate --scenario \"") + config.string() + "\" --policy " + policy +
                            " --seed 4 --trace \"" + (dir / policy).string();
    ok = ok && run(sim + "_a.csv\"") && run(sim + "_b.csv\"");
  }
  if (!ok) {
    fs::remove_all(dir);
    return {false, "a command failed"};
  }
  int identical = 0, compared = 0;
  std::string differing;
  auto same = [&](const fs::path& a, const fs::path& b) {
    ++compared;
    const std::string x = slurp(a), y = slurp(b);
    if (!x.empty() && x == y) {
      ++identical;
    } else {
      differing += " " + b.filename().string();
    }
  };
  for (const char* f : {"results.csv", "summary.csv"}) {
    same(dir / "a" / f, dir / "b" / f);
    same(dir / "a" / f, dir / "c" / f);
  }
  for (const char* policy : {"mcts", "mo"}) {
    same(dir / (std::string(policy) + "_a.csv"), dir / (std::string(policy) + "_b.csv"));
    same(dir / (std::string(policy) + "_a.csv.planner.csv"), dir / (std::string(policy) + "_b.csv.planner.csv"));
  }
  fs::remove_all(dir);
  Verdict v;
  v.pass = identical == compared;
  v.detail = std::to_string(identical) + "/" + std::to_string(compared) + " file pairs byte-identical" +
             (differing.empty() ? "" : " (differ:" + differing + ")");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::string config = WILDFIRE_CONFIG_DIR "/grid1_k8.json";
  std::string cli, out_dir;
  int jobs = 1;
  app.add_option("--only", only, "Run only these criteria (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--config", config, "Scenario used by the initial-fire and ordering criteria")->capture_default_str();
  app.add_option("--cli", cli, "Path of the command-line tool (determinism criterion)");
  app.add_option("--jobs", jobs, "Worker threads for the ordering benchmark")->capture_default_str();
  app.add_option("--out", out_dir, "Directory for the ordering benchmark CSVs");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"transition law vs enumeration", transition_law},
      {"search vs expectimax", search_vs_expectimax},
      {"branch and bound vs exhaustive search", milp_vs_exhaustive},
      {"fluid intensities vs forward recursion", fluid_vs_recursion},
      {"simplex vs vertex enumeration", simplex_vs_vertices},
      {"initial fire statistics", [&] { return initial_fire_table(config); }},
      {"branching factor", branching},
      {"policy ordering", [&] { return policy_ordering(config, jobs, out_dir); }},
      {"determinism", [&] { return determinism(cli); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::cout << "criterion " << id << " " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
              << v.detail << " [" << fmt(secs, 3) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
