// Command-line entry point: simulate, benchmark, stats, export-lp, weights.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wildfire/harness.hpp"
#include "wildfire/mps.hpp"

using namespace wildfire;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    open_out(path) << text;
  }
}

int simulate(const Scenario& sc, const std::string& policy_name, std::uint64_t seed, const std::string& out,
             const std::string& trace) {
  const FireModel model = sc.model();
  auto policy = make_policy(policy_name, model, sc.mcts, sc.mo);
  std::ofstream planner_log;
  if (!trace.empty()) {
    planner_log = open_out(trace + ".planner.csv");
    policy->set_trace(&planner_log);
  }
  const FireState initial = sc.initial_state(seed);
  const EpisodeResult e = run_episode(model, initial, *policy, seed, sc.step_cap(), true);
  std::cout << "policy " << e.policy << " seed " << e.seed << " initial_burning " << e.initial_burning << " steps "
            << e.steps << " reward " << format_double(e.reward) << (e.capped ? " capped" : "") << '\n';
  for (const auto& s : e.trace) {
    std::cout << "  step " << s.step << " burning " << s.burning << " reward " << format_double(s.reward) << '\n';
  }
  if (!out.empty()) {
    BenchmarkResult r;
    r.policies = {e.policy};
    r.seeds = {seed};
    r.episodes = {e};
    std::ostringstream os;
    write_results_csv(os, r);
    emit(out, os.str());
  }
  if (!trace.empty()) {
    std::ofstream f = open_out(trace);
    write_trace_csv(f, e);
  }
  return 0;
}

int benchmark(const Scenario& sc, const std::vector<std::string>& policies, int reps, std::uint64_t seed, int jobs,
              const std::string& out) {
  const BenchmarkResult r = run_benchmark(sc, policies, reps, seed, jobs);
  std::ostringstream summary;
  write_summary_csv(summary, r);
  std::cout << summary.str();
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream res = open_out((std::filesystem::path(out) / "results.csv").string());
    write_results_csv(res, r);
    open_out((std::filesystem::path(out) / "summary.csv").string()) << summary.str();
  }
  return 0;
}

int stats(const Scenario& sc, int reps, std::uint64_t seed, const std::string& out) {
  std::vector<FireState> fires;
  for (int r = 0; r < reps; ++r) fires.push_back(sc.initial_state(seed + static_cast<std::uint64_t>(r)));
  const FireStats st = initial_fire_stats(fires);
  std::ostringstream os;
  os << "# wildfire-stats v1\n";
  os << "family,k,samples,mean_burning,max_burning,mean_burning_fuel,mean_unburnt_fuel,mean_burnt_out,"
        "branching_factor\n";
  os << to_string(sc.family) << ',' << sc.k << ',' << st.samples << ',' << format_double(st.mean_burning) << ','
     << st.max_burning << ',' << format_double(st.mean_burning_fuel) << ',' << format_double(st.mean_unburnt_fuel)
     << ',' << format_double(st.mean_burnt_out) << ','
     << format_double(sc.teams > 0 ? branching_factor(st.mean_burning, sc.teams).exact : 0.0) << '\n';
  emit(out, os.str());
  return 0;
}

int export_lp(const Scenario& sc, std::uint64_t seed, const std::string& out, bool solve, bool relax_teams) {
  const FireModel model = sc.model();
  const FireState s = sc.initial_state(seed);
  const auto calib = fluid::calibrate(model.spread(), s, sc.mo.horizon, sc.mo.delta);
  auto fm = fluid::build_model(calib, s, model.rewards(), model.teams(), sc.mo.objective);
  if (relax_teams) {
    for (int t = 0; t <= fm.horizon; ++t) {
      for (Cell x = 0; x < fm.cells; ++x) {
        for (int i = 0; i < fm.teams; ++i) fm.lp.set_integer(fm.A(t, x, i), false);
      }
    }
  }
  emit(out, lp::write_mps(fm.lp));
  std::cerr << "columns " << fm.lp.num_cols() << " rows " << fm.lp.num_rows() << " nonzeros "
            << fm.lp.num_nonzeros() << '\n';
  if (solve) {
    fluid::BnbOptions opt;
    opt.time_limit = sc.mo.time_limit;
    opt.priority = fluid::fluid_priorities(fm);
    opt.simplex = sc.mo.simplex;
    const auto r = fluid::branch_and_bound(fm.lp, opt);
    std::cerr << "status " << lp::to_string(r.status) << " objective " << format_double(r.objective) << " bound "
              << format_double(r.bound) << " nodes " << r.nodes << '\n';
    if (r.status == lp::Status::optimal) {
      std::cerr << "v";
      for (Cell x = 0; x < fm.cells; ++x) {
        double v = 0.0;
        for (int i = 0; i < fm.teams; ++i) v += r.x[static_cast<std::size_t>(fm.A(0, x, i))];
        std::cerr << ' ' << format_double(v);
      }
      std::cerr << '\n';
    }
  }
  return 0;
}

int weights(const Scenario& sc, const std::string& out) {
  const FireModel model = sc.model();
  const auto w = model_weights(model);
  std::ostringstream os;
  os << "# wildfire-weights v1\n";
  os << "cell,col,row,reward,weight,priority,rank\n";
  for (Cell x = 0; x < model.cells(); ++x) {
    os << x << ',' << model.grid().col(x) << ',' << model.grid().row(x) << ',' << format_double(model.rewards()[x])
       << ',' << format_double(w->weight[static_cast<std::size_t>(x)]) << ','
       << format_double(w->priority[static_cast<std::size_t>(x)]) << ',' << w->rank[static_cast<std::size_t>(x)]
       << '\n';
  }
  emit(out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wildfire suppression planning toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out, trace, policy = "fw", policies = "random,fw";
  std::uint64_t seed = 1;
  int reps = 1, jobs = 1;
  bool solve = false, relax_teams = false;

  auto* sim = app.add_subcommand("simulate", "Run one seeded episode and print its trajectory");
  sim->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  sim->add_option("--policy", policy, "random, fw, mcts or mo")->capture_default_str();
  sim->add_option("--seed", seed, "Episode seed")->capture_default_str();
  sim->add_option("--out", out, "Write the result row as CSV");
  sim->add_option("--trace", trace, "Write the per-step trace CSV; planner log goes to <file>.planner.csv");

  auto* bench = app.add_subcommand("benchmark", "Paired-seed comparison of policies");
  bench->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  bench->add_option("--policies", policies, "Comma-separated policy list")->capture_default_str();
  bench->add_option("--reps", reps, "Replications (seeds seed..seed+reps-1)")->capture_default_str()->check(
      CLI::PositiveNumber);
  bench->add_option("--seed", seed, "First seed")->capture_default_str();
  bench->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "Directory for results.csv and summary.csv");

  auto* st = app.add_subcommand("stats", "Initial fire statistics over generated fires");
  st->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  st->add_option("--reps", reps, "Number of generated fires")->capture_default_str()->check(CLI::PositiveNumber);
  st->add_option("--seed", seed, "First seed")->capture_default_str();
  st->add_option("--out", out, "Output CSV (stdout when omitted)");

  auto* ex = app.add_subcommand("export-lp", "Write the fluid model of the initial state as fixed MPS");
  ex->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  ex->add_option("--seed", seed, "Seed of the generated initial fire")->capture_default_str();
  ex->add_option("--out", out, "Output MPS file (stdout when omitted)");
  ex->add_flag("--relax-teams", relax_teams, "Export with the team assignment variables continuous");
  ex->add_flag("--solve", solve, "Also solve with branch and bound and report the objective on stderr");

  auto* wt = app.add_subcommand("weights", "Dump the FW weight map");
  wt->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  wt->add_option("--out", out, "Output CSV (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    const Scenario sc = load_scenario(scenario_path);
    if (*sim) return simulate(sc, policy, seed, out, trace);
    if (*bench) return benchmark(sc, split_list(policies), reps, seed, jobs, out);
    if (*st) return stats(sc, reps, seed, out);
    if (*ex) return export_lp(sc, seed, out, solve, relax_teams);
    if (*wt) return weights(sc, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
