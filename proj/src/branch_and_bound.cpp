#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "wildfire/fluid.hpp"

namespace wildfire::fluid {

namespace {

inline std::size_t idx(int i) { return static_cast<std::size_t>(i); }

struct Node {
  double bound;
  long order;
  std::vector<std::pair<int, std::pair<double, double>>> fixes;  // column -> (lo, up)
};

struct WorseBound {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.order > b.order;
  }
};

lp::LpProblem with_fixes(const lp::LpProblem& base, const Node& node) {
  lp::LpProblem p = base;
  for (const auto& [j, b] : node.fixes) p.set_bounds(j, b.first, b.second);
  return p;
}

}  // namespace

lp::LpSolution branch_and_bound(const lp::LpProblem& problem, const BnbOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  auto priority = [&](int j) { return opt.priority.empty() ? 0 : opt.priority[idx(j)]; };

  lp::LpSolution best;
  best.status = lp::Status::no_incumbent;
  best.objective = lp::kInf;
  long iterations = 0;
  long nodes = 0;

  auto solve = [&](const lp::LpProblem& p, bool capped = true) {
    lp::SimplexOptions so = opt.simplex;
    if (capped && std::isfinite(opt.time_limit)) {
      so.time_limit = std::max(0.0, std::min(so.time_limit, opt.time_limit - elapsed()));
    }
    lp::LpSolution s = lp::solve_lp(p, so);
    iterations += s.iterations;
    ++nodes;
    return s;
  };

  auto finish = [&](lp::Status status, double bound) {
    best.bound = bound;
    best.iterations = iterations;
    best.nodes = nodes;
    if (best.x.empty()) {
      best.status = lp::Status::no_incumbent;
      best.gap = lp::kInf;
      return best;
    }
    best.status = status;
    best.gap = std::max(0.0, best.objective - bound) / std::max(1.0, std::abs(best.objective));
    return best;
  };

  // The root relaxation is always solved so that a bound can be reported.
  lp::LpProblem relaxed = problem;
  const lp::LpSolution root = solve(relaxed, false);
  if (root.status == lp::Status::infeasible) {
    best.status = lp::Status::infeasible;
    best.nodes = nodes;
    best.iterations = iterations;
    return best;
  }
  if (root.status == lp::Status::unbounded) {
    best.status = lp::Status::unbounded;
    return best;
  }
  if (root.status != lp::Status::optimal) return finish(lp::Status::numerical_error, -lp::kInf);
  if (elapsed() >= opt.time_limit) return finish(lp::Status::time_limit, root.objective);

  std::priority_queue<Node, std::vector<Node>, WorseBound> open;
  long order = 0;
  open.push(Node{root.objective, order++, {}});
  // The root solution is reused for the first pop.
  bool root_pending = true;

  auto prune_level = [&] {
    return best.objective - opt.gap_tol * std::max(1.0, std::abs(best.objective));
  };

  while (!open.empty()) {
    if (elapsed() >= opt.time_limit) return finish(lp::Status::time_limit, std::min(open.top().bound, best.objective));
    Node node = open.top();
    open.pop();
    if (node.bound >= prune_level()) continue;

    lp::LpSolution sol;
    lp::LpProblem sub = with_fixes(problem, node);
    if (root_pending) {
      sol = root;
      root_pending = false;
    } else {
      sol = solve(sub);
    }
    if (sol.status == lp::Status::infeasible) continue;
    if (sol.status == lp::Status::time_limit) return finish(lp::Status::time_limit, std::min(node.bound, best.objective));
    if (sol.status != lp::Status::optimal) continue;
    if (sol.objective >= prune_level()) continue;

    // Most fractional column in the lowest priority class.
    int branch = -1;
    int branch_class = 0;
    double branch_frac = 0.0;
    bool near_integral = true;
    for (int j = 0; j < sub.num_cols(); ++j) {
      if (!problem.is_integer(j)) continue;
      const double v = sol.x[idx(j)];
      const double frac = std::abs(v - std::round(v));
      if (frac > opt.integrality_tol) near_integral = false;
      if (frac <= 1e-12) continue;
      const int cls = priority(j);
      const double score = std::min(frac, 1.0 - frac);
      if (branch < 0 || cls < branch_class || (cls == branch_class && score > branch_frac + 1e-12)) {
        branch = j;
        branch_class = cls;
        branch_frac = score;
      }
    }

    if (near_integral) {
      // Round and re-solve so big-M rows see exact binaries.
      lp::LpProblem fixed = sub;
      for (int j = 0; j < sub.num_cols(); ++j) {
        if (problem.is_integer(j)) {
          const double r = std::round(sol.x[idx(j)]);
          fixed.set_bounds(j, r, r);
        }
      }
      const lp::LpSolution fs = branch < 0 ? sol : solve(fixed);
      if (fs.status == lp::Status::optimal && fs.objective < best.objective) {
        best.x = fs.x;
        for (int j = 0; j < sub.num_cols(); ++j) {
          if (problem.is_integer(j)) best.x[idx(j)] = std::round(best.x[idx(j)]);
        }
        best.objective = problem.objective(best.x);
      }
      if (branch < 0) continue;
    }

    for (const double side : {0.0, 1.0}) {
      Node child{sol.objective, order++, node.fixes};
      const double v = sol.x[idx(branch)];
      const double lo = side == 0.0 ? sub.lower(branch) : std::ceil(v);
      const double up = side == 0.0 ? std::floor(v) : sub.upper(branch);
      if (lo > up) continue;
      child.fixes.emplace_back(branch, std::make_pair(lo, up));
      open.push(std::move(child));
    }
  }
  if (best.x.empty()) {
    best.status = lp::Status::infeasible;
    best.iterations = iterations;
    best.nodes = nodes;
    return best;
  }
  return finish(lp::Status::optimal, best.objective);
}

}  // namespace wildfire::fluid
