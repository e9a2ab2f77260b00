#include "wildfire/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wildfire {

namespace {

inline std::size_t idx(Cell x) { return static_cast<std::size_t>(x); }

// Priorities are compared after rounding to 40 mantissa bits so that cells
// that are equal up to summation-order noise tie exactly.
double quantize(double p) {
  if (p == 0.0 || !std::isfinite(p)) return p;
  int e = 0;
  const double m = std::frexp(p, &e);
  return std::ldexp(std::round(std::ldexp(m, 40)), e - 40);
}

bool same_priority(double a, double b) { return quantize(a) == quantize(b); }

// Burning cells in priority order together with their competition rank
// among burning cells only.
void ranked_burning(const FireState& state, const WeightMap& weights, std::vector<Cell>& cells,
                    std::vector<double>& score) {
  cells.clear();
  score.clear();
  int rank = 0;
  double last = 0.0;
  for (Cell x : weights.order) {
    if (!state.is_burning(x)) continue;
    const double p = weights.priority[idx(x)];
    if (cells.empty() || !same_priority(p, last)) rank = static_cast<int>(cells.size()) + 1;
    last = p;
    cells.push_back(x);
    score.push_back(1.0 / rank);
  }
}

}  // namespace

DistanceTable all_pairs_distances(const GridSpec& grid, const SpreadModel& spread) {
  const int n = grid.cells();
  DistanceTable d(n);
  for (Cell x = 0; x < n; ++x) {
    d(x, x) = 0.0;
    for (const auto& src : spread.sources(x)) d(x, src.from) = std::min(d(x, src.from), src.p);
  }
  for (Cell m = 0; m < n; ++m) {
    for (Cell i = 0; i < n; ++i) {
      const double dim = d(i, m);
      if (dim == kUnreachable) continue;
      for (Cell j = 0; j < n; ++j) {
        const double via = dim + d(m, j);
        if (via < d(i, j)) d(i, j) = via;
      }
    }
  }
  return d;
}

WeightMap fw_weights(const DistanceTable& distances, const RewardModel& rewards) {
  const int n = distances.size();
  WeightMap w;
  w.weight.assign(idx(n), 0.0);
  for (Cell x = 0; x < n; ++x) {
    double sum = 0.0;
    for (Cell y = 0; y < n; ++y) {
      if (y == x || rewards[y] == 0.0) continue;
      const double dist = distances(x, y);
      if (dist == kUnreachable || dist <= 0.0) continue;
      sum += rewards[y] / dist;
    }
    w.weight[idx(x)] = sum;
  }
  w.priority.resize(idx(n));
  std::transform(w.weight.begin(), w.weight.end(), w.priority.begin(), [](double v) { return -v; });

  w.order.resize(idx(n));
  std::iota(w.order.begin(), w.order.end(), 0);
  std::stable_sort(w.order.begin(), w.order.end(), [&](Cell a, Cell b) {
    return quantize(w.priority[idx(a)]) > quantize(w.priority[idx(b)]);
  });
  w.rank.assign(idx(n), 0);
  for (std::size_t i = 0; i < w.order.size(); ++i) {
    const Cell x = w.order[i];
    if (i > 0 && same_priority(w.priority[idx(x)], w.priority[idx(w.order[i - 1])])) {
      w.rank[idx(x)] = w.rank[idx(w.order[i - 1])];
    } else {
      w.rank[idx(x)] = static_cast<int>(i) + 1;
    }
  }
  return w;
}

Action fw_policy(const FireState& state, const WeightMap& weights, int teams) {
  std::vector<Cell> burning;
  for (Cell x : weights.order) {
    if (state.is_burning(x)) burning.push_back(x);
  }
  if (burning.empty()) return Action::idle(teams);
  Action a;
  a.teams.reserve(idx(teams));
  for (int i = 0; i < teams; ++i) a.teams.push_back(burning[idx(i) % burning.size()]);
  return a;
}

Action fw_sample_policy(const FireState& state, const WeightMap& weights, int teams, Rng& rng) {
  std::vector<Cell> cells;
  std::vector<double> score;
  ranked_burning(state, weights, cells, score);
  if (cells.empty()) return Action::idle(teams);

  Action a;
  a.teams.reserve(idx(teams));
  std::vector<double> remaining = score;
  for (int i = 0; i < teams; ++i) {
    const bool exhausted = static_cast<std::size_t>(i) >= cells.size();
    const std::vector<double>& w = exhausted ? score : remaining;
    std::discrete_distribution<std::size_t> draw(w.begin(), w.end());
    const std::size_t pick = draw(rng);
    a.teams.push_back(cells[pick]);
    if (!exhausted) remaining[pick] = 0.0;
  }
  return a;
}

Action random_policy(const FireState& state, int teams, Rng& rng) {
  std::vector<Cell> burning = state.burning_cells();
  if (burning.empty()) return Action::idle(teams);
  Action a;
  a.teams.reserve(idx(teams));
  const std::size_t distinct = std::min(idx(teams), burning.size());
  // Partial Fisher-Yates for the without-replacement prefix.
  for (std::size_t i = 0; i < distinct; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, burning.size() - 1);
    std::swap(burning[i], burning[pick(rng)]);
    a.teams.push_back(burning[i]);
  }
  std::uniform_int_distribution<std::size_t> any(0, burning.size() - 1);
  for (std::size_t i = distinct; i < idx(teams); ++i) a.teams.push_back(burning[any(rng)]);
  return a;
}

}  // namespace wildfire
