#include "wildfire/grid_mdp.hpp"

#include <algorithm>
#include <cmath>

namespace wildfire {

namespace {

inline std::size_t idx(Cell x) { return static_cast<std::size_t>(x); }

inline void hash_mix(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

}  // namespace

std::string to_string(Neighborhood n) {
  return n == Neighborhood::four ? "four" : "eight";
}

Neighborhood neighborhood_from_string(const std::string& s) {
  if (s == "four" || s == "4") return Neighborhood::four;
  if (s == "eight" || s == "8") return Neighborhood::eight;
  throw ConfigError("neighborhood: expected \"four\" or \"eight\", got \"" + s + "\"");
}

GridSpec::GridSpec(int k, Neighborhood n) : GridSpec(k, k, n) {}

GridSpec::GridSpec(int w, int h, Neighborhood n) : width(w), height(h), neighborhood(n) {
  if (w < 1 || h < 1) throw std::invalid_argument("grid dimensions must be positive");
}

bool GridSpec::adjacent(Cell x, Cell y) const {
  if (!contains(x) || !contains(y) || x == y) return false;
  const int dc = std::abs(col(x) - col(y));
  const int dr = std::abs(row(x) - row(y));
  if (neighborhood == Neighborhood::four) return dc + dr == 1;
  return dc <= 1 && dr <= 1;
}

std::vector<Cell> GridSpec::neighbors(Cell x) const {
  std::vector<Cell> out;
  const int c = col(x);
  const int r = row(x);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (neighborhood == Neighborhood::four && dr != 0 && dc != 0) continue;
      const int nc = c + dc;
      const int nr = r + dr;
      if (nc < 0 || nc >= width || nr < 0 || nr >= height) continue;
      out.push_back(index(nc, nr));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SpreadModel SpreadModel::uniform(const GridSpec& grid, double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ignition probability must lie in [0,1]");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("suppression probability must lie in [0,1]");
  SpreadModel m;
  m.grid_ = grid;
  m.incoming_.resize(idx(grid.cells()));
  m.q_.assign(idx(grid.cells()), q);
  if (p > 0.0) {
    for (Cell x = 0; x < grid.cells(); ++x) {
      for (Cell y : grid.neighbors(x)) m.incoming_[idx(x)].push_back({y, p});
    }
  }
  return m;
}

void SpreadModel::set_ignition(Cell x, Cell y, double p) {
  if (!grid_.contains(x) || !grid_.contains(y)) throw std::out_of_range("set_ignition: cell outside grid");
  if (!grid_.adjacent(x, y)) throw std::invalid_argument("set_ignition: P(x,y) may only be nonzero for neighbors");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("set_ignition: probability must lie in [0,1]");
  auto& in = incoming_[idx(x)];
  auto it = std::find_if(in.begin(), in.end(), [y](const Source& s) { return s.from == y; });
  if (p == 0.0) {
    if (it != in.end()) in.erase(it);
    return;
  }
  if (it != in.end()) {
    it->p = p;
  } else {
    in.push_back({y, p});
    std::sort(in.begin(), in.end(), [](const Source& a, const Source& b) { return a.from < b.from; });
  }
}

double SpreadModel::ignition(Cell x, Cell y) const {
  for (const Source& s : incoming_[idx(x)]) {
    if (s.from == y) return s.p;
  }
  return 0.0;
}

void SpreadModel::set_suppression(Cell x, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("set_suppression: probability must lie in [0,1]");
  q_.at(idx(x)) = q;
}

RewardModel::RewardModel(std::vector<double> values) : r(std::move(values)) {
  for (double v : r) {
    if (!(v <= 0.0)) throw std::invalid_argument("rewards must be nonpositive");
  }
}

int FireState::burning_count() const {
  return static_cast<int>(std::count_if(burning.begin(), burning.end(), [](std::uint8_t b) { return b != 0; }));
}

std::vector<Cell> FireState::burning_cells() const {
  std::vector<Cell> out;
  for (Cell x = 0; x < cells(); ++x) {
    if (burning[idx(x)]) out.push_back(x);
  }
  return out;
}

std::size_t FireStateHash::operator()(const FireState& s) const noexcept {
  std::size_t h = s.fuel.size();
  for (std::size_t i = 0; i < s.fuel.size(); ++i) {
    hash_mix(h, (static_cast<std::size_t>(s.fuel[i]) << 1) | s.burning[i]);
  }
  return h;
}

bool Action::is_idle() const {
  return std::all_of(teams.begin(), teams.end(), [](Cell c) { return c == kIdle; });
}

int Action::teams_on(Cell x) const {
  return static_cast<int>(std::count(teams.begin(), teams.end(), x));
}

std::size_t ActionHash::operator()(const Action& a) const noexcept {
  std::size_t h = a.teams.size();
  for (Cell c : a.teams) hash_mix(h, static_cast<std::size_t>(c + 1));
  return h;
}

double ignition_prob(const FireState& state, const SpreadModel& spread, Cell x) {
  if (state.fuel[idx(x)] <= 0) return 0.0;
  double keep = 1.0;
  for (const auto& src : spread.sources(x)) {
    if (state.is_burning(src.from)) keep *= 1.0 - src.p;
  }
  return 1.0 - keep;
}

double extinguish_prob(const FireState& state, const SpreadModel& spread, const Action& action, Cell x) {
  if (state.fuel[idx(x)] == 0) return 1.0;
  const int m = action.teams_on(x);
  if (m == 0) return 0.0;
  return 1.0 - std::pow(1.0 - spread.suppression(x), m);
}

bool is_terminal(const FireState& state) {
  return std::none_of(state.burning.begin(), state.burning.end(), [](std::uint8_t b) { return b != 0; });
}

FireModel::FireModel(GridSpec grid, SpreadModel spread, RewardModel rewards, int teams)
    : grid_(grid), spread_(std::move(spread)), rewards_(std::move(rewards)), teams_(teams) {
  if (spread_.cells() != grid_.cells()) throw std::invalid_argument("spread model size does not match grid");
  if (rewards_.cells() != grid_.cells()) throw std::invalid_argument("reward model size does not match grid");
  if (teams_ < 0) throw std::invalid_argument("team count must be nonnegative");
}

double FireModel::reward(const FireState& state) const {
  double total = 0.0;
  for (Cell x = 0; x < cells(); ++x) {
    if (state.is_burning(x)) total += rewards_[x];
  }
  return total;
}

double FireModel::flip_prob(const FireState& state, const Action& action, Cell x) const {
  return state.is_burning(x) ? extinguish_prob(state, spread_, action, x) : ignition_prob(state, spread_, x);
}

StepResult FireModel::step(const FireState& state, const Action& action, Rng& rng) const {
  StepResult out{state, reward(state)};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Cell x = 0; x < cells(); ++x) {
    const double rho = flip_prob(state, action, x);
    bool flip = rho >= 1.0;
    if (rho > 0.0 && rho < 1.0) flip = unif(rng) < rho;
    const bool was = state.is_burning(x);
    out.next.burning[idx(x)] = static_cast<std::uint8_t>(flip ? !was : was);
    if (was && state.fuel[idx(x)] > 0) out.next.fuel[idx(x)] = state.fuel[idx(x)] - 1;
  }
  return out;
}

std::vector<Transition> FireModel::enumerate_transitions(const FireState& state, const Action& action,
                                                         int max_stochastic_cells) const {
  FireState base = state;
  std::vector<std::pair<Cell, double>> stochastic;
  for (Cell x = 0; x < cells(); ++x) {
    const bool was = state.is_burning(x);
    const double rho = flip_prob(state, action, x);
    if (was && state.fuel[idx(x)] > 0) base.fuel[idx(x)] = state.fuel[idx(x)] - 1;
    if (rho >= 1.0) {
      base.burning[idx(x)] = static_cast<std::uint8_t>(!was);
    } else if (rho > 0.0) {
      stochastic.emplace_back(x, rho);
    }
  }
  if (static_cast<int>(stochastic.size()) > max_stochastic_cells) {
    throw EnumerationTooLarge("enumerate_transitions: " + std::to_string(stochastic.size()) +
                              " stochastic cells exceed the cap of " + std::to_string(max_stochastic_cells));
  }
  const double r = reward(state);
  const std::size_t n = stochastic.size();
  std::vector<Transition> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Transition t{base, 1.0, r};
    for (std::size_t b = 0; b < n; ++b) {
      const auto [x, rho] = stochastic[b];
      if (mask & (std::size_t{1} << b)) {
        t.next.burning[idx(x)] = static_cast<std::uint8_t>(!state.is_burning(x));
        t.probability *= rho;
      } else {
        t.probability *= 1.0 - rho;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

void FireModel::validate(const FireState& state) const {
  if (state.cells() != cells() || static_cast<int>(state.burning.size()) != cells()) {
    throw std::invalid_argument("state dimensions do not match the grid");
  }
  for (int f : state.fuel) {
    if (f < 0) throw std::invalid_argument("fuel must be nonnegative");
  }
}

void FireModel::validate(const Action& action) const {
  if (action.size() != teams_) throw std::invalid_argument("action length must equal the team count");
  for (Cell c : action.teams) {
    if (c != kIdle && !grid_.contains(c)) throw std::invalid_argument("action targets a cell outside the grid");
  }
}

nlohmann::json state_to_json(const FireState& state) {
  nlohmann::json doc;
  doc["fuel"] = state.fuel;
  std::vector<int> b(state.burning.begin(), state.burning.end());
  doc["burning"] = b;
  return doc;
}

FireState state_from_json(const nlohmann::json& doc, int cells) {
  FireState s(cells);
  for (const char* key : {"fuel", "burning"}) {
    if (!doc.contains(key)) throw ConfigError(std::string(key) + ": missing");
    if (!doc[key].is_array() || static_cast<int>(doc[key].size()) != cells) {
      throw ConfigError(std::string(key) + ": expected an array of " + std::to_string(cells) + " entries");
    }
  }
  for (int i = 0; i < cells; ++i) {
    const auto& f = doc["fuel"][static_cast<std::size_t>(i)];
    if (!f.is_number_integer() || f.get<int>() < 0) {
      throw ConfigError("fuel: entry " + std::to_string(i) + " must be a nonnegative integer");
    }
    s.fuel[idx(i)] = f.get<int>();
    const auto& b = doc["burning"][static_cast<std::size_t>(i)];
    if (b.is_boolean()) {
      s.burning[idx(i)] = b.get<bool>() ? 1 : 0;
    } else if (b.is_number_integer() && (b.get<int>() == 0 || b.get<int>() == 1)) {
      s.burning[idx(i)] = static_cast<std::uint8_t>(b.get<int>());
    } else {
      throw ConfigError("burning: entry " + std::to_string(i) + " must be 0/1 or a boolean");
    }
  }
  return s;
}

}  // namespace wildfire
