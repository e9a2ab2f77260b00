#include "wildfire/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

namespace wildfire {

namespace {

inline std::size_t idx(int i) { return static_cast<std::size_t>(i); }

constexpr double kFloorGuard = 1e-9;

double number(const nlohmann::json& doc, const char* key) {
  if (!doc[key].is_number()) throw ConfigError(std::string(key) + ": expected a number");
  return doc[key].get<double>();
}

int integer(const nlohmann::json& doc, const char* key) {
  if (!doc[key].is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
  return doc[key].get<int>();
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::grid1: return "grid1";
    case Family::grid2: return "grid2";
    case Family::custom: return "custom";
  }
  return "custom";
}

int initial_fuel_level(int k, double p, double divisor) {
  return static_cast<int>(std::floor(static_cast<double>(k) / (divisor * p) + kFloorGuard));
}

int scale_fuel(int fuel, int k) {
  return static_cast<int>(std::floor(fuel * std::pow(static_cast<double>(k), -0.25) + kFloorGuard));
}

RewardModel grid1_rewards(int k) {
  if (k < 2) throw std::invalid_argument("grid1_rewards: k must be at least 2");
  const GridSpec g(k);
  std::vector<double> r(idx(g.cells()));
  for (Cell x = 0; x < g.cells(); ++x) r[idx(x)] = -(1.0 + g.col(x) + g.row(x));
  r[idx(g.index(k - 1, k - 1))] = -10.0;
  return RewardModel(std::move(r));
}

RewardModel grid2_rewards(int k, double lambda) {
  if (k < 2) throw std::invalid_argument("grid2_rewards: k must be at least 2");
  if (!(lambda > 0.0)) throw std::invalid_argument("grid2_rewards: lambda must be positive");
  double inv_c = 0.0;
  for (int i = 1; i <= k; ++i) inv_c += std::exp(-lambda * i);
  const GridSpec g(k);
  std::vector<double> r(idx(g.cells()));
  for (Cell x = 0; x < g.cells(); ++x) r[idx(x)] = -std::exp(-lambda * (g.col(x) + 1)) / inv_c;
  return RewardModel(std::move(r));
}

FireState generate_fire(const FireModel& model, int k, int fuel, Cell origin, int steps, Rng& rng) {
  FireState s(model.cells());
  std::fill(s.fuel.begin(), s.fuel.end(), fuel);
  s.burning[idx(origin)] = 1;
  const Action none = Action::idle(0);
  for (int t = 0; t < steps; ++t) s = model.step(s, none, rng).next;
  for (int& f : s.fuel) f = scale_fuel(f, k);
  return s;
}

FireState gen_grid1_initial(int k, const SpreadModel& spread, double p, Rng& rng) {
  const GridSpec g(k);
  const FireModel m(g, spread, RewardModel(std::vector<double>(idx(g.cells()), 0.0)), 0);
  const int fuel = initial_fuel_level(k, p, 2.0);
  return generate_fire(m, k, fuel, g.index(0, 0), fuel, rng);
}

FireState gen_grid2_initial(int k, const SpreadModel& spread, double p, Rng& rng) {
  const GridSpec g(k);
  const FireModel m(g, spread, RewardModel(std::vector<double>(idx(g.cells()), 0.0)), 0);
  const int fuel = initial_fuel_level(k, p, 4.0);
  const int mid = (k + 1) / 2 - 1;
  return generate_fire(m, k, fuel, g.index(mid, mid), fuel, rng);
}

GridSpec Scenario::grid() const { return GridSpec(k, neighborhood); }

SpreadModel Scenario::spread() const {
  SpreadModel s = SpreadModel::uniform(grid(), p_default, q_default);
  for (const auto& e : p_edges) s.set_ignition(e.to, e.from, e.p);
  return s;
}

RewardModel Scenario::reward_model() const {
  switch (family) {
    case Family::grid1: return grid1_rewards(k);
    case Family::grid2: return grid2_rewards(k, lambda);
    case Family::custom: return RewardModel(rewards);
  }
  return RewardModel(rewards);
}

FireModel Scenario::model() const { return FireModel(grid(), spread(), reward_model(), teams); }

int Scenario::generation_steps() const {
  if (family == Family::custom) return 0;
  return initial_fuel_level(k, p_default, family == Family::grid1 ? 2.0 : 4.0);
}

int Scenario::step_cap() const {
  int horizon = p_default > 0.0 ? initial_fuel_level(k, p_default, 2.0) : 0;
  if (initial) horizon = std::max(horizon, *std::max_element(initial->fuel.begin(), initial->fuel.end()) + 1);
  return 10 * std::max(horizon, 1);
}

FireState Scenario::initial_state(std::uint64_t seed) const {
  if (initial) return *initial;
  Rng rng(seed);
  if (family == Family::grid1) return gen_grid1_initial(k, spread(), p_default, rng);
  return gen_grid2_initial(k, spread(), p_default, rng);
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario: expected a JSON object");
  static const std::unordered_set<std::string> known = {"family", "k",      "neighborhood", "P_default", "Q_default",
                                                        "lambda", "teams",  "rewards",      "fuel",      "burning",
                                                        "P_edges", "mcts",  "mo"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ConfigError(key + ": unknown field");
  }
  Scenario s;
  const bool has_state = doc.contains("fuel") || doc.contains("burning");
  if (doc.contains("family")) {
    if (!doc["family"].is_string()) throw ConfigError("family: expected \"grid1\", \"grid2\" or \"custom\"");
    const auto f = doc["family"].get<std::string>();
    if (f == "grid1") {
      s.family = Family::grid1;
    } else if (f == "grid2") {
      s.family = Family::grid2;
    } else if (f == "custom") {
      s.family = Family::custom;
    } else {
      throw ConfigError("family: unknown family \"" + f + "\"");
    }
  } else {
    s.family = has_state ? Family::custom : Family::grid1;
  }
  s.p_default = s.family == Family::grid2 ? 0.02 : 0.06;

  if (!doc.contains("k")) throw ConfigError("k: required field is missing");
  s.k = integer(doc, "k");
  if (s.k < 1 || (s.family != Family::custom && s.k < 2)) throw ConfigError("k: grid side is too small");
  if (doc.contains("neighborhood")) {
    if (!doc["neighborhood"].is_string()) throw ConfigError("neighborhood: expected \"four\" or \"eight\"");
    try {
      s.neighborhood = neighborhood_from_string(doc["neighborhood"].get<std::string>());
    } catch (const std::exception&) {
      throw ConfigError("neighborhood: expected \"four\" or \"eight\"");
    }
  }
  if (doc.contains("P_default")) s.p_default = number(doc, "P_default");
  if (doc.contains("Q_default")) s.q_default = number(doc, "Q_default");
  if (!(s.p_default >= 0.0 && s.p_default <= 1.0)) throw ConfigError("P_default: must lie in [0,1]");
  if (!(s.q_default >= 0.0 && s.q_default <= 1.0)) throw ConfigError("Q_default: must lie in [0,1]");
  if (s.family != Family::custom && !(s.p_default > 0.0)) throw ConfigError("P_default: must be positive for generated fires");
  if (!doc.contains("teams")) throw ConfigError("teams: required field is missing");
  s.teams = integer(doc, "teams");
  if (s.teams < 0) throw ConfigError("teams: must be nonnegative");

  if (s.family == Family::grid2) {
    if (!doc.contains("lambda")) throw ConfigError("lambda: required for family grid2");
    s.lambda = number(doc, "lambda");
    if (!(s.lambda > 0.0)) throw ConfigError("lambda: must be positive");
  } else if (doc.contains("lambda")) {
    throw ConfigError("lambda: only valid for family grid2");
  }

  const int cells = s.k * s.k;
  if (s.family == Family::custom) {
    for (const char* key : {"rewards", "fuel", "burning"}) {
      if (!doc.contains(key)) throw ConfigError(std::string(key) + ": required for a custom grid");
    }
    const auto& r = doc["rewards"];
    if (!r.is_array() || static_cast<int>(r.size()) != cells) {
      throw ConfigError("rewards: expected an array of " + std::to_string(cells) + " numbers");
    }
    for (const auto& v : r) {
      if (!v.is_number()) throw ConfigError("rewards: expected numbers");
      if (v.get<double>() > 0.0) throw ConfigError("rewards: values must be nonpositive");
      s.rewards.push_back(v.get<double>());
    }
    s.initial = state_from_json(doc, cells);
  } else {
    for (const char* key : {"rewards", "fuel", "burning"}) {
      if (doc.contains(key)) throw ConfigError(std::string(key) + ": not allowed for a generated family");
    }
  }

  if (doc.contains("P_edges")) {
    const auto& edges = doc["P_edges"];
    if (!edges.is_array()) throw ConfigError("P_edges: expected an array of {to, from, p}");
    const GridSpec g(s.k, s.neighborhood);
    for (const auto& e : edges) {
      if (!e.is_object() || !e.contains("to") || !e.contains("from") || !e.contains("p") || e.size() != 3) {
        throw ConfigError("P_edges: each entry needs exactly to, from and p");
      }
      if (!e["to"].is_number_integer() || !e["from"].is_number_integer() || !e["p"].is_number()) {
        throw ConfigError("P_edges: to/from must be integers and p a number");
      }
      EdgeOverride o{e["to"].get<int>(), e["from"].get<int>(), e["p"].get<double>()};
      if (!g.contains(o.to) || !g.contains(o.from) || !g.adjacent(o.to, o.from)) {
        throw ConfigError("P_edges: cells must be grid neighbors");
      }
      if (!(o.p >= 0.0 && o.p <= 1.0)) throw ConfigError("P_edges: p must lie in [0,1]");
      s.p_edges.push_back(o);
    }
  }
  if (doc.contains("mcts")) s.mcts = mcts_config_from_json(doc["mcts"]);
  if (doc.contains("mo")) s.mo = fluid::mo_config_from_json(doc["mo"]);
  if (s.initial) s.model().validate(*s.initial);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("scenario: " + path + " is not valid JSON (" + e.what() + ")");
  }
  return scenario_from_json(doc);
}

nlohmann::json to_json(const Scenario& s) {
  nlohmann::json doc = {{"family", to_string(s.family)},
                        {"k", s.k},
                        {"neighborhood", to_string(s.neighborhood)},
                        {"P_default", s.p_default},
                        {"Q_default", s.q_default},
                        {"teams", s.teams},
                        {"mcts", to_json(s.mcts)},
                        {"mo", fluid::to_json(s.mo)}};
  if (s.family == Family::grid2) doc["lambda"] = s.lambda;
  if (s.family == Family::custom) {
    doc["rewards"] = s.rewards;
    const auto st = state_to_json(*s.initial);
    doc["fuel"] = st["fuel"];
    doc["burning"] = st["burning"];
  }
  if (!s.p_edges.empty()) {
    auto& arr = doc["P_edges"] = nlohmann::json::array();
    for (const auto& e : s.p_edges) arr.push_back({{"to", e.to}, {"from", e.from}, {"p", e.p}});
  }
  return doc;
}

}  // namespace wildfire
