#include "wildfire/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace wildfire {

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.n;
  s.median = quantile(values, 0.5);
  s.q1 = quantile(values, 0.25);
  s.q3 = quantile(values, 0.75);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

double sign_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sign_test: samples must be paired");
  int pos = 0, n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    ++n;
    pos += a[i] > b[i];
  }
  if (n == 0) return 1.0;
  const int tail = std::min(pos, n - pos);
  double p = 0.0;
  for (int i = 0; i <= tail; ++i) {
    const double log_c = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
    p += std::exp(log_c - n * std::log(2.0));
  }
  return std::min(1.0, 2.0 * p);
}

BranchingFactor branching_factor(double n_burning, int teams) {
  if (n_burning < 0.0) throw std::invalid_argument("branching_factor: negative burning count");
  if (teams < 1) throw std::invalid_argument("branching_factor: need at least one team");
  const double i = teams;
  const double exact = std::exp(i * std::log(n_burning) - std::lgamma(i + 1.0));
  const double stirling = std::pow(std::numbers::e * n_burning / i, i) / std::sqrt(2.0 * std::numbers::pi * i);
  return {n_burning == 0.0 ? 0.0 : exact, stirling};
}

FireStats initial_fire_stats(const std::vector<FireState>& fires) {
  FireStats st;
  st.samples = static_cast<int>(fires.size());
  if (fires.empty()) return st;
  double burning_fuel = 0.0, unburnt_fuel = 0.0, burning_total = 0.0, burnt_out = 0.0;
  long burning_cells = 0, unburnt_cells = 0;
  for (const auto& s : fires) {
    const int b = s.burning_count();
    burning_total += b;
    st.max_burning = std::max(st.max_burning, b);
    for (Cell x = 0; x < s.cells(); ++x) {
      const int f = s.fuel[static_cast<std::size_t>(x)];
      if (s.is_burning(x)) {
        burning_fuel += f;
        ++burning_cells;
      } else if (f > 0) {
        unburnt_fuel += f;
        ++unburnt_cells;
      } else {
        burnt_out += 1.0;
      }
    }
  }
  st.mean_burning = burning_total / st.samples;
  st.mean_burning_fuel = burning_cells ? burning_fuel / static_cast<double>(burning_cells) : 0.0;
  st.mean_unburnt_fuel = unburnt_cells ? unburnt_fuel / static_cast<double>(unburnt_cells) : 0.0;
  st.mean_burnt_out = burnt_out / st.samples;
  return st;
}

}  // namespace wildfire
