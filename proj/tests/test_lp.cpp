#include <doctest.h>

#include <random>

#include "oracles/lp_oracles.hpp"
#include "oracles/random_lp.hpp"
#include "wildfire/lp.hpp"

using namespace wildfire::lp;

TEST_CASE("single variable maximum") {
  LpProblem p;
  const int x = p.add_column("x", -1.0, 0.0, kInf);
  const int r = p.add_row("c", RowSense::le, 3.0);
  p.add_coef(r, x, 1.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(-3.0));
}

TEST_CASE("contradictory rows are infeasible") {
  LpProblem p;
  const int x = p.add_column("x", 0.0, 0.0, kInf);
  p.add_coef(p.add_row("a", RowSense::ge, 2.0), x, 1.0);
  p.add_coef(p.add_row("b", RowSense::le, 1.0), x, 1.0);
  CHECK(solve_lp(p).status == Status::infeasible);
}

TEST_CASE("unbounded direction is reported") {
  LpProblem p;
  const int x = p.add_column("x", -1.0, 0.0, kInf);
  const int y = p.add_column("y", 0.0, 0.0, kInf);
  p.add_coef(p.add_row("a", RowSense::ge, 1.0), x, 1.0);
  p.add_coef(p.add_row("b", RowSense::le, 4.0), y, 1.0);
  CHECK(solve_lp(p).status == Status::unbounded);
}

TEST_CASE("free and negative-bounded columns") {
  LpProblem p;
  const int x = p.add_column("x", 1.0, -kInf, kInf);
  const int y = p.add_column("y", 1.0, -5.0, -1.0);
  p.add_coef(p.add_row("a", RowSense::ge, -3.0), x, 1.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.x[static_cast<std::size_t>(x)] == doctest::Approx(-3.0));
  CHECK(s.x[static_cast<std::size_t>(y)] == doctest::Approx(-5.0));
  CHECK(s.objective == doctest::Approx(-8.0));
}

TEST_CASE("fixed columns and empty problems") {
  LpProblem p;
  p.add_column("x", 2.0, 1.5, 1.5);
  auto s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(solve_lp(LpProblem{}).status == Status::optimal);
}

TEST_CASE("Beale's cycling example terminates") {
  // Dantzig pricing with lowest-index ties cycles on this instance.
  LpProblem p;
  const int x4 = p.add_column("x4", -0.75, 0.0, kInf);
  const int x5 = p.add_column("x5", 20.0, 0.0, kInf);
  const int x6 = p.add_column("x6", -0.5, 0.0, kInf);
  const int x7 = p.add_column("x7", 6.0, 0.0, kInf);
  const int r1 = p.add_row("r1", RowSense::le, 0.0);
  const int r2 = p.add_row("r2", RowSense::le, 0.0);
  const int r3 = p.add_row("r3", RowSense::le, 1.0);
  p.add_coef(r1, x4, 0.25);
  p.add_coef(r1, x5, -8.0);
  p.add_coef(r1, x6, -1.0);
  p.add_coef(r1, x7, 9.0);
  p.add_coef(r2, x4, 0.5);
  p.add_coef(r2, x5, -12.0);
  p.add_coef(r2, x6, -0.5);
  p.add_coef(r2, x7, 3.0);
  p.add_coef(r3, x6, 1.0);
  for (bool scale : {true, false}) {
    SimplexOptions o;
    o.scale = scale;
    o.degenerate_switch = 0;
    const auto s = solve_lp(p, o);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.objective == doctest::Approx(-1.25));
  }
}

TEST_CASE("iteration limit is a status, not an answer") {
  std::mt19937_64 rng(7);
  const LpProblem p = oracle::random_lp(rng);
  SimplexOptions o;
  o.max_iterations = 0;
  const auto s = solve_lp(p, o);
  const auto full = solve_lp(p);
  if (full.iterations > 0) CHECK(s.status == Status::iteration_limit);
}

TEST_CASE("random LPs agree with vertex enumeration") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 25; ++k) {
    CAPTURE(k);
    const LpProblem p = oracle::random_lp(rng);
    const auto ref = oracle::vertex_enumeration(p);
    const auto s = solve_lp(p);
    if (!ref.feasible) {
      CHECK(s.status == Status::infeasible);
      continue;
    }
    REQUIRE(s.status == Status::optimal);
    CHECK(std::abs(s.objective - ref.objective) <= 1e-6);
    CHECK(p.max_violation(s.x) <= 1e-6);
  }
}

TEST_CASE("upper-bounded columns agree with vertex enumeration") {
  std::mt19937_64 rng(99);
  oracle::RandomLpOptions o;
  o.vars = 6;
  o.rows = 5;
  o.upper_bounded = 4;
  for (int k = 0; k < 25; ++k) {
    CAPTURE(k);
    const LpProblem p = oracle::random_lp(rng, o);
    const auto ref = oracle::vertex_enumeration(p);
    const auto s = solve_lp(p);
    if (!ref.feasible) {
      CHECK(s.status == Status::infeasible);
      continue;
    }
    REQUIRE(s.status == Status::optimal);
    CHECK(std::abs(s.objective - ref.objective) <= 1e-6);
  }
}

TEST_CASE("nonnegative costs agree with vertex enumeration") {
  // The slack basis is dual feasible for these, so the dual method runs first.
  std::mt19937_64 rng(31);
  int nontrivial = 0;
  for (int k = 0; k < 40; ++k) {
    CAPTURE(k);
    oracle::RandomLpOptions o;
    o.upper_bounded = k % 3 == 0 ? 4 : 0;
    LpProblem p = oracle::random_lp(rng, o);
    for (int j = 0; j < p.num_cols(); ++j) p.set_cost(j, std::abs(p.cost(j)));
    const auto ref = oracle::vertex_enumeration(p);
    const auto s = solve_lp(p);
    if (!ref.feasible) {
      CHECK(s.status == Status::infeasible);
      continue;
    }
    REQUIRE(s.status == Status::optimal);
    CHECK(std::abs(s.objective - ref.objective) <= 1e-6);
    CHECK(p.max_violation(s.x) <= 1e-6);
    if (ref.objective > 1e-9) ++nontrivial;
  }
  CHECK(nontrivial >= 10);
}

TEST_CASE("dual start with an infeasible slack basis") {
  // min x + 2y  s.t.  x + y >= 3, x - y <= 1, y <= 5
  LpProblem p;
  const int x = p.add_column("x", 1.0, 0.0, kInf);
  const int y = p.add_column("y", 2.0, 0.0, 5.0);
  const int r1 = p.add_row("a", RowSense::ge, 3.0);
  p.add_coef(r1, x, 1.0);
  p.add_coef(r1, y, 1.0);
  const int r2 = p.add_row("b", RowSense::le, 1.0);
  p.add_coef(r2, x, 1.0);
  p.add_coef(r2, y, -1.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.x[0] == doctest::Approx(2.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(4.0));

  p.set_bounds(y, 0.0, 0.5);
  CHECK(solve_lp(p).status == Status::infeasible);
}

TEST_CASE("tableau oracle agrees with vertex enumeration") {
  std::mt19937_64 rng(5);
  oracle::RandomLpOptions o;
  o.vars = 6;
  o.rows = 5;
  for (int k = 0; k < 20; ++k) {
    const LpProblem p = oracle::random_lp(rng, o);
    const auto a = oracle::vertex_enumeration(p);
    const auto b = oracle::tableau_solve(p);
    REQUIRE(a.feasible == (b.status == oracle::TableauStatus::optimal));
    if (a.feasible) CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
  }
}

TEST_CASE("redundant rows") {
  // min -x - y, x + y <= 4, 2x + 2y = 6 twice, 0 = 0.
  LpProblem p;
  p.add_column("x", -1.0, 0.0, kInf);
  p.add_column("y", -1.0, 0.0, 2.0);
  const int cap = p.add_row("cap", RowSense::le, 4.0);
  p.add_coef(cap, 0, 1.0);
  p.add_coef(cap, 1, 1.0);
  for (const char* name : {"e1", "e2"}) {
    const int r = p.add_row(name, RowSense::eq, 6.0);
    p.add_coef(r, 0, 2.0);
    p.add_coef(r, 1, 2.0);
  }
  p.add_row("empty", RowSense::eq, 0.0);
  const auto ref = oracle::vertex_enumeration(p);
  REQUIRE(ref.feasible);
  CHECK(ref.objective == doctest::Approx(-3.0));
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(-3.0));

  // A dependent row with a different right-hand side.
  p.set_rhs(2, 8.0);
  CHECK_FALSE(oracle::vertex_enumeration(p).feasible);
  CHECK(solve_lp(p).status == Status::infeasible);
}

TEST_CASE("badly scaled rows") {
  // Big-M style coefficients spanning many orders of magnitude.
  LpProblem p;
  const int x = p.add_column("x", 1.0, 0.0, kInf);
  const int z = p.add_column("z", 0.0, 0.0, 1.0);
  const int r = p.add_row("m", RowSense::ge, 0.5);
  p.add_coef(r, x, 1.0);
  p.add_coef(r, z, 1e7);
  const int r2 = p.add_row("fix", RowSense::le, 1e-9);
  p.add_coef(r2, z, 1.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(p.max_violation(s.x) <= 1e-6);
  CHECK(s.objective == doctest::Approx(0.49).epsilon(0.05));
}
