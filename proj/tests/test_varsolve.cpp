#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lorcap/error.hpp"
#include "lorcap/varsolve.hpp"

using namespace lorcap;

namespace {
GridProblem standard(double p, double q, int nodes) {
  GridProblem g;
  g.conductor = ConductorUnion1D({{0.0, 1.0}}, {{0.4, 0.6}});
  g.nodes = nodes;
  g.idx = LorentzIndex(p, q);
  return g;
}

// Feasible but far from optimal: u squared on every rising gap.
std::vector<double> curved_start(const Grid& grid) {
  std::vector<double> u = initial_guess(grid);
  for (double& v : u) v = v * v;
  return u;
}
}  // namespace

TEST_CASE("grid layout") {
  const Grid grid = build_grid(standard(2.0, 2.0, 1001));
  CHECK(grid.x.front() == 0.0);
  CHECK(grid.x.back() == 1.0);
  CHECK(std::count(grid.x.begin(), grid.x.end(), 0.4) == 1);
  CHECK(std::count(grid.x.begin(), grid.x.end(), 0.6) == 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.x[i] >= 0.4 && grid.x[i] <= 0.6) CHECK((grid.fixed[i] && grid.fixed_value[i] == 1.0));
  }
  CHECK((grid.fixed.front() && grid.fixed_value.front() == 0.0));
  CHECK_THROWS_AS(build_grid(standard(2.0, 2.0, 2)), ContractError);
}

TEST_CASE("objective examples") {
  GridProblem g = standard(2.0, 2.0, 1001);
  const Grid grid = build_grid(g);
  CHECK(objective(initial_guess(grid), g) == doctest::Approx(5.0).epsilon(1e-12));

  GridProblem coarse = standard(2.0, 2.0, 3);
  const Grid cg = build_grid(coarse);
  CHECK(objective(initial_guess(cg), coarse) >= 5.0 - 1e-12);

  GridProblem empty;
  empty.conductor = ConductorUnion1D({{0.0, 1.0}}, {});
  CHECK(objective(std::vector<double>{}, empty) == 0.0);
}

TEST_CASE("objective rejects infeasible input") {
  GridProblem g = standard(2.0, 2.0, 101);
  const Grid grid = build_grid(g);
  std::vector<double> u = initial_guess(grid);
  u.front() = 0.1;
  CHECK_THROWS_AS(objective(u, g), ContractError);
  CHECK_THROWS_AS(objective(std::vector<double>(3, 0.0), g), ContractError);
}

TEST_CASE("solver matches the exact capacitance for q = p") {
  for (double p : {1.5, 2.0, 3.0}) {
    const SolveResult r = solve_cap(standard(p, p, 2001));
    const double exact = exact_p_cap(Conductor1D(0.0, 0.4, 0.6, 1.0), p);
    CAPTURE(p);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-2));
    CHECK(r.bracket.lower <= r.value);
  }
}

TEST_CASE("solver examples") {
  CHECK(solve_cap(standard(2.0, 2.0, 1001)).value == doctest::Approx(5.0).epsilon(1e-2));
  CHECK(solve_cap(standard(3.0, 3.0, 1001)).value == doctest::Approx(12.5).epsilon(1e-2));
  const SolveResult r = solve_cap(standard(2.0, 1.0, 1001));
  CHECK(r.value >= 2.5);
  CHECK(r.value <= 20.0 * (1.0 + 1e-6));
  CHECK(r.bracket.lower == doctest::Approx(2.5));
  CHECK_THROWS_AS(solve_cap(standard(2.0, LorentzIndex::kInf, 101)), ContractError);
}

TEST_CASE("descent from a curved start") {
  for (double q : {1.0, 2.0, 4.0}) {
    GridProblem g = standard(2.0, q, 401);
    const Grid grid = build_grid(g);
    g.start = curved_start(grid);
    const double start_value = std::pow(quasinorm(gradient_cells(grid, g.start), g.idx), 2.0);
    const SolveResult r = solve_cap(g);
    CAPTURE(q);
    CHECK(r.value < start_value);
    for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] <= r.history[k - 1]);
    CHECK_NOTHROW(check_feasible(grid, r.u));
    for (double v : r.u) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(std::pow(quasinorm(gradient_cells(grid, r.u), g.idx), 2.0) == doctest::Approx(r.value).epsilon(1e-12));
    if (q == 2.0) CHECK(r.value == doctest::Approx(5.0).epsilon(1e-2));
  }
}

TEST_CASE("truncation to [0,1] never increases the objective") {
  GridProblem g = standard(2.0, 1.0, 201);
  const Grid grid = build_grid(g);
  std::vector<double> u = initial_guess(grid);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!grid.fixed[i]) u[i] = 1.6 * u[i] - 0.3 + 0.2 * std::sin(40.0 * grid.x[i]);
  }
  std::vector<double> clamped = u;
  for (double& v : clamped) v = std::clamp(v, 0.0, 1.0);
  for (double q : {1.0, 2.0, 4.0}) {
    g.idx = LorentzIndex(2.0, q);
    CHECK(objective(clamped, g) <= objective(u, g) * (1.0 + 1e-12));
  }
  const SolveResult r = solve_cap(standard(2.0, 4.0, 201));
  std::vector<double> rc = r.u;
  for (double& v : rc) v = std::clamp(v, 0.0, 1.0);
  CHECK(rc == r.u);
}

TEST_CASE("refinement stability") {
  for (auto [p, q] : {std::pair{2.0, 2.0}, {3.0, 3.0}, {2.0, 1.0}, {1.5, 1.0}, {2.0, 4.0}}) {
    const double coarse = solve_cap(standard(p, q, 501)).value;
    const double fine = solve_cap(standard(p, q, 1001)).value;
    CAPTURE(p);
    CAPTURE(q);
    CHECK(fine == doctest::Approx(coarse).epsilon(1e-2));
  }
}

TEST_CASE("unions and brackets") {
  GridProblem g;
  g.conductor = ConductorUnion1D({{0.0, 0.5}, {0.6, 1.0}}, {{0.1, 0.2}, {0.7, 0.8}});
  g.nodes = 801;
  g.idx = LorentzIndex(2.0, 2.0);
  const SolveResult r = solve_cap(g);
  CHECK(r.value == doctest::Approx(85.0 / 3.0).epsilon(1e-2));
  for (double q : {1.0, 4.0}) {
    g.idx = LorentzIndex(2.0, q);
    const SolveResult s = solve_cap(g);
    const CapBracket b = cap_union(g.conductor, g.idx);
    CHECK(s.value >= b.lower);
    CHECK(s.value <= b.upper * (1.0 + 1e-6));
    CHECK(s.bracket.upper == s.value);
  }
}

TEST_CASE("solver is deterministic") {
  GridProblem g = standard(2.0, 4.0, 301);
  const SolveResult a = solve_cap(g);
  g.seed = 99;
  const SolveResult b = solve_cap(g);
  CHECK(a.value == b.value);
  CHECK(a.u == b.u);
}
