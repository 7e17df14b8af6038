#pragma once

// Grid minimization of ||u'||_{p,q}^p over functions that are 1 on the
// compact part and 0 on the boundary of each open component.
//
// u is piecewise linear on a grid that is uniform inside every gap and has
// nodes at all interval endpoints. |u'| is then a step function with one cell
// per edge, so the objective is an exact Lorentz evaluation. For q <= p the
// objective is a power of a norm (convex). For q > p the solver descends on
// the equivalent f**-norm and keeps the best exact quasinorm seen along the
// way.

#include <cstdint>
#include <vector>

#include "lorcap/cap1d.hpp"
#include "lorcap/lorentz.hpp"
#include "lorcap/step_function.hpp"

namespace lorcap {

struct GridProblem {
  ConductorUnion1D conductor;
  int nodes = 1001;  ///< per open component that holds compact intervals
  LorentzIndex idx{2.0, 2.0};
  double tol = 1e-7;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  double step_scale = 0.05;
  std::vector<double> start;  ///< feasible warm start on build_grid nodes; empty = initial_guess
};

/// Node layout of a GridProblem. Nodes of different components are stored
/// consecutively; edges never join two components.
struct Grid {
  std::vector<double> x;
  std::vector<char> fixed;
  std::vector<double> fixed_value;
  std::vector<std::size_t> edge_from;  ///< edge e joins edge_from[e] and edge_from[e] + 1
  std::vector<double> edge_length;

  std::size_t size() const { return x.size(); }
};

Grid build_grid(const GridProblem& g);

/// Linear interpolation between the constraint values inside every gap.
std::vector<double> initial_guess(const Grid& grid);

/// |u'| on the grid as a step function (one cell per edge).
StepFunction gradient_cells(const Grid& grid, const std::vector<double>& u);

/// Rejects u that does not match the constraints to 1e-12.
void check_feasible(const Grid& grid, const std::vector<double>& u);

/// quasinorm(|u'|)^p for q <= p, norm_starstar(|u'|)^p for q > p.
double objective(const std::vector<double>& u, const GridProblem& g);
double objective(const std::vector<double>& u, const Grid& grid, const LorentzIndex& idx);

struct SolveResult {
  double value = 0.0;              ///< best exact ||u'||_{p,q}^p found
  std::vector<double> nodes;
  std::vector<double> u;           ///< minimizer achieving value
  CapBracket bracket;              ///< certified [lower, upper] for the capacitance
  double surrogate_value = 0.0;    ///< best ||u'||_{(p,q)}^p, q > p only
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;     ///< best value after each iteration
};

SolveResult solve_cap(const GridProblem& g);

}  // namespace lorcap
