#include "lorcap/varsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "lorcap/error.hpp"

namespace lorcap {

Grid build_grid(const GridProblem& g) {
  if (g.nodes < 3) throw ContractError("grid needs at least 3 nodes per component");
  Grid grid;
  auto add_node = [&](double x, bool fixed, double value) {
    grid.x.push_back(x);
    grid.fixed.push_back(fixed ? 1 : 0);
    grid.fixed_value.push_back(value);
  };
  auto add_edge = [&]() {
    const std::size_t from = grid.x.size() - 2;
    grid.edge_from.push_back(from);
    grid.edge_length.push_back(grid.x[from + 1] - grid.x[from]);
  };

  for (const auto& h : g.conductor.hulls()) {
    if (!h.has_compact) continue;  // u = 0 there is optimal and contributes nothing
    std::vector<Interval> inside;
    for (const Interval& k : g.conductor.compact()) {
      if (h.component.contains_strictly(k)) inside.push_back(k);
    }
    // Alternating free gaps and compact intervals between the component ends.
    std::vector<double> pts{h.component.left};
    for (const Interval& k : inside) {
      pts.push_back(k.left);
      pts.push_back(k.right);
    }
    pts.push_back(h.component.right);

    double free_length = 0.0;
    int compact_edges = 0;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      if (s % 2 == 0) {
        free_length += pts[s + 1] - pts[s];
      } else if (pts[s + 1] > pts[s]) {
        ++compact_edges;
      }
    }
    const int budget = std::max(1, g.nodes - 1 - compact_edges);

    add_node(pts.front(), true, 0.0);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      const double left = pts[s];
      const double right = pts[s + 1];
      const bool is_gap = s % 2 == 0;
      const double end_value = (s + 2 == pts.size()) ? 0.0 : 1.0;
      if (!is_gap) {
        if (right > left) {
          add_node(right, true, 1.0);
          add_edge();
        }
        continue;
      }
      const int n = std::max(
          1, static_cast<int>(std::lround(budget * (right - left) / free_length)));
      for (int i = 1; i < n; ++i) {
        add_node(left + (right - left) * static_cast<double>(i) / n, false, 0.0);
        add_edge();
      }
      add_node(right, true, end_value);
      add_edge();
    }
  }
  return grid;
}

std::vector<double> initial_guess(const Grid& grid) {
  std::vector<double> u(grid.size(), 0.0);
  std::size_t i = 0;
  while (i < grid.size()) {
    if (grid.fixed[i]) {
      u[i] = grid.fixed_value[i];
      ++i;
      continue;
    }
    // Free run (i0, i1) between two fixed nodes of the same component.
    const std::size_t i0 = i - 1;
    std::size_t i1 = i;
    while (!grid.fixed[i1]) ++i1;
    const double x0 = grid.x[i0];
    const double x1 = grid.x[i1];
    const double v0 = grid.fixed_value[i0];
    const double v1 = grid.fixed_value[i1];
    for (std::size_t j = i; j < i1; ++j) u[j] = v0 + (v1 - v0) * (grid.x[j] - x0) / (x1 - x0);
    i = i1;
  }
  return u;
}

void check_feasible(const Grid& grid, const std::vector<double>& u) {
  if (u.size() != grid.size()) {
    throw ContractError("nodal vector has " + std::to_string(u.size()) + " entries, grid has " +
                        std::to_string(grid.size()));
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) throw ContractError("nodal value " + std::to_string(i) + " is not finite");
    if (grid.fixed[i] && std::abs(u[i] - grid.fixed_value[i]) > 1e-12) {
      throw ContractError("node " + std::to_string(i) + " violates its constraint value " +
                          std::to_string(grid.fixed_value[i]));
    }
  }
}

StepFunction gradient_cells(const Grid& grid, const std::vector<double>& u) {
  std::vector<Cell> cells;
  cells.reserve(grid.edge_from.size());
  for (std::size_t e = 0; e < grid.edge_from.size(); ++e) {
    const std::size_t i = grid.edge_from[e];
    cells.push_back({std::abs(u[i + 1] - u[i]) / grid.edge_length[e], grid.edge_length[e]});
  }
  return StepFunction(std::move(cells));
}

namespace {

bool uses_surrogate(const LorentzIndex& idx) { return idx.q_infinite() || idx.q() > idx.p(); }

double exact_value(const Grid& grid, const std::vector<double>& u, const LorentzIndex& idx) {
  return std::pow(quasinorm(gradient_cells(grid, u), idx), idx.p());
}

// Edge order for the rearrangement: by slope descending, ties by lowest index.
std::vector<std::size_t> sorted_edges(const std::vector<double>& slope) {
  std::vector<std::size_t> order(slope.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return slope[a] > slope[b]; });
  return order;
}

// Subgradient of ||c||_{p,q}^p with respect to the edge slopes c, q <= p.
// ||c||^q = sum_k c_(k)^q lambda_k with lambda_k = (p/q)(B_k^{q/p} - B_{k-1}^{q/p}).
std::vector<double> quasinorm_subgradient(const std::vector<double>& slope,
                                          const std::vector<double>& length,
                                          const LorentzIndex& idx) {
  const double p = idx.p();
  const double q = idx.q();
  const auto order = sorted_edges(slope);
  std::vector<double> lambda(slope.size());
  double left = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t e = order[k];
    const double right = left + length[e];
    lambda[e] = (p / q) * (std::pow(right, q / p) - std::pow(left, q / p));
    sum += std::pow(slope[e], q) * lambda[e];
    left = right;
  }
  std::vector<double> grad(slope.size(), 0.0);
  if (sum <= 0.0) return grad;
  const double outer = p * std::pow(sum, p / q - 1.0);
  for (std::size_t e = 0; e < slope.size(); ++e) {
    grad[e] = outer * std::pow(slope[e], q - 1.0) * lambda[e];
  }
  return grad;
}

// Value and gradient of ||c||_{(p,q)}^p, q > p, with a fixed Gauss rule on
// each piece of f**. Piece k holds f** = c_k + d_k / t on [B_{k-1}, B_k):
//   dI/dc_k = q [ P_k - B_{k-1} Q_k + w_k (sum_{j>k} Q_j + Q_tail) ]
// with P_j = int t^{q/p-1} F^{q-1}, Q_j = int t^{q/p-2} F^{q-1} over piece j.
double starstar_value_and_gradient(const std::vector<double>& slope,
                                   const std::vector<double>& length,
                                   const LorentzIndex& idx, std::vector<double>& grad) {
  using Rule = boost::math::quadrature::gauss<double, 10>;
  const double p = idx.p();
  const double q = idx.q();
  const double e = q / p;
  const auto order = sorted_edges(slope);
  const std::size_t n = order.size();
  std::vector<double> P(n), Q(n), left(n);
  double integral_value = 0.0;  // I = int t^{q/p-1} F^q
  double S = 0.0;
  double B = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t edge = order[k];
    const double c = slope[edge];
    const double w = length[edge];
    const double a = B;
    const double b = B + w;
    left[k] = a;
    if (k == 0 || a == 0.0) {
      // F = c on [0, b).
      integral_value += std::pow(c, q) * (p / q) * std::pow(b, e);
      P[k] = std::pow(c, q - 1.0) * (p / q) * std::pow(b, e);
      Q[k] = std::pow(c, q - 1.0) * std::pow(b, e - 1.0) / (e - 1.0);
    } else {
      const double d = S - c * a;
      double iv = 0.0, pv = 0.0, qv = 0.0;
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      const auto& x = Rule::abscissa();
      const auto& wts = Rule::weights();
      for (std::size_t j = 0; j < x.size(); ++j) {
        for (int sgn : {-1, 1}) {
          if (j == 0 && sgn == 1 && x[0] == 0.0) continue;
          const double t = mid + sgn * half * x[j];
          const double F = c + d / t;
          const double base = std::pow(t, e - 1.0) * std::pow(F, q - 1.0);
          iv += wts[j] * base * F;
          pv += wts[j] * base;
          qv += wts[j] * base / t;
        }
      }
      integral_value += half * iv;
      P[k] = half * pv;
      Q[k] = half * qv;
    }
    S += c * w;
    B = b;
  }
  const double M = B;
  integral_value += std::pow(S, q) * std::pow(M, e - q) / (q - e);
  const double q_tail = S > 0.0 ? std::pow(S, q - 1.0) * std::pow(M, e - q) / (q - e) : 0.0;

  grad.assign(n, 0.0);
  if (integral_value <= 0.0) return 0.0;
  const double outer = (p / q) * std::pow(integral_value, p / q - 1.0);
  double suffix = q_tail;
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t edge = order[k];
    const double dI = q * (P[k] - left[k] * Q[k] + length[edge] * suffix);
    grad[edge] = outer * dI;
    suffix += Q[k];
  }
  return std::pow(integral_value, p / q);
}

}  // namespace

double objective(const std::vector<double>& u, const Grid& grid, const LorentzIndex& idx) {
  check_feasible(grid, u);
  const StepFunction cells = gradient_cells(grid, u);
  const double n = uses_surrogate(idx) ? norm_starstar(cells, idx) : quasinorm(cells, idx);
  return std::pow(n, idx.p());
}

double objective(const std::vector<double>& u, const GridProblem& g) {
  return objective(u, build_grid(g), g.idx);
}

SolveResult solve_cap(const GridProblem& g) {
  if (g.idx.q_infinite()) throw ContractError("solve_cap: q = inf is not solved, bounds only");
  if (g.max_iters < 1) throw ContractError("solve_cap: max_iters must be positive");
  const Grid grid = build_grid(g);
  const LorentzIndex& idx = g.idx;
  const bool surrogate = uses_surrogate(idx);
  const CapBracket bounds = cap_union(g.conductor, idx);

  SolveResult result;
  result.nodes = grid.x;
  std::vector<double> u = initial_guess(grid);
  if (!g.start.empty()) {
    check_feasible(grid, g.start);
    u = g.start;
  }
  result.u = u;
  if (grid.edge_from.empty()) {
    result.converged = true;
    result.bracket = {0.0, 0.0};
    return result;
  }

  const std::size_t n_edges = grid.edge_from.size();
  std::vector<double> slope(n_edges), sign(n_edges);
  std::vector<double> edge_grad;

  // Runs of consecutive edges between two fixed nodes. Descent acts on the
  // increments d_e = u[i+1] - u[i]; each run keeps its prescribed total, so
  // the projection subtracts the mean excess over the run.
  struct Run {
    std::size_t first_edge, end_edge;
    double total;
  };
  std::vector<Run> runs;
  for (std::size_t e = 0; e < n_edges;) {
    const std::size_t i0 = grid.edge_from[e];
    std::size_t f = e;
    while (!grid.fixed[grid.edge_from[f] + 1]) ++f;
    runs.push_back({e, f + 1, grid.fixed_value[grid.edge_from[f] + 1] - grid.fixed_value[i0]});
    e = f + 1;
  }
  std::vector<double> delta(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) {
    delta[e] = u[grid.edge_from[e] + 1] - u[grid.edge_from[e]];
  }
  // Clamping to [0,1] is a truncation and never increases the objective; the
  // increments themselves stay unclamped so the projection remains exact.
  auto clamped = [&]() {
    std::vector<double> raw(grid.size(), 0.0);
    for (const Run& r : runs) {
      std::size_t i = grid.edge_from[r.first_edge];
      raw[i] = grid.fixed_value[i];
      for (std::size_t e = r.first_edge; e < r.end_edge; ++e, ++i) {
        raw[i + 1] = grid.fixed[i + 1] ? grid.fixed_value[i + 1] : raw[i] + delta[e];
      }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!grid.fixed[i]) raw[i] = std::clamp(raw[i], 0.0, 1.0);
    }
    return raw;
  };

  // Returns the value being descended and fills edge_grad (d value / d slope).
  auto evaluate = [&]() {
    for (std::size_t e = 0; e < n_edges; ++e) {
      slope[e] = std::abs(delta[e]) / grid.edge_length[e];
      sign[e] = delta[e] > 0.0 ? 1.0 : (delta[e] < 0.0 ? -1.0 : 0.0);
    }
    if (surrogate) return starstar_value_and_gradient(slope, grid.edge_length, idx, edge_grad);
    edge_grad = quasinorm_subgradient(slope, grid.edge_length, idx);
    std::vector<Cell> cells(n_edges);
    for (std::size_t e = 0; e < n_edges; ++e) cells[e] = {slope[e], grid.edge_length[e]};
    return std::pow(quasinorm(StepFunction(std::move(cells)), idx), idx.p());
  };

  u = clamped();
  result.u = u;
  double best = exact_value(grid, u, idx);
  double best_surrogate = surrogate ? evaluate() : best;
  const double f0 = surrogate ? best_surrogate : evaluate();
  double step0 = 0.0;
  double best_at_window_start = best;
  const int window = 100;
  std::vector<double> grad(n_edges);

  for (int k = 1; k <= g.max_iters; ++k) {
    const double fk = evaluate();
    if (surrogate) best_surrogate = std::min(best_surrogate, fk);
    double norm2 = 0.0;
    for (const Run& r : runs) {
      double mean = 0.0;
      for (std::size_t e = r.first_edge; e < r.end_edge; ++e) {
        grad[e] = edge_grad[e] * sign[e] / grid.edge_length[e];
        mean += grad[e];
      }
      mean /= static_cast<double>(r.end_edge - r.first_edge);
      for (std::size_t e = r.first_edge; e < r.end_edge; ++e) {
        grad[e] -= mean;
        norm2 += grad[e] * grad[e];
      }
    }
    result.iterations = k;
    if (norm2 == 0.0) {
      result.converged = true;
      result.history.push_back(best);
      break;
    }
    const double gnorm = std::sqrt(norm2);
    // Diminishing normalized steps c / sqrt(k); c is fixed on the first
    // iteration from the initial objective and gradient.
    if (step0 == 0.0) step0 = g.step_scale * f0 / gnorm;
    const double step = step0 / std::sqrt(static_cast<double>(k)) / gnorm;
    for (const Run& r : runs) {
      double excess = -r.total;
      for (std::size_t e = r.first_edge; e < r.end_edge; ++e) {
        delta[e] -= step * grad[e];
        excess += delta[e];
      }
      excess /= static_cast<double>(r.end_edge - r.first_edge);
      for (std::size_t e = r.first_edge; e < r.end_edge; ++e) delta[e] -= excess;
    }
    u = clamped();
    const double value = exact_value(grid, u, idx);
    if (value < best) {
      best = value;
      result.u = u;
    }
    result.history.push_back(best);
    if (k % window == 0) {
      if (best_at_window_start - best <= g.tol * best_at_window_start) {
        result.converged = true;
        break;
      }
      best_at_window_start = best;
    }
  }

  result.value = best;
  result.surrogate_value = surrogate ? best_surrogate : best;
  result.bracket = {std::min(bounds.lower, best), best};
  return result;
}

}  // namespace lorcap
