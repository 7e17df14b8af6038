#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "lorcap/cap1d.hpp"
#include "lorcap/conductor.hpp"
#include "lorcap/lorentz.hpp"
#include "lorcap/step_function.hpp"
#include "lorcap/twoweight.hpp"
#include "lorcap/varsolve.hpp"

namespace py = pybind11;
using namespace lorcap;

namespace {

using Cells = std::vector<std::pair<double, double>>;
using Intervals = std::vector<std::pair<double, double>>;

StepFunction to_step(const Cells& cells) {
  std::vector<Cell> out;
  out.reserve(cells.size());
  for (const auto& [v, w] : cells) out.push_back({v, w});
  return StepFunction(std::move(out));
}

Cells from_step(const StepFunction& f) {
  Cells out;
  for (const Cell& c : f.cells()) out.emplace_back(c.value, c.weight);
  return out;
}

std::vector<Interval> to_intervals(const Intervals& v) {
  std::vector<Interval> out;
  for (const auto& [l, r] : v) out.push_back({l, r});
  return out;
}

ConvexPhi to_phi(double power, const std::optional<Intervals>& knots) {
  if (knots) return ConvexPhi::piecewise(*knots);
  return ConvexPhi::power(power);
}

Measure1D to_measure(const Intervals& atoms, const std::vector<double>& breakpoints,
                     const std::vector<double>& density) {
  std::vector<Measure1D::Atom> a;
  for (const auto& [x, m] : atoms) a.push_back({x, m});
  return Measure1D(std::move(a), breakpoints, density);
}

py::dict bracket_dict(const CapBracket& b) { return py::dict(py::arg("lower") = b.lower, py::arg("upper") = b.upper); }

}  // namespace

PYBIND11_MODULE(_lorcap, m) {
  m.doc() = "Lorentz quasinorms, 1D condenser capacitances and conductor inequalities.";

  m.def("rearrangement", [](const Cells& f) { return from_step(rearrangement(to_step(f))); }, py::arg("cells"),
        "Decreasing rearrangement of a step function given as (value, weight) cells.");
  m.def("distribution", [](const Cells& f, double t) { return distribution(to_step(f), t); }, py::arg("cells"),
        py::arg("t"));
  m.def("maximal", [](const Cells& f, double t) { return maximal(to_step(f), t); }, py::arg("cells"), py::arg("t"));
  m.def("quasinorm", [](const Cells& f, double p, double q) { return quasinorm(to_step(f), {p, q}); },
        py::arg("cells"), py::arg("p"), py::arg("q"));
  m.def("quasinorm_via_distribution",
        [](const Cells& f, double p, double q) { return quasinorm_via_distribution(to_step(f), {p, q}); },
        py::arg("cells"), py::arg("p"), py::arg("q"));
  m.def("norm_starstar", [](const Cells& f, double p, double q) { return norm_starstar(to_step(f), {p, q}); },
        py::arg("cells"), py::arg("p"), py::arg("q"));

  m.def("exact_p_cap", [](double A, double a, double b, double B, double p) {
    return exact_p_cap(Conductor1D(A, a, b, B), p);
  }, py::arg("A"), py::arg("a"), py::arg("b"), py::arg("B"), py::arg("p"));
  m.def("cap1d", [](double A, double a, double b, double B, double p, double q) {
    const Conductor1D c(A, a, b, B);
    const LorentzIndex idx(p, q);
    return py::dict(py::arg("lower") = cap_lower(c, idx), py::arg("upper") = cap_upper(c, idx),
                    py::arg("upper_coarse") = cap_upper_coarse(c, p), py::arg("exact_p_cap") = exact_p_cap(c, p));
  }, py::arg("A"), py::arg("a"), py::arg("b"), py::arg("B"), py::arg("p"), py::arg("q"),
        "Capacitance bracket of ([a, b], (A, B)).");
  m.def("cap_union", [](const Intervals& omega, const Intervals& compact, double p, double q) {
    return bracket_dict(cap_union(ConductorUnion1D(to_intervals(omega), to_intervals(compact)), {p, q}));
  }, py::arg("omega"), py::arg("compact"), py::arg("p"), py::arg("q"));

  m.def("solve_cap", [](const Intervals& omega, const Intervals& compact, double p, double q, int nodes, double tol,
                        int max_iters, double step_scale) {
    GridProblem g;
    g.conductor = ConductorUnion1D(to_intervals(omega), to_intervals(compact));
    g.idx = LorentzIndex(p, q);
    g.nodes = nodes;
    g.tol = tol;
    g.max_iters = max_iters;
    g.step_scale = step_scale;
    SolveResult r;
    {
      py::gil_scoped_release release;
      r = solve_cap(g);
    }
    return py::dict(py::arg("value") = r.value, py::arg("bracket") = bracket_dict(r.bracket),
                    py::arg("converged") = r.converged, py::arg("iterations") = r.iterations,
                    py::arg("nodes") = r.nodes, py::arg("u") = r.u);
  }, py::arg("omega"), py::arg("compact"), py::arg("p"), py::arg("q"), py::arg("nodes") = 1001,
        py::arg("tol") = 1e-7, py::arg("max_iters") = 2000, py::arg("step_scale") = 0.05,
        "Minimizes the discretized capacitance functional over piecewise linear profiles.");

  m.def("verify_conductor", [](std::pair<double, double> omega, const std::vector<double>& breakpoints,
                               const std::vector<double>& values, double a, double p, double q, double phi_power,
                               const std::optional<Intervals>& phi_knots) {
    const PLFunction f({omega.first, omega.second}, breakpoints, values);
    const ConvexPhi phi = to_phi(phi_power, phi_knots);
    ConductorReport r;
    {
      py::gil_scoped_release release;
      r = verify_conductor(f, a, {p, q}, phi);
    }
    return py::dict(py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs, py::arg("holds") = r.holds,
                    py::arg("margin") = r.margin, py::arg("gradient_norm") = r.gradient_norm,
                    py::arg("refined") = r.refined, py::arg("warnings") = r.warnings);
  }, py::arg("omega"), py::arg("breakpoints"), py::arg("values"), py::arg("a"), py::arg("p"), py::arg("q"),
        py::arg("phi_power") = 1.0, py::arg("phi_knots") = py::none(),
        "Checks the conductor inequality for a piecewise linear function on omega = (l, r).");

  m.def("frullani", [](double a) {
    const FrullaniResult r = frullani_check([](double t) { return std::exp(-t); }, 1.0, 0.0, a);
    return std::make_tuple(r.numeric, r.exact);
  }, py::arg("a"), "Log-grid quadrature of the Frullani integral for exp(-t): (numeric, exact).");

  m.def("criterion_ratio", [](const Intervals& mu_atoms, const std::vector<double>& mu_breaks,
                              const std::vector<double>& mu_density, const Intervals& nu_atoms,
                              const std::vector<double>& nu_breaks, const std::vector<double>& nu_density,
                              std::tuple<double, double, double, double> ex, std::tuple<double, double, double> pt) {
    const auto [p, q, r, s] = ex;
    const auto [x, d, tau] = pt;
    return criterion_ratio(to_measure(mu_atoms, mu_breaks, mu_density), to_measure(nu_atoms, nu_breaks, nu_density),
                           ExponentTuple(p, q, r, s), {x, d, tau});
  }, py::arg("mu_atoms"), py::arg("mu_breakpoints"), py::arg("mu_density"), py::arg("nu_atoms"),
        py::arg("nu_breakpoints"), py::arg("nu_density"), py::arg("exponents"), py::arg("point"));
  m.def("inequality_ratio", [](const Intervals& mu_atoms, const std::vector<double>& mu_breaks,
                               const std::vector<double>& mu_density, const Intervals& nu_atoms,
                               const std::vector<double>& nu_breaks, const std::vector<double>& nu_density,
                               std::tuple<double, double, double, double> ex, std::pair<double, double> omega,
                               const std::vector<double>& breakpoints, const std::vector<double>& values) {
    const auto [p, q, r, s] = ex;
    return inequality_ratio(to_measure(mu_atoms, mu_breaks, mu_density), to_measure(nu_atoms, nu_breaks, nu_density),
                            ExponentTuple(p, q, r, s), PLFunction({omega.first, omega.second}, breakpoints, values));
  }, py::arg("mu_atoms"), py::arg("mu_breakpoints"), py::arg("mu_density"), py::arg("nu_atoms"),
        py::arg("nu_breakpoints"), py::arg("nu_density"), py::arg("exponents"), py::arg("omega"),
        py::arg("breakpoints"), py::arg("values"));
}
