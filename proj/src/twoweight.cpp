#include "lorcap/twoweight.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lorcap/error.hpp"

namespace lorcap {

Measure1D::Measure1D(std::vector<Atom> atoms, std::vector<double> density_breakpoints,
                     std::vector<double> density_values)
    : atoms_(std::move(atoms)), breaks_(std::move(density_breakpoints)), density_(std::move(density_values)) {
  for (const Atom& a : atoms_) {
    if (!std::isfinite(a.location) || !(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw StructuralError("measure: atoms need a finite location and a finite mass > 0");
    }
  }
  if (breaks_.empty() && density_.empty()) return;
  if (breaks_.size() != density_.size() + 1) {
    throw StructuralError("measure: density needs one more breakpoint than values");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!std::isfinite(breaks_[i]) || (i > 0 && !(breaks_[i - 1] < breaks_[i]))) {
      throw StructuralError("measure: density breakpoints must be finite and strictly increasing");
    }
  }
  for (double v : density_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw StructuralError("measure: density values must be >= 0");
  }
}

Measure1D Measure1D::lebesgue(Interval on) { return Measure1D({}, {on.left, on.right}, {1.0}); }

Measure1D Measure1D::dirac(double x, double mass) { return Measure1D({{x, mass}}, {}, {}); }

Measure1D Measure1D::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw ContractError("measure scale must be > 0");
  Measure1D out = *this;
  for (Atom& a : out.atoms_) a.mass *= lambda;
  for (double& v : out.density_) v *= lambda;
  return out;
}

double measure_interval(const Measure1D& m, const Interval& open) {
  if (!(open.left <= open.right)) throw ContractError("measure_interval: reversed interval");
  double mass = 0.0;
  for (const auto& a : m.atoms()) {
    if (a.location > open.left && a.location < open.right) mass += a.mass;
  }
  const auto& b = m.density_breakpoints();
  const auto& v = m.density_values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double lo = std::max(b[i], open.left);
    const double hi = std::min(b[i + 1], open.right);
    if (hi > lo) mass += v[i] * (hi - lo);
  }
  return mass;
}

ExponentTuple::ExponentTuple(double p, double q, double r, double s) : p_(p), q_(q), r_(r), s_(s) {
  const double m = std::max(p, q);
  if (!(p > 1.0) || !std::isfinite(p) || !(q >= 1.0) || !std::isfinite(q)) {
    throw ContractError("exponents: need 1 < p < inf and 1 <= q < inf");
  }
  if (!(s > 1.0 && s <= m && m <= r) || !std::isfinite(r)) {
    throw ContractError("exponents: need 1 < s <= max(p,q) <= r < inf");
  }
}

// ---------------------------------------------------------------- point criterion

double criterion_ratio(const Measure1D& mu, const Measure1D& nu, const ExponentTuple& ex,
                       const CriterionPoint& pt) {
  if (!(pt.d > 0.0) || !(pt.tau > 0.0)) throw ContractError("criterion point needs d > 0 and tau > 0");
  const double num = std::pow(measure_interval(mu, {pt.x - pt.d, pt.x + pt.d}), 1.0 / ex.r());
  const double outer = measure_interval(nu, {pt.x - pt.d - pt.tau, pt.x + pt.d + pt.tau});
  const double den = std::pow(pt.tau, (1.0 - ex.p()) / ex.p()) + std::pow(outer, 1.0 / ex.s());
  return num / den;
}

std::vector<CriterionPoint> criterion_points(const Interval& omega, const CriterionGrid& grid) {
  if (grid.nx < 1 || grid.nd < 1 || grid.ntau < 1) throw ContractError("criterion grid is empty");
  if (!(grid.min_fraction > 0.0 && grid.min_fraction < 1.0)) {
    throw ContractError("criterion grid: min_fraction must lie in (0, 1)");
  }
  auto log_fraction = [&](int i, int n) {
    // n points from min_fraction up to (but excluding) 1.
    if (n == 1) return std::sqrt(grid.min_fraction);
    const double lo = std::log(grid.min_fraction);
    const double hi = std::log(1.0 - 1.0 / (2.0 * n));
    return std::exp(lo + (hi - lo) * i / (n - 1));
  };
  std::vector<CriterionPoint> pts;
  pts.reserve(static_cast<std::size_t>(grid.nx) * grid.nd * grid.ntau);
  const double width = omega.length();
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double x = omega.left + width * (ix + 0.5) / grid.nx;
    const double radius = std::min(x - omega.left, omega.right - x) - grid.margin;
    if (!(radius > 0.0)) continue;
    for (int id = 0; id < grid.nd; ++id) {
      const double d = radius * log_fraction(id, grid.nd);
      for (int it = 0; it < grid.ntau; ++it) {
        // tau up to the full remaining radius: closure(sigma_{d+tau}) stays inside.
        const double frac = grid.ntau == 1 ? 1.0
                                           : std::exp(std::log(grid.min_fraction) *
                                                      (1.0 - static_cast<double>(it) / (grid.ntau - 1)));
        const double tau = (radius - d) * frac;
        if (tau > 0.0) pts.push_back({x, d, tau});
      }
    }
  }
  return pts;
}

double criterion_K(const Measure1D& mu, const Measure1D& nu, const Interval& omega,
                   const ExponentTuple& ex, std::span<const CriterionPoint> points) {
  if (points.empty()) throw ContractError("criterion_K: empty grid");
  double sup = 0.0;
  for (const CriterionPoint& pt : points) {
    if (!(pt.x - pt.d - pt.tau > omega.left && pt.x + pt.d + pt.tau < omega.right)) {
      throw ContractError("criterion_K: closure of sigma_{d+tau}(x) must lie inside omega");
    }
    sup = std::max(sup, criterion_ratio(mu, nu, ex, pt));
  }
  return sup;
}

double criterion_K(const Measure1D& mu, const Measure1D& nu, const Interval& omega,
                   const ExponentTuple& ex, const CriterionGrid& grid) {
  const auto pts = criterion_points(omega, grid);
  return criterion_K(mu, nu, omega, ex, pts);
}

// ---------------------------------------------------------------- general criterion

std::vector<HullPiece> hull_reduction(const ConductorUnion1D& pair) {
  std::vector<HullPiece> out;
  for (const auto& h : pair.hulls()) {
    if (!h.has_compact) continue;
    const double tau = std::min(h.hull.left - h.component.left, h.component.right - h.hull.right);
    out.push_back({h.component, h.hull, tau, {h.hull.left - tau, h.hull.right + tau}});
  }
  return out;
}

double general_criterion_ratio(const Measure1D& mu, const Measure1D& nu, const ConductorUnion1D& pair,
                               const ExponentTuple& ex, const LorentzIndex& idx) {
  double g_mass = 0.0;
  for (const Interval& k : pair.compact()) g_mass += measure_interval(mu, k);
  if (g_mass == 0.0) return 0.0;
  double big_mass = 0.0;
  for (const Interval& w : pair.omega()) big_mass += measure_interval(nu, w);

  // The capacitance only sees the hull of each component's compact part.
  std::vector<Interval> hulls;
  std::vector<Interval> comps;
  for (const HullPiece& piece : hull_reduction(pair)) {
    hulls.push_back(piece.hull);
    comps.push_back(piece.component);
  }
  const double cap = cap_union(ConductorUnion1D(std::move(comps), std::move(hulls)), idx).upper;
  return std::pow(g_mass, 1.0 / ex.r()) / (std::pow(cap, 1.0 / idx.p()) + std::pow(big_mass, 1.0 / ex.s()));
}

double general_criterion_K(const Measure1D& mu, const Measure1D& nu,
                           std::span<const ConductorUnion1D> pairs, const ExponentTuple& ex,
                           const LorentzIndex& idx) {
  double sup = 0.0;
  for (const ConductorUnion1D& pair : pairs) sup = std::max(sup, general_criterion_ratio(mu, nu, pair, ex, idx));
  return sup;
}

// ---------------------------------------------------------------- embedding inequality

StepFunction pushforward_cells(const PLFunction& f, const Measure1D& m, double resolution) {
  if (!(resolution > 0.0 && resolution <= 1.0)) throw ContractError("resolution must lie in (0, 1]");
  std::vector<Cell> cells;
  for (const auto& a : m.atoms()) {
    const double v = std::abs(f(a.location));
    if (v > 0.0) cells.push_back({v, a.mass});
  }
  const auto& fx = f.breakpoints();
  if (fx.empty()) return StepFunction(std::move(cells));

  // Pieces on which both the density and |f| are affine.
  const auto verts = abs_vertices(f);
  std::vector<double> cuts;
  for (const auto& [x, v] : verts) cuts.push_back(x);
  for (double b : m.density_breakpoints()) {
    if (b > fx.front() && b < fx.back()) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto& db = m.density_breakpoints();
  const auto& dv = m.density_values();
  auto density_at = [&](double x) {
    for (std::size_t i = 0; i < dv.size(); ++i) {
      if (x >= db[i] && x < db[i + 1]) return dv[i];
    }
    return 0.0;
  };
  const double support_mass = measure_interval(Measure1D({}, db, dv), {fx.front(), fx.back()});
  if (support_mass <= 0.0) return StepFunction(std::move(cells));
  const double cell_mass = resolution * support_mass;

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x0 = cuts[i];
    const double x1 = cuts[i + 1];
    const double rho = density_at(0.5 * (x0 + x1));
    if (rho <= 0.0) continue;
    const double mass = rho * (x1 - x0);
    const auto n = static_cast<long>(std::ceil(mass / cell_mass - 1e-9));
    const double h = (x1 - x0) / static_cast<double>(std::max<long>(n, 1));
    for (long k = 0; k < std::max<long>(n, 1); ++k) {
      const double v = std::abs(f(x0 + (static_cast<double>(k) + 0.5) * h));
      if (v > 0.0) cells.push_back({v, rho * h});
    }
  }
  return StepFunction(std::move(cells));
}

double inequality_ratio(const Measure1D& mu, const Measure1D& nu, const ExponentTuple& ex,
                        const PLFunction& f) {
  const LorentzIndex mu_idx(ex.r(), ex.m());
  const LorentzIndex nu_idx(ex.s(), ex.m());
  const LorentzIndex grad_idx(ex.p(), ex.q());
  const double num = quasinorm(pushforward_cells(f, mu), mu_idx);
  const double den = quasinorm(slope_cells(f), grad_idx) + quasinorm(pushforward_cells(f, nu), nu_idx);
  if (den == 0.0) return 0.0;
  return num / den;
}

double inequality_A(const Measure1D& mu, const Measure1D& nu, const Interval& omega,
                    const ExponentTuple& ex, std::span<const PLFunction> corpus) {
  double sup = 0.0;
  for (const PLFunction& f : corpus) {
    if (f.is_zero()) continue;
    const auto& x = f.breakpoints();
    if (x.front() < omega.left || x.back() > omega.right) {
      throw ContractError("inequality_A: corpus function supported outside omega");
    }
    sup = std::max(sup, inequality_ratio(mu, nu, ex, f));
  }
  return sup;
}

}  // namespace lorcap
