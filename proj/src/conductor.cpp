#include "lorcap/conductor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "lorcap/error.hpp"
#include "lorcap/varsolve.hpp"

namespace lorcap {

// ---------------------------------------------------------------- PLFunction

PLFunction::PLFunction(Interval omega, std::vector<double> breakpoints, std::vector<double> values)
    : omega_(omega), x_(std::move(breakpoints)), v_(std::move(values)) {
  if (!(omega_.left < omega_.right)) throw StructuralError("PL function: omega must be a nonempty interval");
  if (x_.size() != v_.size()) throw StructuralError("PL function: breakpoints and values differ in length");
  if (x_.empty()) return;
  if (x_.size() < 2) throw StructuralError("PL function: need at least two breakpoints");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(v_[i])) {
      throw StructuralError("PL function: breakpoint " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(x_[i - 1] < x_[i])) {
      throw StructuralError("PL function: breakpoints must be strictly increasing");
    }
  }
  if (v_.front() != 0.0 || v_.back() != 0.0) {
    throw StructuralError("PL function: values at the first and last breakpoint must be 0");
  }
  if (x_.front() < omega_.left || x_.back() > omega_.right) {
    throw StructuralError("PL function: support must lie in the closure of omega");
  }
}

double PLFunction::operator()(double x) const {
  if (x_.empty() || x <= x_.front() || x >= x_.back()) return 0.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double r = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return v_[i] + r * (v_[i + 1] - v_[i]);
}

double PLFunction::max_abs() const {
  double m = 0.0;
  for (double v : v_) m = std::max(m, std::abs(v));
  return m;
}

PLFunction PLFunction::tent(Interval omega, double center, double half_width, double height) {
  return PLFunction(omega, {center - half_width, center, center + half_width}, {0.0, height, 0.0});
}

PLFunction operator+(const PLFunction& f, const PLFunction& g) {
  const Interval omega{std::min(f.omega_.left, g.omega_.left), std::max(f.omega_.right, g.omega_.right)};
  if (f.x_.empty()) return PLFunction(omega, g.x_, g.v_);
  if (g.x_.empty()) return PLFunction(omega, f.x_, f.v_);
  std::vector<double> xs;
  std::merge(f.x_.begin(), f.x_.end(), g.x_.begin(), g.x_.end(), std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> vs;
  vs.reserve(xs.size());
  for (double x : xs) vs.push_back(f(x) + g(x));
  vs.front() = 0.0;
  vs.back() = 0.0;
  return PLFunction(omega, std::move(xs), std::move(vs));
}

// ---------------------------------------------------------------- level sets

namespace {

// Point at fraction r along [x0, x1]; r == 1 returns x1 exactly.
double along(double x0, double x1, double r) {
  if (r >= 1.0) return x1;
  if (r <= 0.0) return x0;
  return x0 + r * (x1 - x0);
}

}  // namespace

std::vector<std::pair<double, double>> abs_vertices(const PLFunction& f) {
  const auto& x = f.breakpoints();
  const auto& v = f.values();
  std::vector<std::pair<double, double>> out;
  if (x.empty()) return out;
  out.emplace_back(x[0], std::abs(v[0]));
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if ((v[i] < 0.0 && v[i + 1] > 0.0) || (v[i] > 0.0 && v[i + 1] < 0.0)) {
      const double r = v[i] / (v[i] - v[i + 1]);
      const double root = along(x[i], x[i + 1], r);
      if (root > out.back().first && root < x[i + 1]) out.emplace_back(root, 0.0);
    }
    out.emplace_back(x[i + 1], std::abs(v[i + 1]));
  }
  return out;
}

StepFunction slope_cells(const PLFunction& f) {
  const auto& x = f.breakpoints();
  const auto& v = f.values();
  std::vector<Cell> cells;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    cells.push_back({std::abs(v[i + 1] - v[i]) / h, h});
  }
  return StepFunction(std::move(cells));
}

namespace {

std::vector<Interval> superlevel_of(const std::vector<std::pair<double, double>>& pts, double t) {
  std::vector<Interval> out;
  bool inside = false;
  double start = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto [x0, v0] = pts[i];
    const auto [x1, v1] = pts[i + 1];
    if (v0 > t && v1 <= t) {
      out.push_back({start, along(x0, x1, (v0 - t) / (v0 - v1))});
      inside = false;
    } else if (v0 <= t && v1 > t) {
      start = along(x0, x1, (t - v0) / (v1 - v0));
      inside = true;
    }
  }
  // The last vertex has value 0, so every entered interval has been closed.
  (void)inside;
  return out;
}

}  // namespace

std::vector<Interval> superlevel(const PLFunction& f, double t) {
  if (!(t > 0.0)) throw ContractError("superlevel: t must be > 0");
  return superlevel_of(abs_vertices(f), t);
}

std::optional<ConductorUnion1D> conductor_at(const PLFunction& f, double t, double a) {
  if (!(a > 1.0)) throw ContractError("conductor_at: a must be > 1");
  if (!(t > 0.0)) throw ContractError("conductor_at: t must be > 0");
  const auto pts = abs_vertices(f);
  const auto inner = superlevel_of(pts, a * t);
  if (inner.empty()) return std::nullopt;
  std::vector<Interval> compact;
  for (const Interval& i : inner) {
    if (!compact.empty() && compact.back().right >= i.left) {
      compact.back().right = i.right;  // closures touch where |f| = at exactly
    } else {
      compact.push_back(i);
    }
  }
  return ConductorUnion1D(superlevel_of(pts, t), std::move(compact));
}

PLFunction truncation(const PLFunction& f, double t, double a) {
  if (!(a > 1.0)) throw ContractError("truncation: a must be > 1");
  if (!(t > 0.0)) throw ContractError("truncation: t must be > 0");
  const auto pts = abs_vertices(f);
  if (pts.empty()) return PLFunction(f.omega(), {}, {});
  const double span = (a - 1.0) * t;
  auto level = [&](double v) { return std::min(std::max(v - t, 0.0), span) / span; };

  std::vector<double> xs{pts.front().first};
  std::vector<double> vs{level(pts.front().second)};
  auto push = [&](double x, double v) {
    if (x > xs.back()) {
      xs.push_back(x);
      vs.push_back(v);
    }
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto [x0, v0] = pts[i];
    const auto [x1, v1] = pts[i + 1];
    // Crossings of the two levels inside the segment, in order along x.
    std::array<double, 2> cross{};
    int n = 0;
    for (double lvl : {t, a * t}) {
      if ((v0 - lvl) * (v1 - lvl) < 0.0) cross[n++] = along(x0, x1, (lvl - v0) / (v1 - v0));
    }
    if (n == 2 && cross[0] > cross[1]) std::swap(cross[0], cross[1]);
    for (int k = 0; k < n; ++k) push(cross[k], level(v0 + (cross[k] - x0) / (x1 - x0) * (v1 - v0)));
    push(x1, level(v1));
  }
  // Snap the crossing values to the exact levels.
  for (double& v : vs) {
    if (std::abs(v) < 1e-15) v = 0.0;
    if (std::abs(v - 1.0) < 1e-15) v = 1.0;
  }
  vs.front() = 0.0;
  vs.back() = 0.0;
  return PLFunction(f.omega(), std::move(xs), std::move(vs));
}

// ---------------------------------------------------------------- ConvexPhi

ConvexPhi ConvexPhi::power(double beta) {
  if (!(beta >= 1.0) || !std::isfinite(beta)) throw ContractError("power Phi requires beta >= 1");
  ConvexPhi phi;
  phi.kind_ = Kind::kPower;
  phi.beta_ = beta;
  return phi;
}

ConvexPhi ConvexPhi::piecewise(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw ContractError("piecewise Phi needs at least two knots");
  if (knots.front().first != 0.0 || knots.front().second != 0.0) {
    throw ContractError("piecewise Phi must start at (0, 0)");
  }
  double prev_slope = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double dx = knots[i].first - knots[i - 1].first;
    if (!(dx > 0.0)) throw ContractError("piecewise Phi knots must be strictly increasing in x");
    const double slope = (knots[i].second - knots[i - 1].second) / dx;
    if (slope < prev_slope) throw ContractError("piecewise Phi slopes must be nondecreasing (convexity)");
    prev_slope = slope;
  }
  if (prev_slope <= 0.0) throw ContractError("piecewise Phi must be increasing");
  ConvexPhi phi;
  phi.kind_ = Kind::kPiecewise;
  phi.knots_ = std::move(knots);
  return phi;
}

double ConvexPhi::operator()(double x) const {
  if (kind_ == Kind::kPower) return beta_ == 1.0 ? x : std::pow(x, beta_);
  std::size_t i = 1;
  while (i + 1 < knots_.size() && x > knots_[i].first) ++i;
  const auto [x0, y0] = knots_[i - 1];
  const auto [x1, y1] = knots_[i];
  return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
}

double ConvexPhi::integral_over_log(double Y) const {
  if (Y <= 0.0) return 0.0;
  if (kind_ == Kind::kPower) return std::pow(Y, beta_) / beta_;
  // On a piece Phi(y) = y0 + s (y - x0): integral of Phi/y is
  // (y0 - s x0) log(y/x) + s (y - x).
  double sum = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const auto [x0, y0] = knots_[i - 1];
    const auto [x1, y1] = knots_[i];
    const double s = (y1 - y0) / (x1 - x0);
    const double lo = x0;
    const double hi = (i + 1 == knots_.size()) ? Y : std::min(Y, x1);
    if (hi <= lo) break;
    const double intercept = y0 - s * x0;
    sum += s * (hi - lo);
    if (lo > 0.0) sum += intercept * std::log(hi / lo);
  }
  return sum;
}

std::string ConvexPhi::describe() const {
  std::ostringstream os;
  os.precision(12);
  if (kind_ == Kind::kPower) {
    if (beta_ == 1.0) return "id";
    os << "power:" << beta_;
    return os.str();
  }
  os << "pl:";
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (i > 1) os << ",";
    os << knots_[i].first << ":" << knots_[i].second;
  }
  return os.str();
}

// ---------------------------------------------------------------- quadrature

namespace {

template <std::size_t N>
void gauss_on(double u0, double u1, std::vector<LogNode>& out) {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const double half = 0.5 * (u1 - u0);
  const double mid = 0.5 * (u0 + u1);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) {
      out.push_back({std::exp(mid), half * w[j]});
    } else {
      out.push_back({std::exp(mid - half * x[j]), half * w[j]});
      out.push_back({std::exp(mid + half * x[j]), half * w[j]});
    }
  }
}

}  // namespace

std::vector<LogNode> log_grid_rule(double lo, double hi, int per_decade, int gauss_points,
                                   std::vector<double> breaks) {
  if (!(lo > 0.0) || !(hi > lo)) return {};
  if (per_decade < 1) throw ContractError("per_decade must be >= 1");
  if (gauss_points < 2 || gauss_points > 5) throw ContractError("gauss_points must be in 2..5");
  const double decades = std::log10(hi / lo);
  const auto cells = static_cast<long>(std::ceil(decades * per_decade));
  std::vector<double> ends;
  ends.reserve(static_cast<std::size_t>(cells) + breaks.size() + 2);
  for (long j = 0; j < cells; ++j) ends.push_back(lo * std::pow(10.0, static_cast<double>(j) / per_decade));
  ends.push_back(hi);
  for (double b : breaks) {
    if (b > lo && b < hi) ends.push_back(b);
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  std::vector<LogNode> out;
  out.reserve(ends.size() * static_cast<std::size_t>(gauss_points));
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    const double u0 = std::log(ends[i]);
    const double u1 = std::log(ends[i + 1]);
    switch (gauss_points) {
      case 2: gauss_on<2>(u0, u1, out); break;
      case 3: gauss_on<3>(u0, u1, out); break;
      case 4: gauss_on<4>(u0, u1, out); break;
      default: gauss_on<5>(u0, u1, out); break;
    }
  }
  return out;
}

double integrate_log_grid(const std::function<double(double)>& h, double lo, double hi, int per_decade,
                          int gauss_points, std::vector<double> breaks) {
  double sum = 0.0;
  for (const LogNode& n : log_grid_rule(lo, hi, per_decade, gauss_points, std::move(breaks))) {
    sum += n.weight * h(n.t);
  }
  return sum;
}

// ---------------------------------------------------------------- inequality

namespace {

using LevelGeometry = LevelProfile::Level;

LevelGeometry level_geometry(const PLFunction& f, double t, double a) {
  const auto conductor = conductor_at(f, t, a);
  if (!conductor) return {};
  return {rearrangement(union_ramp_gradient(*conductor)), rearrangement(slope_cells(truncation(f, t, a)))};
}

double level_cap(const LevelGeometry& g, const LorentzIndex& idx) {
  if (g.ramp.empty()) return 0.0;
  const double ramp = std::pow(quasinorm_sorted(g.ramp.cells(), idx), idx.p());
  const double trunc = std::pow(quasinorm_sorted(g.trunc.cells(), idx), idx.p());
  return std::min(ramp, trunc);
}

struct LevelIntegrand {
  const LorentzIndex& idx;
  bool q_regime;  // p < q: t^q cap^{q/p}

  double level_term(double t, double cap) const {
    if (cap <= 0.0) return 0.0;
    if (q_regime) return std::pow(t, idx.q()) * std::pow(cap, idx.q() / idx.p());
    return std::pow(t, idx.p()) * cap;
  }
  double exponent() const { return q_regime ? idx.q() : idx.p(); }
  double small_t_power() const { return q_regime ? idx.q() / idx.p() : 1.0; }
};

struct LhsRule {
  std::vector<LogNode> nodes;
  double lo = 0.0;  ///< below lo the level term is an exact power law
};

LhsRule lhs_rule(const PLFunction& f, double a, const TGrid& grid) {
  LhsRule rule;
  if (f.is_zero()) return rule;
  const double top = f.max_abs();
  double min_crit = top / a;
  std::vector<double> breaks;
  for (const auto& [x, v] : abs_vertices(f)) {
    if (v <= 0.0) continue;
    breaks.push_back(v);
    breaks.push_back(v / a);
    min_crit = std::min(min_crit, v / a);
  }
  const double hi = top / a;  // M_{at} is empty above
  rule.lo = std::min(top * std::pow(10.0, -grid.decades), 0.5 * min_crit);
  rule.nodes = log_grid_rule(rule.lo, hi, grid.per_decade, grid.gauss_points, breaks);
  return rule;
}

// Below every critical level the gaps scale linearly in t, so the level term
// is an exact power law c t^k and int_0^lo Phi(c t^k) dt/t =
// (1/k) int_0^{c lo^k} Phi(y)/y dy.
double lhs_sum(const LevelIntegrand& li, const ConvexPhi& phi, const LhsRule& rule,
               const std::function<double(std::size_t)>& cap_at_node, double cap_at_lo) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.nodes[i].weight * phi(li.level_term(rule.nodes[i].t, cap_at_node(i)));
  }
  return sum + phi.integral_over_log(li.level_term(rule.lo, cap_at_lo)) / li.small_t_power();
}

}  // namespace

double level_cap_upper(const PLFunction& f, double t, double a, const LorentzIndex& idx) {
  return level_cap(level_geometry(f, t, a), idx);
}

LevelProfile::LevelProfile(PLFunction f, double a, const TGrid& grid) : f_(std::move(f)), a_(a), grid_(grid) {
  if (!(a > 1.0)) throw ContractError("verify_conductor: a must be > 1");
  slopes_ = slope_cells(f_);
  const LhsRule rule = lhs_rule(f_, a_, grid_);
  nodes_ = rule.nodes;
  lo_ = rule.lo;
  levels_.reserve(nodes_.size());
  for (const LogNode& n : nodes_) levels_.push_back(level_geometry(f_, n.t, a_));
  if (lo_ > 0.0) floor_ = level_geometry(f_, lo_, a_);
}

ConductorReport LevelProfile::verify(const LorentzIndex& idx, const ConvexPhi& phi) const {
  if (idx.q_infinite()) throw ContractError("verify_conductor: q must be finite");
  ConductorReport report;
  const LevelIntegrand li{idx, idx.q() > idx.p()};
  const double e = li.exponent();
  report.gradient_norm = quasinorm(slopes_, idx);
  report.rhs = std::log(a_) * phi(std::pow(a_ - 1.0, -e) * std::pow(report.gradient_norm, e));

  if (!f_.is_zero()) {
    const LhsRule rule{nodes_, lo_};
    auto cap_at_node = [&](std::size_t i) { return level_cap(levels_[i], idx); };
    report.lhs = lhs_sum(li, phi, rule, cap_at_node, level_cap(floor_, idx));
  }
  report.holds = report.lhs <= report.rhs;

  if (!report.holds) {
    // Tighten the capacitances with the grid solver on a coarser t-grid.
    report.refined = true;
    TGrid coarse = grid_;
    coarse.per_decade = std::min(grid_.per_decade, 16);
    const LhsRule rule = lhs_rule(f_, a_, coarse);
    bool all_converged = true;
    auto refined_cap = [&](double t) {
      const double upper = level_cap_upper(f_, t, a_, idx);
      const auto conductor = conductor_at(f_, t, a_);
      if (!conductor) return upper;
      GridProblem problem;
      problem.conductor = *conductor;
      problem.nodes = 201;
      problem.idx = idx;
      problem.max_iters = 300;
      const SolveResult r = solve_cap(problem);
      all_converged = all_converged && r.converged;
      return std::min(upper, r.value);
    };
    report.lhs = lhs_sum(li, phi, rule, [&](std::size_t i) { return refined_cap(rule.nodes[i].t); },
                         refined_cap(rule.lo));
    report.holds = report.lhs <= report.rhs;
    if (!all_converged) report.warnings.push_back("capacitance solver did not converge at some levels");
  }
  report.margin = report.rhs - report.lhs;
  report.stieltjes_lhs = e * report.lhs;
  report.stieltjes_rhs = e * report.rhs;
  return report;
}

ConductorReport verify_conductor(const PLFunction& f, double a, const LorentzIndex& idx,
                                 const ConvexPhi& phi, const TGrid& grid) {
  if (idx.q_infinite()) throw ContractError("verify_conductor: q must be finite");
  return LevelProfile(f, a, grid).verify(idx, phi);
}

FrullaniResult frullani_check(const std::function<double(double)>& gamma, double gamma_zero,
                              double gamma_inf, double a, const LogGrid& grid) {
  if (!(a > 1.0)) throw ContractError("frullani_check: a must be > 1");
  if (!std::isfinite(gamma_zero) || !std::isfinite(gamma_inf)) {
    throw ContractError("frullani_check: limits must be finite");
  }
  auto h = [&](double t) { return gamma(t) - gamma(a * t); };
  FrullaniResult r;
  r.numeric = integrate_log_grid(h, grid.lo, grid.hi, grid.per_decade, grid.gauss_points);
  r.exact = (gamma_zero - gamma_inf) * std::log(a);
  return r;
}

}  // namespace lorcap
