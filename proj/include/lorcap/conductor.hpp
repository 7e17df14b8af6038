#pragma once

// Level sets of piecewise-linear functions and the conductor inequality
//
//   int_0^inf Phi(t^p cap(closure M_{at}, M_t)) dt/t
//       <= log a * Phi((a-1)^{-p} ||f'||_{p,q}^p)           (q <= p)
//
// with exponents q and cap^{q/p} in place of p and cap when p < q < inf.
// M_t = {|f| > t}. The left side is evaluated with certified capacitance
// upper bounds, so a passing check holds for the true capacitance too.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lorcap/cap1d.hpp"
#include "lorcap/lorentz.hpp"
#include "lorcap/step_function.hpp"

namespace lorcap {

/// Continuous piecewise-linear function, zero at and outside the first and
/// last breakpoint. The support lies in the closure of `omega`; empty
/// breakpoints denote the zero function.
class PLFunction {
 public:
  PLFunction() = default;
  PLFunction(Interval omega, std::vector<double> breakpoints, std::vector<double> values);

  const Interval& omega() const { return omega_; }
  const std::vector<double>& breakpoints() const { return x_; }
  const std::vector<double>& values() const { return v_; }

  double operator()(double x) const;
  double max_abs() const;
  bool is_zero() const { return max_abs() == 0.0; }

  /// Tent of height `height` on [center - half_width, center + half_width].
  static PLFunction tent(Interval omega, double center, double half_width, double height = 1.0);
  /// Pointwise sum; breakpoints are merged.
  friend PLFunction operator+(const PLFunction& f, const PLFunction& g);

 private:
  Interval omega_{0.0, 1.0};
  std::vector<double> x_;
  std::vector<double> v_;
};

/// (x, |f(x)|) at all breakpoints and zero crossings; |f| is affine between them.
std::vector<std::pair<double, double>> abs_vertices(const PLFunction& f);

/// |f'| as a step function: one cell per segment, weight = segment length.
StepFunction slope_cells(const PLFunction& f);

/// {x : |f(x)| > t} as sorted disjoint open intervals, t > 0.
std::vector<Interval> superlevel(const PLFunction& f, double t);

/// (closure of M_{at}, M_t); nullopt when M_{at} is empty.
std::optional<ConductorUnion1D> conductor_at(const PLFunction& f, double t, double a);

/// min{(|f| - t)_+, (a-1)t} / ((a-1)t) as a piecewise-linear function.
PLFunction truncation(const PLFunction& f, double t, double a);

/// Increasing convex Phi on [0, inf) with Phi(0) = 0.
class ConvexPhi {
 public:
  static ConvexPhi identity() { return power(1.0); }
  static ConvexPhi power(double beta);
  /// Knots (x_i, y_i) with x_0 = 0, y_0 = 0; slopes must be nondecreasing
  /// and nonnegative. The last slope continues past the last knot.
  static ConvexPhi piecewise(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const;
  /// int_0^Y Phi(y)/y dy, in closed form.
  double integral_over_log(double Y) const;
  bool is_identity() const { return kind_ == Kind::kPower && beta_ == 1.0; }
  std::string describe() const;

 private:
  enum class Kind { kPower, kPiecewise };
  Kind kind_ = Kind::kPower;
  double beta_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

/// Quadrature node for int h(t) dt/t: the weight already includes dt/t.
struct LogNode {
  double t = 0.0;
  double weight = 0.0;
};

struct TGrid {
  int per_decade = 256;
  double decades = 6.0;  ///< lower cutoff max|f| * 10^{-decades}
  int gauss_points = 3;
};

struct ConductorReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  double margin = 0.0;        ///< rhs - lhs
  double gradient_norm = 0.0; ///< ||f'||_{p,q}
  /// lhs and rhs multiplied by the outer exponent (p or q); for Phi = id this
  /// is the d(t^p) form int cap d(t^p) <= p log a (a-1)^{-p} ||f'||^p.
  double stieltjes_lhs = 0.0;
  double stieltjes_rhs = 0.0;
  bool refined = false;       ///< the variational solver was used after a failed first pass
  std::vector<std::string> warnings;
};

/// Capacitance upper bound used inside the inequality: the smaller of the
/// ramp bound for the level-set conductor and the exact energy of the
/// truncation, both admissible.
double level_cap_upper(const PLFunction& f, double t, double a, const LorentzIndex& idx);

ConductorReport verify_conductor(const PLFunction& f, double a, const LorentzIndex& idx,
                                 const ConvexPhi& phi, const TGrid& grid = {});

/// Level-set geometry of f on the t-grid: for every quadrature level the
/// rearranged ramp gradient of the hull-reduced conductor and the rearranged
/// gradient of the truncation. The geometry does not depend on (p, q, Phi),
/// so sweeps over indices and Phi reuse it.
class LevelProfile {
 public:
  LevelProfile(PLFunction f, double a, const TGrid& grid = {});
  ConductorReport verify(const LorentzIndex& idx, const ConvexPhi& phi) const;
  std::size_t levels() const { return levels_.size(); }

  struct Level {
    StepFunction ramp;   ///< rearranged ramp gradients of the hull-reduced conductor
    StepFunction trunc;  ///< rearranged gradient of the truncation
  };

 private:
  PLFunction f_;
  double a_;
  TGrid grid_;
  StepFunction slopes_;
  std::vector<LogNode> nodes_;
  double lo_ = 0.0;
  std::vector<Level> levels_;
  Level floor_;
};

struct LogGrid {
  double lo = 1e-12;
  double hi = 1e12;
  int per_decade = 256;
  int gauss_points = 3;
};

struct FrullaniResult {
  double numeric = 0.0;
  double exact = 0.0;
};

/// int_0^inf (gamma(t) - gamma(a t)) dt/t on a log-spaced grid against
/// (gamma(0) - gamma(inf)) log a.
FrullaniResult frullani_check(const std::function<double(double)>& gamma, double gamma_zero,
                              double gamma_inf, double a, const LogGrid& grid = {});

/// Nodes and weights of composite Gauss-Legendre in log t over [lo, hi], one
/// cell per 1/per_decade decade, cells split at the given break points.
std::vector<LogNode> log_grid_rule(double lo, double hi, int per_decade, int gauss_points,
                                   std::vector<double> breaks = {});
/// Composite Gauss-Legendre in log t over [lo, hi] with extra break points.
double integrate_log_grid(const std::function<double(double)>& g, double lo, double hi, int per_decade,
                          int gauss_points, std::vector<double> breaks = {});

}  // namespace lorcap
