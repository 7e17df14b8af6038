#pragma once

// Two-sided estimates of the Sobolev-Lorentz p,q-capacitance of conductors
// on the line.
//
// For a single conductor ([a,b], (A,B)) with gaps s1 = a - A, s2 = B - b:
//   * q = p: cap = s1^{1-p} + s2^{1-p} exactly (linear ramps are optimal).
//   * upper: the ramp test function evaluated exactly, ||u'||_{p,q}^p.
//   * lower: any admissible v has int |v'| >= 1 over each gap, and
//     ||g||_{p,inf} >= (1/p') s^{-1/p'} ||g||_1 on a gap of length s. For
//     finite q the weak-type comparison ||g||_{p,inf} <= (q/p)^{1/q} ||g||_{p,q}
//     transfers the bound.

#include <vector>

#include "lorcap/lorentz.hpp"
#include "lorcap/step_function.hpp"

namespace lorcap {

/// Interval with left <= right; open or closed according to context.
struct Interval {
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
  bool contains_strictly(const Interval& inner) const {
    return left < inner.left && inner.right < right;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Compact [a,b] inside open (A,B), A < a <= b < B.
class Conductor1D {
 public:
  Conductor1D(double A, double a, double b, double B);

  double outer_left() const { return A_; }
  double inner_left() const { return a_; }
  double inner_right() const { return b_; }
  double outer_right() const { return B_; }
  double left_gap() const { return a_ - A_; }
  double right_gap() const { return B_ - b_; }

 private:
  double A_, a_, b_, B_;
};

/// Compact set (finite union of disjoint closed intervals) inside an open set
/// (finite union of disjoint open intervals). Components are stored sorted.
class ConductorUnion1D {
 public:
  ConductorUnion1D() = default;
  ConductorUnion1D(std::vector<Interval> omega, std::vector<Interval> compact);

  const std::vector<Interval>& omega() const { return omega_; }
  const std::vector<Interval>& compact() const { return compact_; }

  /// Per omega component, the smallest closed interval containing the
  /// compact intervals it holds (empty when the component holds none).
  struct ComponentHull {
    Interval component;
    bool has_compact = false;
    Interval hull;
  };
  std::vector<ComponentHull> hulls() const;

 private:
  std::vector<Interval> omega_;
  std::vector<Interval> compact_;
};

struct CapBracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// s1^{1-p} + s2^{1-p}, the exact p,p-capacitance.
double exact_p_cap(const Conductor1D& c, double p);

/// |u'| of the ramp test function: [(1/s1, s1), (1/s2, s2)].
StepFunction ramp_gradient(const Conductor1D& c);

/// Ramp gradients of every component that holds compact intervals, each
/// component reduced to its hull.
StepFunction union_ramp_gradient(const ConductorUnion1D& u);
/// quasinorm(ramp_gradient)^p.
double cap_upper(const Conductor1D& c, const LorentzIndex& idx);

/// [p (s1^{-1/p'} + s2^{-1/p'})]^p: the cruder triangle-inequality bound for q = 1.
double cap_upper_coarse(const Conductor1D& c, double p);

double cap_lower(const Conductor1D& c, const LorentzIndex& idx);

/// Hull reduction per component, superadditive combination of the lower
/// bounds, exact evaluation of the concatenated ramps for the upper bound.
CapBracket cap_union(const ConductorUnion1D& u, const LorentzIndex& idx);

}  // namespace lorcap
