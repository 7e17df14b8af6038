#pragma once

// Brute-force estimates of the constants in the two-weight embedding
//
//   ||f||_{L^{r,m}(mu)} <= A (||f'||_{L^{p,q}} + ||f||_{L^{s,m}(nu)}),  m = max(p,q),
//
// and in its interval criterion
//
//   mu(sigma_d(x))^{1/r} <= K (tau^{(1-p)/p} + nu(sigma_{d+tau}(x))^{1/s}).
//
// Both constants are reported as suprema over explicit finite families, i.e.
// lower bounds on the best constants.

#include <span>
#include <utility>
#include <vector>

#include "lorcap/cap1d.hpp"
#include "lorcap/conductor.hpp"
#include "lorcap/lorentz.hpp"

namespace lorcap {

/// Finite atoms plus a piecewise-constant density. The density is
/// values[i] on [breakpoints[i], breakpoints[i+1]) and zero elsewhere.
class Measure1D {
 public:
  struct Atom {
    double location = 0.0;
    double mass = 0.0;
  };

  Measure1D() = default;
  Measure1D(std::vector<Atom> atoms, std::vector<double> density_breakpoints,
            std::vector<double> density_values);

  static Measure1D lebesgue(Interval on);
  static Measure1D dirac(double x, double mass = 1.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<double>& density_breakpoints() const { return breaks_; }
  const std::vector<double>& density_values() const { return density_; }

  /// lambda * this.
  Measure1D scaled(double lambda) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> breaks_;
  std::vector<double> density_;
};

/// Exact mass of the open interval (atoms on the boundary are excluded).
double measure_interval(const Measure1D& m, const Interval& open);

class ExponentTuple {
 public:
  /// 1 < p < inf, 1 <= q < inf, 1 < s <= max(p,q) <= r < inf.
  ExponentTuple(double p, double q, double r, double s);

  double p() const { return p_; }
  double q() const { return q_; }
  double r() const { return r_; }
  double s() const { return s_; }
  double m() const { return std::max(p_, q_); }

 private:
  double p_, q_, r_, s_;
};

struct CriterionPoint {
  double x = 0.0;
  double d = 0.0;
  double tau = 0.0;
};

/// mu(sigma_d(x))^{1/r} / (tau^{(1-p)/p} + nu(sigma_{d+tau}(x))^{1/s}).
double criterion_ratio(const Measure1D& mu, const Measure1D& nu, const ExponentTuple& ex,
                       const CriterionPoint& pt);

/// (x, d, tau) sampling: x uniform over omega, d and tau logarithmic, with
/// closure(sigma_{d+tau}(x)) inside omega up to `margin`.
struct CriterionGrid {
  int nx = 50;
  int nd = 50;
  int ntau = 50;
  double min_fraction = 1e-4;  ///< smallest d, tau as a fraction of the admissible radius
  double margin = 1e-9;
};

std::vector<CriterionPoint> criterion_points(const Interval& omega, const CriterionGrid& grid);

double criterion_K(const Measure1D& mu, const Measure1D& nu, const Interval& omega,
                   const ExponentTuple& ex, std::span<const CriterionPoint> points);
double criterion_K(const Measure1D& mu, const Measure1D& nu, const Interval& omega,
                   const ExponentTuple& ex, const CriterionGrid& grid = {});

/// Per open component G_i of G: the hull h_i of the part of g inside it, the
/// distance tau_i from h_i to the complement of G_i, and the concentric
/// H_i = (h_i.left - tau_i, h_i.right + tau_i).
struct HullPiece {
  Interval component;
  Interval hull;
  double tau = 0.0;
  Interval concentric;
};
std::vector<HullPiece> hull_reduction(const ConductorUnion1D& pair);

/// sup over pairs (g, G) of mu(g)^{1/r} / (cap^{1/p} + nu(G)^{1/s}) with the
/// capacitance replaced by its certified upper bound on the hull reduction.
/// Each pair is a ConductorUnion1D whose compact part is the closure of g.
double general_criterion_K(const Measure1D& mu, const Measure1D& nu,
                           std::span<const ConductorUnion1D> pairs, const ExponentTuple& ex,
                           const LorentzIndex& idx);

/// Ratio for a single pair; exposed for the direct single-interval check.
double general_criterion_ratio(const Measure1D& mu, const Measure1D& nu, const ConductorUnion1D& pair,
                               const ExponentTuple& ex, const LorentzIndex& idx);

/// |f| under the measure as a step function: atoms become point
/// evaluations; density pieces are cut into cells of at most
/// `resolution` * (density mass on the support) each, valued at the midpoint.
StepFunction pushforward_cells(const PLFunction& f, const Measure1D& m, double resolution = 1e-4);

/// ||f||_{L^{r,m}(mu)} / (||f'||_{L^{p,q}} + ||f||_{L^{s,m}(nu)}).
double inequality_ratio(const Measure1D& mu, const Measure1D& nu, const ExponentTuple& ex,
                        const PLFunction& f);

/// sup of inequality_ratio over the corpus; zero functions are skipped.
double inequality_A(const Measure1D& mu, const Measure1D& nu, const Interval& omega,
                    const ExponentTuple& ex, std::span<const PLFunction> corpus);

}  // namespace lorcap
