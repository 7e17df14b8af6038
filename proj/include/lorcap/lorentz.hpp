#pragma once

// Lorentz p,q-quasinorms of step functions.
//
//   ||f||_{p,q}   = ( int_0^inf (t^{1/p} f*(t))^q dt/t )^{1/q}      q < inf
//   ||f||_{p,inf} = sup_t t^{1/p} f*(t)
//   ||f||_{(p,q)} : same with the maximal function f** in place of f*.
//
// For a step function f* is piecewise constant, so ||f||_{p,q} has a closed
// form per cell. f** is of the form alpha + beta/t on each cell, which we
// integrate numerically except on the first cell and the C/t tail.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "lorcap/step_function.hpp"

namespace lorcap {

class LorentzIndex {
 public:
  /// 1 < p < inf and 1 <= q <= inf; pass LorentzIndex::kInf for q = inf.
  LorentzIndex(double p, double q);

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double p() const { return p_; }
  double q() const { return q_; }
  /// Hoelder conjugate p' = p / (p - 1).
  double conj() const { return conj_; }
  bool q_infinite() const { return q_ == kInf; }

 private:
  double p_;
  double q_;
  double conj_;
};

double quasinorm(const StepFunction& f, const LorentzIndex& idx);
/// quasinorm of cells already in nonincreasing value order (as returned by
/// rearrangement); skips the sort.
double quasinorm_sorted(std::span<const Cell> star, const LorentzIndex& idx);

/// (p * int_0^inf s^{q-1} mu_f(s)^{q/p} ds)^{1/q}; q must be finite.
double quasinorm_via_distribution(const StepFunction& f, const LorentzIndex& idx);

/// The L^{(p,q)} norm built on f**. Relative quadrature tolerance 1e-9.
double norm_starstar(const StepFunction& f, const LorentzIndex& idx);

/// quasinorm(chi_{E_i} f) for each part E_i (a set of cell indices).
/// Parts must be pairwise disjoint.
std::vector<double> restricted_quasinorms(const StepFunction& f,
                                          std::span<const std::vector<std::size_t>> partition,
                                          const LorentzIndex& idx);

/// (q/p)^{1/q}: the constant in ||f||_{p,inf} <= C ||f||_{p,q}, q finite.
double weak_type_constant(const LorentzIndex& idx);

}  // namespace lorcap
