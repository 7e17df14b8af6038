#pragma once

// Nonnegative simple functions on an abstract measure space.
//
// A StepFunction is a finite list of (value, weight) cells; the weight is the
// measure of the set on which the function takes that value. Cells need not
// be sorted and values may repeat. Everything downstream (|f| under a
// measure, |u'| on a grid, the gradient of a piecewise-linear function) is
// reduced to this representation.

#include <cstddef>
#include <span>
#include <vector>

namespace lorcap {

struct Cell {
  double value = 0.0;
  double weight = 0.0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

class StepFunction {
 public:
  StepFunction() = default;

  /// Validates every cell (value >= 0, weight > 0, both finite).
  explicit StepFunction(std::vector<Cell> cells);

  std::span<const Cell> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  /// Sum of weights, accumulated left to right over the stored cells.
  double total_mass() const { return total_mass_; }

  double max_value() const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::vector<Cell> cells_;
  double total_mass_ = 0.0;
};

/// mu_f(t): total weight of cells whose value is strictly greater than t.
double distribution(const StepFunction& f, double t);

/// f* as a step function on [0, total_mass): values descending, equal values
/// merged into one cell.
StepFunction rearrangement(const StepFunction& f);

/// f**(t) = (1/t) * integral of f* over [0, t), evaluated piecewise.
double maximal(const StepFunction& f, double t);

/// f*(t) read off the rearranged cells (right-continuous; 0 beyond the mass).
double rearranged_value(const StepFunction& rearranged, double t);

/// Cellwise |f|^alpha, alpha > 0.
StepFunction cellwise_power(const StepFunction& f, double alpha);

/// Cellwise c * f, c >= 0; cells that become zero are kept.
StepFunction scaled(const StepFunction& f, double c);

/// chi_E f where E is the union of the listed cells.
StepFunction restrict_cells(const StepFunction& f, std::span<const std::size_t> indices);

/// Concatenates the cells of both functions (functions on disjoint sets).
StepFunction disjoint_sum(const StepFunction& f, const StepFunction& g);

}  // namespace lorcap
