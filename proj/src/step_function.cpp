#include "lorcap/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lorcap/error.hpp"

namespace lorcap {

StepFunction::StepFunction(std::vector<Cell> cells) : cells_(std::move(cells)) {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (!std::isfinite(c.value) || c.value < 0.0) {
      throw ContractError("cell " + std::to_string(i) + ": value must be finite and >= 0");
    }
    if (!std::isfinite(c.weight) || c.weight <= 0.0) {
      throw ContractError("cell " + std::to_string(i) + ": weight must be finite and > 0");
    }
    total_mass_ += c.weight;
  }
}

double StepFunction::max_value() const {
  double m = 0.0;
  for (const Cell& c : cells_) m = std::max(m, c.value);
  return m;
}

double distribution(const StepFunction& f, double t) {
  if (!(t >= 0.0)) throw ContractError("distribution: level t must be >= 0");
  double mass = 0.0;
  for (const Cell& c : f.cells()) {
    if (c.value > t) mass += c.weight;
  }
  return mass;
}

StepFunction rearrangement(const StepFunction& f) {
  std::vector<Cell> sorted(f.cells().begin(), f.cells().end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Cell& x, const Cell& y) { return x.value > y.value; });
  std::vector<Cell> merged;
  merged.reserve(sorted.size());
  for (const Cell& c : sorted) {
    if (!merged.empty() && merged.back().value == c.value) {
      merged.back().weight += c.weight;
    } else {
      merged.push_back(c);
    }
  }
  return StepFunction(std::move(merged));
}

double rearranged_value(const StepFunction& rearranged, double t) {
  double right = 0.0;
  for (const Cell& c : rearranged.cells()) {
    right += c.weight;
    if (t < right) return c.value;
  }
  return 0.0;
}

double maximal(const StepFunction& f, double t) {
  if (!(t > 0.0)) throw ContractError("maximal: t must be > 0");
  const StepFunction star = rearrangement(f);
  double integral = 0.0;
  double left = 0.0;
  for (const Cell& c : star.cells()) {
    const double right = left + c.weight;
    if (t <= right) {
      integral += c.value * (t - left);
      return integral / t;
    }
    integral += c.value * c.weight;
    left = right;
  }
  return integral / t;
}

StepFunction cellwise_power(const StepFunction& f, double alpha) {
  if (!(alpha > 0.0)) throw ContractError("cellwise_power: alpha must be > 0");
  std::vector<Cell> out(f.cells().begin(), f.cells().end());
  for (Cell& c : out) c.value = std::pow(c.value, alpha);
  return StepFunction(std::move(out));
}

StepFunction scaled(const StepFunction& f, double c) {
  if (!(c >= 0.0)) throw ContractError("scaled: factor must be >= 0");
  std::vector<Cell> out(f.cells().begin(), f.cells().end());
  for (Cell& cell : out) cell.value *= c;
  return StepFunction(std::move(out));
}

StepFunction restrict_cells(const StepFunction& f, std::span<const std::size_t> indices) {
  std::vector<Cell> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= f.size()) throw ContractError("restrict_cells: cell index out of range");
    out.push_back(f.cells()[i]);
  }
  return StepFunction(std::move(out));
}

StepFunction disjoint_sum(const StepFunction& f, const StepFunction& g) {
  std::vector<Cell> out(f.cells().begin(), f.cells().end());
  out.insert(out.end(), g.cells().begin(), g.cells().end());
  return StepFunction(std::move(out));
}

}  // namespace lorcap
