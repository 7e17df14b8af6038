#include "lorcap/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lorcap/error.hpp"

namespace lorcap {

LorentzIndex::LorentzIndex(double p, double q) : p_(p), q_(q), conj_(p / (p - 1.0)) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ContractError("Lorentz index: p must satisfy 1 < p < inf, got " + std::to_string(p));
  }
  if (!(q >= 1.0)) {
    throw ContractError("Lorentz index: q must satisfy 1 <= q <= inf, got " + std::to_string(q));
  }
}

double quasinorm(const StepFunction& f, const LorentzIndex& idx) {
  return quasinorm_sorted(rearrangement(f).cells(), idx);
}

double quasinorm_sorted(std::span<const Cell> star, const LorentzIndex& idx) {
  const double p = idx.p();
  if (idx.q_infinite()) {
    // sup_s s^{1/p} f*(s) is approached at the right end of each cell.
    double sup = 0.0;
    double right = 0.0;
    for (const Cell& c : star) {
      right += c.weight;
      sup = std::max(sup, c.value * std::pow(right, 1.0 / p));
    }
    return sup;
  }
  const double q = idx.q();
  const double e = q / p;
  double sum = 0.0;
  double left = 0.0;
  for (const Cell& c : star) {
    const double right = left + c.weight;
    if (c.value > 0.0) {
      sum += std::pow(c.value, q) * (p / q) * (std::pow(right, e) - std::pow(left, e));
    }
    left = right;
  }
  return std::pow(sum, 1.0 / q);
}

double quasinorm_via_distribution(const StepFunction& f, const LorentzIndex& idx) {
  if (idx.q_infinite()) {
    throw ContractError("quasinorm_via_distribution: q = inf is not supported");
  }
  const StepFunction star = rearrangement(f);
  const double p = idx.p();
  const double q = idx.q();
  const auto cells = star.cells();
  // mu_f equals the cumulative mass m_k on [v_{k+1}, v_k).
  double sum = 0.0;
  double mass = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    mass += cells[k].weight;
    const double hi = cells[k].value;
    const double lo = k + 1 < cells.size() ? cells[k + 1].value : 0.0;
    if (hi <= 0.0) break;
    sum += std::pow(mass, q / p) * (std::pow(hi, q) - std::pow(lo, q)) / q;
  }
  return std::pow(p * sum, 1.0 / q);
}

namespace {

// f* data laid out for f**: piece k covers [left_k, left_k + w_k) where
// f** = c_k + d_k / t with d_k = S_{k-1} - c_k * left_k.
struct StarStarPiece {
  double left;
  double right;
  double value;
  double offset;  // d_k
};

std::vector<StarStarPiece> starstar_pieces(const StepFunction& star, double& total_integral) {
  std::vector<StarStarPiece> pieces;
  pieces.reserve(star.size());
  double left = 0.0;
  double integral = 0.0;
  for (const Cell& c : star.cells()) {
    const double right = left + c.weight;
    pieces.push_back({left, right, c.value, integral - c.value * left});
    integral += c.value * c.weight;
    left = right;
  }
  total_integral = integral;
  return pieces;
}

}  // namespace

double norm_starstar(const StepFunction& f, const LorentzIndex& idx) {
  const StepFunction star = rearrangement(f);
  if (star.empty() || star.max_value() == 0.0) return 0.0;
  double total = 0.0;
  const auto pieces = starstar_pieces(star, total);
  const double mass = star.total_mass();
  const double p = idx.p();

  if (idx.q_infinite()) {
    // t^{1/p} (c + d/t) has at most one interior maximum, at t = d (p-1) / c.
    double sup = 0.0;
    auto g = [p](const StarStarPiece& s, double t) {
      return std::pow(t, 1.0 / p) * (s.value + s.offset / t);
    };
    for (const StarStarPiece& s : pieces) {
      sup = std::max(sup, g(s, s.right));
      if (s.left > 0.0) sup = std::max(sup, g(s, s.left));
      if (s.value > 0.0 && s.offset > 0.0) {
        const double tc = s.offset * (p - 1.0) / s.value;
        if (tc > s.left && tc < s.right) sup = std::max(sup, g(s, tc));
      }
    }
    // Beyond the mass f** = total / t, decreasing against t^{1/p}.
    return sup;
  }

  const double q = idx.q();
  const double e = q / p;
  using boost::math::quadrature::gauss_kronrod;
  double sum = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const StarStarPiece& s = pieces[k];
    if (k == 0) {
      // f** is the constant c_1 on the first piece.
      sum += std::pow(s.value, q) * (p / q) * std::pow(s.right, e);
      continue;
    }
    auto integrand = [&](double t) { return std::pow(t, e - 1.0) * std::pow(s.value + s.offset / t, q); };
    double err = 0.0;
    sum += gauss_kronrod<double, 21>::integrate(integrand, s.left, s.right, 15, 1e-11, &err);
  }
  // Tail: int_M^inf t^{q/p - 1} (S/t)^q dt.
  sum += std::pow(total, q) * std::pow(mass, e - q) / (q - e);
  return std::pow(sum, 1.0 / q);
}

std::vector<double> restricted_quasinorms(const StepFunction& f,
                                          std::span<const std::vector<std::size_t>> partition,
                                          const LorentzIndex& idx) {
  std::vector<char> used(f.size(), 0);
  for (const auto& part : partition) {
    for (std::size_t i : part) {
      if (i >= f.size()) throw ContractError("restricted_quasinorms: cell index out of range");
      if (used[i]) {
        throw ContractError("restricted_quasinorms: parts overlap at cell " + std::to_string(i));
      }
      used[i] = 1;
    }
  }
  std::vector<double> out;
  out.reserve(partition.size());
  for (const auto& part : partition) out.push_back(quasinorm(restrict_cells(f, part), idx));
  return out;
}

double weak_type_constant(const LorentzIndex& idx) {
  if (idx.q_infinite()) return 1.0;
  return std::pow(idx.q() / idx.p(), 1.0 / idx.q());
}

}  // namespace lorcap
