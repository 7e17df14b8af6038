#include "lorcap/cap1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lorcap/error.hpp"

namespace lorcap {

namespace {

std::string describe(const Interval& i) {
  std::ostringstream os;
  os << "[" << i.left << ", " << i.right << "]";
  return os.str();
}

bool by_left(const Interval& x, const Interval& y) { return x.left < y.left; }

}  // namespace

Conductor1D::Conductor1D(double A, double a, double b, double B) : A_(A), a_(a), b_(b), B_(B) {
  if (!(A < a && a <= b && b < B) || !std::isfinite(A) || !std::isfinite(B)) {
    throw StructuralError("conductor requires A < a <= b < B");
  }
}

ConductorUnion1D::ConductorUnion1D(std::vector<Interval> omega, std::vector<Interval> compact)
    : omega_(std::move(omega)), compact_(std::move(compact)) {
  std::sort(omega_.begin(), omega_.end(), by_left);
  std::sort(compact_.begin(), compact_.end(), by_left);
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    const Interval& w = omega_[i];
    if (!(w.left < w.right) || !std::isfinite(w.left) || !std::isfinite(w.right)) {
      throw StructuralError("open component " + describe(w) + " is empty or unbounded");
    }
    if (i > 0 && omega_[i - 1].right > w.left) {
      throw StructuralError("open components " + describe(omega_[i - 1]) + " and " + describe(w) +
                            " overlap");
    }
  }
  for (std::size_t i = 0; i < compact_.size(); ++i) {
    const Interval& k = compact_[i];
    if (!(k.left <= k.right)) throw StructuralError("compact interval " + describe(k) + " is reversed");
    if (i > 0 && compact_[i - 1].right >= k.left) {
      throw StructuralError("compact intervals " + describe(compact_[i - 1]) + " and " + describe(k) +
                            " are not disjoint");
    }
    const bool inside = std::any_of(omega_.begin(), omega_.end(),
                                    [&](const Interval& w) { return w.contains_strictly(k); });
    if (!inside) {
      throw StructuralError("compact interval " + describe(k) + " is not inside any open component");
    }
  }
}

std::vector<ConductorUnion1D::ComponentHull> ConductorUnion1D::hulls() const {
  std::vector<ComponentHull> out;
  out.reserve(omega_.size());
  for (const Interval& w : omega_) {
    ComponentHull h{w, false, {}};
    for (const Interval& k : compact_) {
      if (!w.contains_strictly(k)) continue;
      if (!h.has_compact) {
        h.hull = k;
        h.has_compact = true;
      } else {
        h.hull.left = std::min(h.hull.left, k.left);
        h.hull.right = std::max(h.hull.right, k.right);
      }
    }
    out.push_back(h);
  }
  return out;
}

double exact_p_cap(const Conductor1D& c, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ContractError("exact_p_cap: p must satisfy 1 < p < inf");
  return std::pow(c.left_gap(), 1.0 - p) + std::pow(c.right_gap(), 1.0 - p);
}

StepFunction ramp_gradient(const Conductor1D& c) {
  const double s1 = c.left_gap();
  const double s2 = c.right_gap();
  return StepFunction({{1.0 / s1, s1}, {1.0 / s2, s2}});
}

double cap_upper(const Conductor1D& c, const LorentzIndex& idx) {
  return std::pow(quasinorm(ramp_gradient(c), idx), idx.p());
}

double cap_upper_coarse(const Conductor1D& c, double p) {
  const LorentzIndex idx(p, 1.0);
  const double e = -1.0 / idx.conj();
  return std::pow(p * (std::pow(c.left_gap(), e) + std::pow(c.right_gap(), e)), p);
}

double cap_lower(const Conductor1D& c, const LorentzIndex& idx) {
  const double p = idx.p();
  const double e = -1.0 / idx.conj();
  const double weak = std::max(std::pow(c.left_gap(), e), std::pow(c.right_gap(), e)) / idx.conj();
  double bound = std::pow(weak, p);
  if (!idx.q_infinite()) bound *= std::pow(p / idx.q(), p / idx.q());
  return bound;
}

StepFunction union_ramp_gradient(const ConductorUnion1D& u) {
  std::vector<Cell> ramps;
  for (const auto& h : u.hulls()) {
    if (!h.has_compact) continue;
    const StepFunction g = ramp_gradient(Conductor1D(h.component.left, h.hull.left, h.hull.right, h.component.right));
    ramps.insert(ramps.end(), g.cells().begin(), g.cells().end());
  }
  return StepFunction(std::move(ramps));
}

CapBracket cap_union(const ConductorUnion1D& u, const LorentzIndex& idx) {
  const double p = idx.p();
  const bool q_equals_p = !idx.q_infinite() && idx.q() == p;
  std::vector<double> lowers;
  for (const auto& h : u.hulls()) {
    if (!h.has_compact) continue;
    const Conductor1D c(h.component.left, h.hull.left, h.hull.right, h.component.right);
    lowers.push_back(q_equals_p ? exact_p_cap(c, p) : cap_lower(c, idx));
  }
  if (lowers.empty()) return {0.0, 0.0};

  CapBracket out;
  if (q_equals_p) {
    // ||u'||_{p,p}^p is additive over disjoint supports, so both sides are exact.
    double sum = 0.0;
    for (double v : lowers) sum += v;
    out.lower = sum;
  } else if (idx.q_infinite()) {
    // Restricting an admissible function to one component stays admissible
    // there and cannot increase the weak norm.
    out.lower = *std::max_element(lowers.begin(), lowers.end());
  } else if (idx.q() < p) {
    double sum = 0.0;
    for (double v : lowers) sum += v;
    out.lower = sum;
  } else {
    const double e = idx.q() / p;
    double sum = 0.0;
    for (double v : lowers) sum += std::pow(v, e);
    out.lower = std::pow(sum, 1.0 / e);
  }
  out.upper = q_equals_p ? out.lower : std::pow(quasinorm(union_ramp_gradient(u), idx), p);
  return out;
}

}  // namespace lorcap
