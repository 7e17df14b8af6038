#include <doctest.h>

#include <cmath>
#include <random>

#include "lorcap/cap1d.hpp"
#include "lorcap/error.hpp"
#include "oracles.hpp"

using namespace lorcap;

namespace {
constexpr double kInf = LorentzIndex::kInf;
const Conductor1D kStandard(0.0, 0.4, 0.6, 1.0);

std::vector<LorentzIndex> index_sweep() {
  std::vector<LorentzIndex> out;
  for (double p : {1.5, 2.0, 3.0}) {
    for (double q : {1.0, 2.0, p, 4.0, kInf}) out.emplace_back(p, q);
  }
  return out;
}

Conductor1D random_conductor(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double A = u(rng) - 0.5;
  const double a = A + 0.02 + u(rng);
  const double b = a + u(rng);
  const double B = b + 0.02 + u(rng);
  return Conductor1D(A, a, b, B);
}
}  // namespace

TEST_CASE("exact capacitance examples") {
  CHECK(exact_p_cap(kStandard, 2.0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(exact_p_cap(kStandard, 3.0) == doctest::Approx(12.5).epsilon(1e-14));
  CHECK(exact_p_cap(Conductor1D(0.0, 1.0, 2.0, 3.0), 2.0) == 2.0);
  CHECK(exact_p_cap(Conductor1D(0.0, 0.5, 0.5, 1.0), 2.0) == doctest::Approx(4.0));
}

TEST_CASE("upper bounds examples") {
  CHECK(cap_upper(kStandard, {2.0, 1.0}) == doctest::Approx(20.0).epsilon(1e-13));
  CHECK(cap_upper(kStandard, {2.0, 2.0}) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(cap_upper_coarse(kStandard, 2.0) == doctest::Approx(40.0).epsilon(1e-13));
  // Exact L^{2,1} norm of 2.5 on a set of measure 0.8, computed by hand.
  const double hand = std::pow(2.5 * 2.0 * std::sqrt(0.8), 2.0);
  CHECK(cap_upper(kStandard, {2.0, 1.0}) == doctest::Approx(hand).epsilon(1e-13));
}

TEST_CASE("lower bound examples") {
  CHECK(cap_lower(kStandard, {2.0, kInf}) == doctest::Approx(0.625).epsilon(1e-13));
  CHECK(cap_lower(kStandard, {2.0, 1.0}) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(cap_lower(kStandard, {2.0, 2.0}) == doctest::Approx(0.625).epsilon(1e-13));
}

TEST_CASE("structural validation") {
  CHECK_THROWS_AS(Conductor1D(0.0, 0.0, 0.5, 1.0), StructuralError);
  CHECK_THROWS_AS(Conductor1D(0.0, 0.6, 0.4, 1.0), StructuralError);
  CHECK_THROWS_AS(Conductor1D(0.0, 0.4, 1.0, 1.0), StructuralError);
  CHECK_THROWS_AS(ConductorUnion1D({{0.0, 0.5}, {0.4, 1.0}}, {}), StructuralError);
  CHECK_THROWS_AS(ConductorUnion1D({{0.0, 1.0}}, {{0.1, 0.3}, {0.3, 0.4}}), StructuralError);
  CHECK_THROWS_AS(ConductorUnion1D({{0.0, 1.0}}, {{0.5, 1.0}}), StructuralError);
  CHECK_THROWS_AS(ConductorUnion1D({{0.0, 0.5}, {0.6, 1.0}}, {{0.4, 0.7}}), StructuralError);
  CHECK_THROWS_AS(ConductorUnion1D({{1.0, 1.0}}, {}), StructuralError);
}

TEST_CASE("union example and trivial cases") {
  const ConductorUnion1D u({{0.0, 0.5}, {0.6, 1.0}}, {{0.1, 0.2}, {0.7, 0.8}});
  const CapBracket b = cap_union(u, {2.0, 2.0});
  const double hand = (10.0 + 10.0 / 3.0) + (10.0 + 5.0);
  CHECK(b.lower == doctest::Approx(hand).epsilon(1e-13));
  CHECK(b.upper == doctest::Approx(hand).epsilon(1e-13));
  CHECK(hand == doctest::Approx(85.0 / 3.0));

  const CapBracket empty = cap_union(ConductorUnion1D({{0.0, 1.0}}, {}), {2.0, 1.0});
  CHECK(empty.lower == 0.0);
  CHECK(empty.upper == 0.0);

  for (const LorentzIndex& idx : index_sweep()) {
    const CapBracket single = cap_union(ConductorUnion1D({{0.0, 1.0}}, {{0.4, 0.6}}), idx);
    const bool collapsed = !idx.q_infinite() && idx.q() == idx.p();
    const double expected = collapsed ? exact_p_cap(kStandard, idx.p()) : cap_lower(kStandard, idx);
    CHECK(single.lower == doctest::Approx(expected).epsilon(1e-14));
    CHECK(single.upper == doctest::Approx(cap_upper(kStandard, idx)).epsilon(1e-14));
  }
}

TEST_CASE("bracket validity and monotonicity") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const Conductor1D c = random_conductor(rng);
    // Larger compact part, same open set.
    const Conductor1D bigger_k(c.outer_left(), c.inner_left() - u(rng) * 0.9 * c.left_gap(),
                               c.inner_right() + u(rng) * 0.9 * c.right_gap(), c.outer_right());
    // Larger open set, same compact part.
    const Conductor1D bigger_omega(c.outer_left() - u(rng), c.inner_left(), c.inner_right(),
                                   c.outer_right() + u(rng));
    for (const LorentzIndex& idx : index_sweep()) {
      CAPTURE(idx.p());
      CAPTURE(idx.q());
      const double lo = cap_lower(c, idx);
      const double hi = cap_upper(c, idx);
      CHECK(lo <= hi * (1.0 + 1e-12));
      if (!idx.q_infinite() && idx.q() == idx.p()) {
        const double ex = exact_p_cap(c, idx.p());
        CHECK(lo <= ex * (1.0 + 1e-12));
        CHECK(ex == doctest::Approx(hi).epsilon(1e-12));
      }
      CHECK(cap_lower(bigger_k, idx) >= lo * (1.0 - 1e-12));
      CHECK(cap_lower(bigger_omega, idx) <= lo * (1.0 + 1e-12));
      // The ramp bound is monotone only for q <= p; for q > p the brackets
      // still nest consistently.
      if (!idx.q_infinite() && idx.q() <= idx.p()) {
        CHECK(cap_upper(bigger_k, idx) >= hi * (1.0 - 1e-12));
        CHECK(cap_upper(bigger_omega, idx) <= hi * (1.0 + 1e-12));
      } else {
        CHECK(cap_lower(bigger_omega, idx) <= hi * (1.0 + 1e-12));
        CHECK(cap_lower(c, idx) <= cap_upper(bigger_k, idx) * (1.0 + 1e-12));
      }
    }
    for (double p : {1.5, 2.0, 3.0}) {
      CHECK(exact_p_cap(bigger_k, p) >= exact_p_cap(c, p));
      CHECK(exact_p_cap(bigger_omega, p) <= exact_p_cap(c, p));
      CHECK(cap_upper(c, {p, 1.0}) <= cap_upper_coarse(c, p) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("the ramp bound is not monotone when q > p") {
  const LorentzIndex idx(2.0, kInf);
  const Conductor1D narrow(0.2, 0.5, 0.6, 1.1);
  const Conductor1D wide(0.0, 0.5, 0.6, 1.1);
  CHECK(cap_upper(narrow, idx) == doctest::Approx(10.0 / 3.0).epsilon(1e-13));
  CHECK(cap_upper(wide, idx) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("an empty extra component changes nothing") {
  const ConductorUnion1D base({{0.0, 1.0}}, {{0.3, 0.5}});
  const ConductorUnion1D extra({{0.0, 1.0}, {2.0, 3.0}}, {{0.3, 0.5}});
  for (const LorentzIndex& idx : index_sweep()) {
    const CapBracket x = cap_union(base, idx);
    const CapBracket y = cap_union(extra, idx);
    CHECK(x.lower == y.lower);
    CHECK(x.upper == y.upper);
  }
}

TEST_CASE("capacitance depends only on the hull inside a component") {
  const ConductorUnion1D split({{0.0, 1.0}}, {{0.3, 0.35}, {0.5, 0.55}, {0.6, 0.7}});
  const ConductorUnion1D hull({{0.0, 1.0}}, {{0.3, 0.7}});
  for (const LorentzIndex& idx : index_sweep()) {
    CHECK(cap_union(split, idx).lower == cap_union(hull, idx).lower);
    CHECK(cap_union(split, idx).upper == cap_union(hull, idx).upper);
  }
  CHECK(cap_union(split, {2.0, 2.0}).upper == doctest::Approx(exact_p_cap(Conductor1D(0.0, 0.3, 0.7, 1.0), 2.0)));
}

TEST_CASE("union lower bound dominates the combined component bounds") {
  const ConductorUnion1D u({{0.0, 0.5}, {0.6, 1.0}}, {{0.1, 0.2}, {0.7, 0.8}});
  const Conductor1D c1(0.0, 0.1, 0.2, 0.5), c2(0.6, 0.7, 0.8, 1.0);
  for (const LorentzIndex& idx : index_sweep()) {
    const double l1 = cap_lower(c1, idx), l2 = cap_lower(c2, idx);
    const CapBracket b = cap_union(u, idx);
    CHECK(b.lower >= std::max(l1, l2) * (1.0 - 1e-12));
    if (!idx.q_infinite() && idx.q() < idx.p()) CHECK(b.lower >= (l1 + l2) * (1.0 - 1e-12));
    CHECK(b.lower <= b.upper * (1.0 + 1e-12));
  }
}

TEST_CASE("shrinking compact sets give converging capacities") {
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 2; j <= 4096; j *= 2) {
    const Conductor1D c(0.0, 0.4 - 0.3 / j, 0.6 + 0.3 / j, 1.0);
    const double v = exact_p_cap(c, 2.0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(prev == doctest::Approx(5.0).epsilon(1e-3));
  // Growing open sets.
  prev = std::numeric_limits<double>::infinity();
  for (int j = 2; j <= 4096; j *= 2) {
    const Conductor1D c(0.0 + 0.3 / j, 0.4, 0.6, 1.0 - 0.3 / j);
    const double v = cap_upper(c, {2.0, 1.0});
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(prev == doctest::Approx(20.0).epsilon(1e-3));
}
