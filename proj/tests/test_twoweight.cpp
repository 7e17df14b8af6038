#include <doctest.h>

#include <cmath>
#include <random>

#include "lorcap/error.hpp"
#include "lorcap/twoweight.hpp"
#include "oracles.hpp"

using namespace lorcap;
using lorcap::testing::random_tents;
using lorcap::testing::unit_tent;

namespace {
const Interval kUnit{0.0, 1.0};
const ExponentTuple kSquares(2.0, 2.0, 2.0, 2.0);
const Measure1D kDelta = Measure1D::dirac(0.5);
const Measure1D kLeb = Measure1D::lebesgue(kUnit);

struct MeasurePair {
  Measure1D mu;
  Measure1D nu;
};

std::vector<MeasurePair> measure_suite() {
  return {
      {kDelta, kLeb},
      {kLeb, kLeb},
      {Measure1D({{0.3, 0.5}, {0.7, 2.0}}, {}, {}), kLeb},
      {Measure1D({}, {0.0, 0.5, 1.0}, {2.0, 0.5}), Measure1D({{0.2, 1.0}}, {0.0, 1.0}, {0.5})},
  };
}

std::vector<PLFunction> tent_corpus() {
  std::vector<PLFunction> out;
  for (double w : {0.5, 0.25, 0.125}) out.push_back(PLFunction::tent(kUnit, 0.5, w));
  return out;
}
}  // namespace

TEST_CASE("measure examples") {
  CHECK(measure_interval(kDelta, {0.4, 0.6}) == 1.0);
  CHECK(measure_interval(kLeb, {0.2, 0.7}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(measure_interval(kDelta, {0.5, 0.6}) == 0.0);
  CHECK(measure_interval(kLeb, {-1.0, 2.0}) == 1.0);
  CHECK(measure_interval(kDelta.scaled(3.0), {0.0, 1.0}) == 3.0);
  CHECK_THROWS_AS(Measure1D({{0.5, -1.0}}, {}, {}), StructuralError);
  CHECK_THROWS_AS(Measure1D({}, {0.0, 1.0}, {1.0, 2.0}), StructuralError);
  CHECK_THROWS_AS(Measure1D({}, {1.0, 0.0}, {1.0}), StructuralError);
  CHECK_THROWS_AS(Measure1D({}, {0.0, 1.0}, {-1.0}), StructuralError);
}

TEST_CASE("exponent validation") {
  CHECK(ExponentTuple(2.0, 3.0, 3.0, 2.0).m() == 3.0);
  CHECK_THROWS_AS(ExponentTuple(1.0, 2.0, 2.0, 2.0), ContractError);
  CHECK_THROWS_AS(ExponentTuple(2.0, 2.0, 1.5, 2.0), ContractError);
  CHECK_THROWS_AS(ExponentTuple(2.0, 2.0, 2.0, 3.0), ContractError);
  CHECK_THROWS_AS(ExponentTuple(2.0, 2.0, 2.0, 1.0), ContractError);
}

TEST_CASE("criterion ratio at a single point") {
  const double expected = 1.0 / (std::pow(0.4, -0.5) + 1.0);
  CHECK(criterion_ratio(kDelta, kLeb, kSquares, {0.5, 0.1, 0.4}) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(0.38743).epsilon(1e-5));
  CHECK_THROWS_AS(criterion_ratio(kDelta, kLeb, kSquares, {0.5, 0.0, 0.4}), ContractError);
}

TEST_CASE("criterion grid") {
  const auto pts = criterion_points(kUnit, {});
  CHECK(pts.size() == 50u * 50u * 50u);
  for (const CriterionPoint& pt : pts) {
    REQUIRE(pt.x - pt.d - pt.tau > 0.0);
    REQUIRE(pt.x + pt.d + pt.tau < 1.0);
  }
  const double K = criterion_K(kDelta, kLeb, kUnit, kSquares);
  CHECK(K >= criterion_ratio(kDelta, kLeb, kSquares, {0.5, 0.1, 0.4}));
  CHECK(criterion_K(Measure1D(), kLeb, kUnit, kSquares) == 0.0);
  CHECK_THROWS_AS(criterion_K(kDelta, kLeb, kUnit, kSquares, std::span<const CriterionPoint>{}), ContractError);
  CHECK_THROWS_AS(criterion_points(kUnit, {0, 5, 5}), ContractError);
  const CriterionPoint outside{0.5, 0.3, 0.3};
  CHECK_THROWS_AS(criterion_K(kDelta, kLeb, kUnit, kSquares, std::span<const CriterionPoint>(&outside, 1)),
                  ContractError);
}

TEST_CASE("hull reduction") {
  const ConductorUnion1D pair({{0.0, 1.0}}, {{0.1, 0.2}, {0.3, 0.4}});
  const auto pieces = hull_reduction(pair);
  REQUIRE(pieces.size() == 1);
  CHECK(pieces[0].hull == Interval{0.1, 0.4});
  CHECK(pieces[0].tau == doctest::Approx(0.1));
  CHECK(pieces[0].concentric.left == doctest::Approx(0.0));
  CHECK(pieces[0].concentric.right == doctest::Approx(0.5));
  CHECK(hull_reduction(ConductorUnion1D({{0.0, 1.0}}, {})).empty());
}

TEST_CASE("general criterion on a single interval") {
  const ConductorUnion1D pair({{0.0, 1.0}}, {{0.45, 0.55}});
  const double ratio = general_criterion_ratio(kDelta, kLeb, pair, kSquares, {2.0, 2.0});
  const double cap = exact_p_cap(Conductor1D(0.0, 0.45, 0.55, 1.0), 2.0);
  CHECK(cap == doctest::Approx(2.0 / 0.45));
  CHECK(ratio == doctest::Approx(1.0 / (std::sqrt(40.0 / 9.0) + 1.0)).epsilon(1e-14));
  CHECK(general_criterion_ratio(kDelta, kLeb, ConductorUnion1D({{0.0, 1.0}}, {}), kSquares, {2.0, 2.0}) == 0.0);
}

TEST_CASE("hull reduction agrees with the direct single-interval computation") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int k = 0; k < 100; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const ConductorUnion1D pair({{0.0, 1.0}}, {{a, b}});
    const Conductor1D c(0.0, a, b, 1.0);
    for (double q : {1.0, 2.0, 4.0}) {
      const LorentzIndex idx(2.0, q);
      const ExponentTuple ex(2.0, q, std::max(2.0, q) + 1.0, 1.5);
      const double cap = q == 2.0 ? exact_p_cap(c, 2.0) : cap_upper(c, idx);
      const double direct = std::pow(measure_interval(kLeb, {a, b}), 1.0 / ex.r()) /
                            (std::pow(cap, 0.5) + std::pow(measure_interval(kLeb, {0.0, 1.0}), 1.0 / ex.s()));
      const std::vector<ConductorUnion1D> pairs{pair};
      CHECK(general_criterion_K(kLeb, kLeb, pairs, ex, idx) == direct);
    }
  }
}

TEST_CASE("tent inequality ratio") {
  const double expected = 1.0 / (2.0 + std::sqrt(1.0 / 3.0));
  CHECK(inequality_ratio(kDelta, kLeb, kSquares, unit_tent()) == doctest::Approx(expected).epsilon(1e-8));
  const auto corpus = tent_corpus();
  double best = 0.0;
  for (const PLFunction& f : corpus) best = std::max(best, inequality_ratio(kDelta, kLeb, kSquares, f));
  CHECK(inequality_A(kDelta, kLeb, kUnit, kSquares, corpus) == best);
  CHECK(inequality_A(kDelta, kLeb, kUnit, kSquares, std::span<const PLFunction>{}) == 0.0);
  const std::vector<PLFunction> outside{PLFunction::tent({-1.0, 2.0}, 1.5, 0.2)};
  CHECK_THROWS_AS(inequality_A(kDelta, kLeb, kUnit, kSquares, outside), ContractError);
}

TEST_CASE("push-forward under a density") {
  // |f| of the tent under Lebesgue: the L^2 norm is 1/sqrt(3).
  const StepFunction cells = pushforward_cells(unit_tent(), kLeb);
  CHECK(cells.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quasinorm(cells, {2.0, 2.0}) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-8));
  // Atoms become point evaluations.
  const StepFunction atoms = pushforward_cells(unit_tent(), Measure1D({{0.25, 2.0}, {0.9, 1.0}}, {}, {}));
  REQUIRE(atoms.size() == 2);
  CHECK(atoms.cells()[0] == Cell{0.5, 2.0});
  CHECK(atoms.cells()[1].value == doctest::Approx(0.2));
}

TEST_CASE("scaling covariance") {
  const std::vector<ConductorUnion1D> pairs{ConductorUnion1D({{0.0, 1.0}}, {{0.45, 0.55}}),
                                           ConductorUnion1D({{0.0, 0.6}, {0.65, 1.0}}, {{0.2, 0.3}, {0.7, 0.8}})};
  const auto corpus = tent_corpus();
  const auto pts = criterion_points(kUnit, {10, 10, 10});
  for (const ExponentTuple& ex : {kSquares, ExponentTuple(2.0, 3.0, 4.0, 1.5)}) {
    const LorentzIndex idx(ex.p(), ex.q());
    for (const MeasurePair& m : measure_suite()) {
      const double K = criterion_K(m.mu, m.nu, kUnit, ex, pts);
      const double G = general_criterion_K(m.mu, m.nu, pairs, ex, idx);
      const double A = inequality_A(m.mu, m.nu, kUnit, ex, corpus);
      for (double lambda : {0.25, 4.0, 100.0}) {
        const Measure1D mu = m.mu.scaled(lambda);
        const double factor = std::pow(lambda, 1.0 / ex.r());
        CHECK(criterion_K(mu, m.nu, kUnit, ex, pts) == doctest::Approx(factor * K).epsilon(1e-12));
        CHECK(general_criterion_K(mu, m.nu, pairs, ex, idx) == doctest::Approx(factor * G).epsilon(1e-12));
        CHECK(inequality_A(mu, m.nu, kUnit, ex, corpus) == doctest::Approx(factor * A).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("estimates grow with the sampled family") {
  std::mt19937_64 rng(52);
  const auto small = criterion_points(kUnit, {8, 8, 8});
  auto large = small;
  const auto extra = criterion_points(kUnit, {13, 9, 7});
  large.insert(large.end(), extra.begin(), extra.end());
  std::vector<PLFunction> corpus;
  for (int k = 0; k < 4; ++k) corpus.push_back(random_tents(rng));
  std::vector<PLFunction> bigger = corpus;
  for (int k = 0; k < 4; ++k) bigger.push_back(random_tents(rng));
  for (const MeasurePair& m : measure_suite()) {
    CHECK(criterion_K(m.mu, m.nu, kUnit, kSquares, large) >= criterion_K(m.mu, m.nu, kUnit, kSquares, small));
    CHECK(inequality_A(m.mu, m.nu, kUnit, kSquares, bigger) >= inequality_A(m.mu, m.nu, kUnit, kSquares, corpus));
  }
}

TEST_CASE("both estimates are finite and positive on the measure suite") {
  const auto pts = criterion_points(kUnit, {20, 20, 20});
  const auto corpus = tent_corpus();
  for (const MeasurePair& m : measure_suite()) {
    const double K = criterion_K(m.mu, m.nu, kUnit, kSquares, pts);
    const double A = inequality_A(m.mu, m.nu, kUnit, kSquares, corpus);
    CHECK(std::isfinite(K));
    CHECK(std::isfinite(A));
    CHECK(K > 0.0);
    CHECK(A > 0.0);
    // Both grow like lambda^{1/r}, so their ratio is scale invariant.
    const Measure1D big = m.mu.scaled(1e6);
    const double ratio_big = inequality_A(big, m.nu, kUnit, kSquares, corpus) / criterion_K(big, m.nu, kUnit, kSquares, pts);
    CHECK(ratio_big == doctest::Approx(A / K).epsilon(1e-10));
  }
}
