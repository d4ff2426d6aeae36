#include <doctest.h>

#include <cmath>
#include <vector>

#include "hbundle/errors.hpp"
#include "hbundle/funcspace.hpp"
#include "hbundle/random.hpp"
#include "hbundle/solver.hpp"

using namespace hbundle;

namespace {

const std::vector<double> kCounts{10, 8, 5, 4, 3, 2, 1};

RankFrequencyFunction line10() { return RankFrequencyFunction::line(0, 10, 10, 0); }

// Dense-grid argmin of |D| on the solving domain.
double grid_argmin(const TransformedFunction& tf, const ThresholdFamily& fam, double theta,
                   int n) {
  const auto dom = solving_domain(tf, fam);
  double best = dom.lo;
  double best_abs = INFINITY;
  for (int i = 0; i <= n; ++i) {
    const double x = i == n ? dom.hi : dom.lo + dom.length() * i / n;
    const double d = std::abs(t_eval(tf, x) - a_eval(fam, x, theta));
    if (d < best_abs) {
      best_abs = d;
      best = x;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("closed-form indices of the line") {
  const auto f = line10();
  CHECK(std::abs(h_index(f, 1) - 5.0) <= 1e-9);
  CHECK(std::abs(h_index(f, 2) - 10.0 / 3) <= 1e-9);
  CHECK(std::abs(g_index(f, 1) - 20.0 / 3) <= 1e-9);
  CHECK(std::abs(g_index(f, 2) - 4.0) <= 1e-9);
  // x² = 10 − x and x² = 10 − x/2.
  CHECK(std::abs(kosmulski_index(f, 1, 2) - (-1 + std::sqrt(41.0)) / 2) <= 1e-9);
  CHECK(std::abs(g_kosmulski_index(f, 1, 2) - (-0.5 + std::sqrt(40.25)) / 2) <= 1e-9);
  CHECK(std::abs(polar_radius(f, 1) - 5 * std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("h-bundle of the line is S / (1 + theta)") {
  const auto f = line10();
  for (double theta : {0.01, 0.5, 1.0, 3.0, 100.0}) {
    CHECK(std::abs(h_index(f, theta) - 10 / (1 + theta)) <= 1e-9);
    // The g-range of the line starts at μ(S)/S = 0.5.
    if (theta >= 0.5) CHECK(std::abs(g_index(f, theta) - 20 / (2 * theta + 1)) <= 1e-9);
  }
  CHECK_THROWS_AS(g_index(f, 0.01), NoRootError);
}

TEST_CASE("discrete fixture matches the discrete indices") {
  const auto d = from_citation_counts(kCounts);
  CHECK(std::abs(h_index(d, 1) - 4.0) <= 1e-9);
  CHECK(std::abs(g_index(d, 1) - 6.0) <= 1e-9);
  // 10⁶-point grid oracle.
  const auto fam = ThresholdFamily::power(1);
  CHECK(std::abs(grid_argmin(apply(OperatorSpec::identity(), d), fam, 1, 1000000) - 4.0) <= 1e-5);
  CHECK(std::abs(grid_argmin(apply(OperatorSpec::averaging(), d), fam, 1, 1000000) - 6.0) <=
        1e-5);
}

TEST_CASE("constant functions") {
  const auto c = RankFrequencyFunction::constant(9, 0, 20);
  CHECK(std::abs(kosmulski_index(c, 1, 2) - 3.0) <= 1e-9);
  CHECK(std::abs(g_kosmulski_index(c, 1, 2) - 3.0) <= 1e-9);
  CHECK(std::abs(h_index(c, 1) - 9.0) <= 1e-9);
  CHECK(std::abs(g_index(c, 1) - h_index(c, 1)) <= 1e-9);
  const auto four = RankFrequencyFunction::constant(4, 0, 8);
  CHECK(std::abs(polar_radius(four, 1) - 4 * std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("inadmissible theta gives NoRoot") {
  const auto c = RankFrequencyFunction::constant(4, 0, 8);
  const auto r = solve_bundle_point(c, OperatorSpec::identity(), ThresholdFamily::power(1), 0.25);
  CHECK(r.status == SolveStatus::NoRoot);
  CHECK(std::isnan(r.m));
  CHECK_THROWS_AS(h_index(c, 0.25), NoRootError);
  // The admissible minimum itself touches zero at S.
  const auto edge = solve_bundle_point(c, OperatorSpec::identity(), ThresholdFamily::power(1), 0.5);
  CHECK(edge.ok());
  CHECK(edge.m == doctest::Approx(8.0));
}

TEST_CASE("several roots give NonUnique") {
  // f − θx² with f crossing the parabola three times is impossible for
  // decreasing f and increasing A; the integral operator against θx² does it.
  const auto f = RankFrequencyFunction::constant(1, 0, 10);
  const auto r = solve_bundle_point(f, OperatorSpec::integral(), ThresholdFamily::power(2, 0), 0.2);
  // I(f)(x) = x = 0.2x² at x = 0 and x = 5.
  CHECK(r.status == SolveStatus::NonUnique);
  CHECK_THROWS_AS(kosmulski_index(RankFrequencyFunction::constant(1, 0, 10), -1, 2),
                  NonPositiveTheta);
}

TEST_CASE("null function solves at the support start") {
  const auto z = RankFrequencyFunction::constant(0, 0, 5);
  const auto r = solve_bundle_point(z, OperatorSpec::averaging(), ThresholdFamily::power(2), 3);
  CHECK(r.status == SolveStatus::ExactSegment);
  CHECK(r.m == 0.0);
}

TEST_CASE("solver agrees with a dense-grid oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto f = random_function(seed);
    Rng rng(seed);
    for (auto [op, fam] : {std::pair{OperatorSpec::identity(), ThresholdFamily::power(1)},
                           std::pair{OperatorSpec::averaging(), ThresholdFamily::power(1)},
                           std::pair{OperatorSpec::identity(), ThresholdFamily::power(2)},
                           std::pair{OperatorSpec::identity(), ThresholdFamily::power(0.5)}}) {
      const auto tf = apply(op, f);
      const double x = rng.uniform(0.05, 0.95) * f.support_end();
      const double theta = psi(tf, fam, x);
      const auto r = solve_equation(tf, fam, theta);
      REQUIRE(r.ok());
      const int n = 100000;
      const double spacing = f.support_end() / n;
      CHECK(std::abs(r.m - grid_argmin(tf, fam, theta, n)) <= spacing + 1e-10);
      CHECK(std::abs(r.m - x) <= 1e-8);
    }
  }
}

TEST_CASE("exact and bisection paths agree") {
  SolveConfig bisect;
  bisect.exact_when_possible = false;
  bisect.abs_tol_x = 1e-12;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_function(seed);
    for (auto op : {OperatorKind::Identity, OperatorKind::Averaging}) {
      const auto tf = apply(OperatorSpec{op, 0.0}, f);
      const auto fam = ThresholdFamily::power(1);
      const double theta = psi(tf, fam, 0.37 * f.support_end());
      const auto exact = solve_equation(tf, fam, theta);
      const auto slow = solve_equation(tf, fam, theta, bisect);
      REQUIRE(exact.ok());
      CHECK(exact.status == SolveStatus::ExactSegment);
      CHECK(slow.status == SolveStatus::Bisection);
      CHECK(std::abs(exact.m - slow.m) <= 1e-10);
    }
  }
}

TEST_CASE("bundle sampling") {
  const auto f = line10();
  const std::vector<double> grid{0.5, 1, 2};
  const auto b = sample_bundle(f, OperatorSpec::identity(), ThresholdFamily::power(1), grid, {},
                               "line");
  REQUIRE(b.entries.size() == 3);
  CHECK(std::abs(b.entries[0].m - 20.0 / 3) <= 1e-9);
  CHECK(std::abs(b.entries[1].m - 5.0) <= 1e-9);
  CHECK(std::abs(b.entries[2].m - 10.0 / 3) <= 1e-9);
  CHECK(b.function_id == "line");
  CHECK(b.threshold == "power(p=1,shift=0)");
  CHECK_THROWS_AS(sample_bundle(f, OperatorSpec::identity(), ThresholdFamily::power(1),
                                std::vector<double>{2, 1}),
                  DomainError);
  CHECK_THROWS_AS(sample_bundle(f, OperatorSpec::identity(), ThresholdFamily::power(1),
                                std::vector<double>{0, 1}),
                  NonPositiveTheta);
}

TEST_CASE("solve window restricts the search") {
  const auto f = RankFrequencyFunction::constant(1, 0, 10);
  const auto r = solve_equation(apply(OperatorSpec::integral(), f), ThresholdFamily::power(2, 0),
                                0.2, {}, Interval{1, 10});
  REQUIRE(r.ok());
  CHECK(std::abs(r.m - 5.0) <= 1e-9);
}

TEST_CASE("config validation") {
  SolveConfig bad;
  bad.abs_tol_x = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = {};
  bad.scan_points = 4;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
