#include <doctest.h>

#include <cmath>
#include <vector>

#include "hbundle/errors.hpp"
#include "hbundle/verify.hpp"

using namespace hbundle;

namespace {

RankFrequencyFunction line10() { return RankFrequencyFunction::line(0, 10, 10, 0); }

const auto kOne = ThresholdFamily::power(1);

}  // namespace

TEST_CASE("hypothesis profiles") {
  const auto f = line10();
  auto p = profile(f, OperatorSpec::identity(), kOne, 1);
  CHECK(p.d_monotonicity == Monotonicity::Decreasing);
  CHECK(p.d_certification == Certification::SegmentDerivative);
  CHECK(profile(f, OperatorSpec::averaging(), kOne, 1).d_monotonicity == Monotonicity::Decreasing);

  const auto rev = reversal_instance(5);
  p = profile(rev.f, rev.op, rev.family, rev.theta);
  CHECK(p.d_monotonicity == Monotonicity::Increasing);
  CHECK(p.t_monotonicity == Monotonicity::Decreasing);
  CHECK(p.a_monotonicity_in_x == Monotonicity::Decreasing);

  // Integral against θx² rises then falls.
  p = profile(RankFrequencyFunction::constant(1, 0, 10), OperatorSpec::integral(),
              ThresholdFamily::power(2), 0.2);
  CHECK(p.d_monotonicity == Monotonicity::NonMonotone);
}

TEST_CASE("sign rule on the h-setting and the reversal family") {
  const std::vector<double> xs{0.5, 2, 4.9, 5, 7, 9.5};
  const auto r = check_lemma1(line10(), OperatorSpec::identity(), kOne, 1, xs);
  CHECK(r.verdict() == Verdict::Pass);
  CHECK(r.trials == 6);
  CHECK(r.satisfied == 5);  // x = m is inconclusive

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto in = reversal_instance(seed);
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(in.f.support_end() * i / 20);
    CHECK(check_lemma1(in.f, in.op, in.family, in.theta, grid).verdict() == Verdict::Pass);
  }
}

TEST_CASE("dominance orders the bundles") {
  const auto f = line10();
  const auto k = perturb(f, PerturbMode::Multiplicative, 0.3);
  CHECK(check_corollary1(k, f, OperatorSpec::identity(), kOne, 1).verdict() == Verdict::Pass);
  CHECK(check_corollary1(f, k, OperatorSpec::identity(), kOne, 1).verdict() == Verdict::Pass);
  CHECK(check_corollary1(f, f, OperatorSpec::identity(), kOne, 1).verdict() == Verdict::Pass);
  // Crossing functions: premise fails.
  const RankFrequencyFunction c({{0, 8}, {5, 5}, {10, 2}});
  CHECK(check_corollary1(c, f, OperatorSpec::identity(), kOne, 1).verdict() == Verdict::Vacuous);
}

TEST_CASE("bundles move with theta") {
  const auto f = line10();
  CHECK(check_corollary2(f, OperatorSpec::identity(), kOne, 1, 2).verdict() == Verdict::Pass);
  CHECK(check_corollary2(f, OperatorSpec::averaging(), kOne, 1, 2).verdict() == Verdict::Pass);
  CHECK_THROWS_AS(check_corollary2(f, OperatorSpec::identity(), kOne, 2, 1), DomainError);
  const auto in = reversal_instance(11);
  const double hi = in.f.breakpoints().back().y / in.f.support_end();
  const auto r = check_corollary2(in.f, in.op, in.family, in.theta, 0.5 * (in.theta + hi));
  CHECK(r.verdict() == Verdict::Pass);
}

TEST_CASE("displacement inequalities") {
  const auto f = line10();
  const SequenceSpec harmonic;
  const auto schedule = harmonic.schedule(50);
  auto r = check_inequality_13(f, schedule, OperatorSpec::identity(), kOne, 1);
  CHECK(r.verdict() == Verdict::Pass);
  CHECK(r.satisfied == 50);

  const std::vector<Perturbation> none(5, Perturbation{PerturbMode::Multiplicative, 0.0});
  r = check_inequality_13(f, none, OperatorSpec::identity(), kOne, 1);
  CHECK(r.verdict() == Verdict::Pass);

  const SequenceSpec additive{PerturbMode::Additive, 1.0, false};
  r = check_inequality_13(f, additive.schedule(50), OperatorSpec::averaging(), kOne, 1);
  CHECK(r.verdict() == Verdict::Pass);

  // Identity + θx satisfies the forward hypothesis, never the reverse one.
  r = check_inequality_14(f, schedule, OperatorSpec::identity(), kOne, 1);
  CHECK(r.verdict() == Verdict::Vacuous);

  const auto rev = reversal_instance(2);
  const SequenceSpec small{PerturbMode::Multiplicative, 0.01, false};
  r = check_inequality_14(rev.f, small.schedule(50), rev.op, rev.family, rev.theta);
  CHECK(r.verdict() != Verdict::Fail);
  CHECK(r.satisfied > 0);

  int windows = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto in = integral_window_instance(seed, 1.0);
    if (!in) continue;
    ++windows;
    r = check_inequality_14(in->f, schedule, in->op, in->family, in->theta, {}, in->window);
    CHECK(r.verdict() == Verdict::Pass);
    CHECK(r.satisfied == 50);
  }
  CHECK(windows > 10);
}

TEST_CASE("h-bundle gap of the line is bounded by 10 / (2n)") {
  const auto f = line10();
  const SequenceSpec harmonic;
  CheckContext ctx;
  for (std::size_t n = 1; n <= 200; ++n) {
    const auto fn = *harmonic.term(f, n);
    const double m = solve_bundle_point(fn, OperatorSpec::identity(), kOne, 1, ctx.solve).m;
    // Closed form 10(1 + 1/n)/(2 + 1/n).
    const double exact = 10.0 * (1 + 1.0 / n) / (2 + 1.0 / n);
    CHECK(std::abs(m - exact) <= 1e-12);
    CHECK(std::abs(m - 5.0) <= 10.0 / (2.0 * n) + 1e-12);
  }
  const std::vector<double> grid{0.5, 1, 2, 4};
  const auto r = check_convergence_pointwise(f, harmonic, OperatorSpec::identity(), kOne, grid, 200);
  CHECK(r.verdict() == Verdict::Pass);
  const auto g = check_convergence_pointwise(f, SequenceSpec{PerturbMode::Multiplicative, 1, true},
                                             OperatorSpec::averaging(), kOne, grid, 200);
  CHECK(g.verdict() == Verdict::Pass);
}

TEST_CASE("constant sequence has zero gaps") {
  const auto f = line10();
  const SequenceSpec still{PerturbMode::Multiplicative, 0.0, false};
  const auto series = sup_gap_series(f, still, OperatorSpec::identity(), kOne, 0.5, 5, 10, 20);
  for (double s : series) CHECK(s == 0.0);
}

TEST_CASE("uniform convergence of the h- and g-bundles") {
  const auto f = line10();
  const SequenceSpec alt{PerturbMode::Multiplicative, 1.0, true};
  for (auto op : {OperatorSpec::identity(), OperatorSpec::averaging()}) {
    const auto r = check_convergence_uniform(f, alt, op, kOne, 0.5, 5, 24, 200, 0.05);
    CHECK(r.verdict() == Verdict::Pass);
  }
  // The first supremum (n = 2; n = 1 leaves the function space) never
  // shrinks as the θ-range reaches down towards 0.
  std::vector<double> sups;
  for (double lo : {3.0, 2.0, 1.0, 0.5, 0.25, 0.1}) {
    const auto s = sup_gap_series(f, alt, OperatorSpec::identity(), kOne, lo, 5, 24, 2);
    CHECK(std::isnan(s[0]));
    if (!sups.empty()) CHECK(s[1] >= sups.back() - 1e-12);
    sups.push_back(s[1]);
  }
  CHECK(sups.back() > sups.front());
  // 5θ/((1.5 + θ)(1 + θ)) peaks at θ = √1.5.
  const double peak = std::sqrt(1.5);
  CHECK(sups.back() == doctest::Approx(5 * peak / ((1.5 + peak) * (1 + peak))).epsilon(1e-9));
  CHECK_THROWS_AS(sup_gap_series(f, alt, OperatorSpec::identity(), kOne, 0, 5, 24, 2),
                  DomainError);
}

TEST_CASE("impact axioms of the stock bundles") {
  CheckContext ctx;
  for (auto [op, p] : {std::pair{OperatorKind::Identity, 1.0}, std::pair{OperatorKind::Averaging, 1.0},
                       std::pair{OperatorKind::Identity, 0.5}}) {
    const auto reports = check_impact_axioms(op, ThresholdFamily::power(p), 99, 40,
                                             FunctionSource::RandomDecreasing, ctx);
    REQUIRE(reports.size() == 4);
    for (const auto& r : reports) {
      CHECK_MESSAGE(r.verdict() == Verdict::Pass, r.property);
    }
  }
}

TEST_CASE("reversal family breaks the impact axioms") {
  const auto reports = check_impact_axioms(OperatorKind::Identity,
                                           ThresholdFamily::decreasing_linear(20), 99, 60,
                                           FunctionSource::ReversalLines);
  CHECK((reports[1].verdict() == Verdict::Fail || reports[2].verdict() == Verdict::Fail));
  const auto in = reversal_instance(4);
  const std::vector<double> grid{in.theta};
  CHECK_FALSE(check_theorem3_hypothesis(in.f, in.op, in.family, grid));
  CHECK(check_theorem3_hypothesis(line10(), OperatorSpec::identity(), kOne, grid));
  CHECK(check_theorem3_hypothesis(line10(), OperatorSpec::averaging(), kOne, grid));
  CHECK_THROWS_AS(check_impact_axioms(OperatorKind::Identity, kOne, 1, 1,
                                      FunctionSource::ReversalLines),
                  DomainError);
}

TEST_CASE("property suite is reproducible and passes on stock families") {
  SuiteConfig cfg;
  cfg.trials = 5;
  cfg.schedule_length = 10;
  cfg.convergence_n_max = 30;
  const auto a = run_property_suite(cfg);
  const auto b = run_property_suite(cfg);
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].property == b.reports[i].property);
    CHECK(a.reports[i].trials == b.reports[i].trials);
    CHECK(a.reports[i].satisfied == b.reports[i].satisfied);
  }
  CHECK_FALSE(a.any_failed());

  cfg.impact_include_reversal = true;
  const auto rev = run_property_suite(cfg);
  CHECK(rev.any_failed());
  for (const auto& r : rev.reports) {
    const bool reversal = r.property.find("/reversal") != std::string::npos &&
                          r.property.rfind("impact/", 0) == 0;
    if (r.verdict() == Verdict::Fail) CHECK_MESSAGE(reversal, r.property);
  }

  cfg.trials = 0;
  cfg.schedule_length = 0;
  cfg.convergence_n_max = 0;
  cfg.impact_include_reversal = false;
  CHECK(run_property_suite(cfg).all_vacuous());
}

TEST_CASE("sequence terms") {
  const SequenceSpec alt{PerturbMode::Multiplicative, 1.0, true};
  CHECK(alt.epsilon(1) == -1.0);
  CHECK(alt.epsilon(2) == 0.5);
  CHECK_FALSE(alt.term(line10(), 1).has_value());
  CHECK(alt.term(line10(), 2).has_value());
  CHECK(alt.schedule(3).size() == 3);
}
