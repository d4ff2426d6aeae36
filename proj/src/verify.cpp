#include "hbundle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "hbundle/errors.hpp"
#include "hbundle/random.hpp"

namespace hbundle {

namespace {

constexpr int kProfileGrid = 1024;
constexpr double kProfileTolerance = 1e-12;
constexpr double kStrictGap = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  xs.back() = hi;
  return xs;
}

Interval clip(Interval dom, const std::optional<Interval>& window) {
  if (window) {
    dom.lo = std::max(dom.lo, window->lo);
    dom.hi = std::min(dom.hi, window->hi);
    if (!(dom.lo < dom.hi)) throw DomainError("window does not meet the solving domain");
  }
  return dom;
}

double residual(const TransformedFunction& tf, const ThresholdFamily& family, double theta,
                double x) {
  return t_eval(tf, x) - a_eval(family, x, theta);
}

bool opposite(Monotonicity a, Monotonicity b) {
  return (a == Monotonicity::Decreasing && b == Monotonicity::Increasing) ||
         (a == Monotonicity::Increasing && b == Monotonicity::Decreasing);
}

bool analytic_derivative(const TransformedFunction& tf, const ThresholdFamily& family) {
  if (tf.kind() == OperatorKind::Identity) return true;
  if (tf.kind() == OperatorKind::Integral) {
    return !family.is_power() || family.as_power().p == 1.0 || family.as_power().p == 2.0;
  }
  return false;
}

// Sum of two functions on the same support.
RankFrequencyFunction add(const RankFrequencyFunction& f, const RankFrequencyFunction& g) {
  const auto xs = merged_abscissae(f, g);
  std::vector<Breakpoint> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x, eval(f, x) + eval(g, x)});
  // Rounding in the sum may break monotonicity by an ulp.
  for (std::size_t i = 1; i < pts.size(); ++i) pts[i].y = std::min(pts[i].y, pts[i - 1].y);
  return RankFrequencyFunction(std::move(pts));
}

// f on [a, cut]; past cut, the tail is pulled towards f(cut) by factor κ ∈ ]0, 1[.
RankFrequencyFunction flatten_tail(const RankFrequencyFunction& f, double cut, double kappa) {
  std::vector<Breakpoint> pts;
  const double at_cut = eval(f, cut);
  for (const auto& p : f.breakpoints()) {
    if (p.x < cut) pts.push_back(p);
  }
  pts.push_back({cut, at_cut});
  for (const auto& p : f.breakpoints()) {
    if (p.x > cut) pts.push_back({p.x, std::min(at_cut, at_cut - kappa * (at_cut - p.y))});
  }
  return RankFrequencyFunction(std::move(pts));
}

// Largest |x − m| compatible with |A(x) − A(m)| ≤ r.
double displacement_bound(const ThresholdFamily& family, double theta, double m, double r) {
  const double v = a_eval(family, m, theta);
  double worst = 0.0;
  for (double target : {v + r, v - r}) {
    double x;
    if (family.is_power() && target <= 0.0) {
      x = family.as_power().shift;
    } else {
      x = a_inverse_x(family, theta, target);
    }
    worst = std::max(worst, std::abs(x - m));
  }
  return worst;
}

std::string label(OperatorKind op, const ThresholdFamily& family) {
  return std::string(to_string(op)) + "+" + family.describe();
}

}  // namespace

// ---------------------------------------------------------------------------
// Profiles

HypothesisProfile profile(const TransformedFunction& tf, const ThresholdFamily& family,
                          double theta, std::optional<Interval> window) {
  if (!(theta > 0.0)) throw NonPositiveTheta("theta must be > 0");
  const Interval dom = clip(solving_domain(tf, family), window);

  HypothesisProfile prof;
  prof.t_monotonicity = tf.monotonicity();
  prof.a_monotonicity_in_x = family.monotonicity_in_x();

  if (opposite(prof.t_monotonicity, prof.a_monotonicity_in_x)) {
    prof.d_monotonicity = prof.t_monotonicity;
    prof.d_certification = Certification::SegmentDerivative;
    return prof;
  }

  if (analytic_derivative(tf, family)) {
    // D' is monotone on each segment, so its sign range is settled at the ends.
    const auto& f = tf.source();
    std::vector<double> cuts{dom.lo, dom.hi};
    for (const auto& p : f.breakpoints()) {
      if (p.x > dom.lo && p.x < dom.hi) cuts.push_back(p.x);
    }
    std::sort(cuts.begin(), cuts.end());
    double scale = 1.0;
    std::vector<double> derivs;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const std::size_t seg = f.segment_index(0.5 * (cuts[j] + cuts[j + 1]));
      for (double x : {cuts[j], cuts[j + 1]}) {
        double t_prime;
        if (tf.kind() == OperatorKind::Identity) {
          t_prime = f.slope(seg);
        } else {
          const auto& p = f.breakpoints()[seg];
          t_prime = p.y + f.slope(seg) * (x - p.x);
        }
        const double a_prime = a_derivative_x(family, x, theta);
        if (std::isfinite(a_prime)) scale = std::max({scale, std::abs(t_prime), std::abs(a_prime)});
        derivs.push_back(t_prime - a_prime);
      }
    }
    const double tol = kProfileTolerance * scale;
    const bool dec = std::all_of(derivs.begin(), derivs.end(), [&](double d) { return d <= tol; });
    const bool inc = std::all_of(derivs.begin(), derivs.end(), [&](double d) { return d >= -tol; });
    prof.d_monotonicity = dec   ? Monotonicity::Decreasing
                          : inc ? Monotonicity::Increasing
                                : Monotonicity::NonMonotone;
    prof.d_certification = Certification::SegmentDerivative;
    return prof;
  }

  const auto xs = uniform_grid(dom.lo, dom.hi, kProfileGrid);
  std::vector<double> ds;
  ds.reserve(xs.size());
  double scale = 1.0;
  for (double x : xs) {
    ds.push_back(residual(tf, family, theta, x));
    scale = std::max(scale, std::abs(ds.back()));
  }
  prof.d_monotonicity = classify_samples(ds, kProfileTolerance * scale);
  prof.d_certification = Certification::GridSample;
  return prof;
}

HypothesisProfile profile(const RankFrequencyFunction& f, const OperatorSpec& op,
                          const ThresholdFamily& family, double theta) {
  return profile(apply(op, f), family, theta);
}

// ---------------------------------------------------------------------------
// Sequences

double SequenceSpec::epsilon(std::size_t n) const {
  const double sign = alternating && n % 2 == 1 ? -1.0 : 1.0;
  return scale * sign / static_cast<double>(n);
}

std::optional<RankFrequencyFunction> SequenceSpec::term(const RankFrequencyFunction& f,
                                                        std::size_t n) const {
  try {
    return perturb(f, mode, epsilon(n));
  } catch (const WouldViolateInvariants&) {
    return std::nullopt;
  }
}

std::vector<Perturbation> SequenceSpec::schedule(std::size_t n_max) const {
  std::vector<Perturbation> out;
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) out.push_back({mode, epsilon(n)});
  return out;
}

// ---------------------------------------------------------------------------
// Sign rule, dominance and θ-order

VerificationReport check_lemma1(const RankFrequencyFunction& k, const OperatorSpec& op,
                                const ThresholdFamily& family, double theta,
                                std::span<const double> x_samples, const CheckContext& ctx) {
  VerificationReport report;
  report.property = "sign_rule";
  const auto tk = apply(op, k);
  const auto prof = profile(tk, family, theta);
  const auto sol = solve_equation(tk, family, theta, ctx.solve);
  const Interval dom = solving_domain(tk, family);
  const double band = 10.0 * ctx.solve.abs_tol_x;

  for (double x : x_samples) {
    if (prof.d_monotonicity == Monotonicity::NonMonotone || !sol.ok() || !dom.contains(x) ||
        std::abs(x - sol.m) <= band) {
      report.add_vacuous();
      continue;
    }
    const double d = residual(tk, family, theta, x);
    const bool decreasing = prof.d_monotonicity == Monotonicity::Decreasing;
    // Cases (i)/(ii) for decreasing D, (iii)/(iv) for increasing D; read both
    // ways, since the implications are equivalences.
    bool ok;
    if (d > 0.0) {
      ok = decreasing ? sol.m > x : sol.m < x;
    } else if (d < 0.0) {
      ok = decreasing ? sol.m < x : sol.m > x;
    } else {
      ok = false;  // D(x) = 0 away from m: a second root
    }
    if (ok) {
      report.add_pass();
    } else {
      report.add_failure({ctx.seed, theta, digest(k), d, sol.m - x, band,
                          "sign rule at x = " + num(x) + " (" +
                              std::string(to_string(prof.d_monotonicity)) + " D)"});
    }
  }
  return report;
}

VerificationReport check_corollary1(const RankFrequencyFunction& k, const RankFrequencyFunction& f,
                                    const OperatorSpec& op, const ThresholdFamily& family,
                                    double theta, const CheckContext& ctx) {
  VerificationReport report;
  report.property = "dominance";
  if (k.support_start() != f.support_start() || k.support_end() != f.support_end()) {
    report.add_vacuous();
    return report;
  }
  const auto tk = apply(op, k);
  const auto tf = apply(op, f);

  auto xs = uniform_grid(k.support_start(), k.support_end(), kProfileGrid);
  const auto bps = merged_abscissae(k, f);
  xs.insert(xs.end(), bps.begin(), bps.end());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double scale = 1.0;
  for (double x : xs) {
    const double a = t_eval(tk, x);
    const double b = t_eval(tf, x);
    lo = std::min(lo, a - b);
    hi = std::max(hi, a - b);
    scale = std::max({scale, std::abs(a), std::abs(b)});
  }
  int dominance;
  bool strict;
  const double margin = 1e-9 * scale;
  if (lo >= 0.0) {
    dominance = 1;
    strict = lo > margin;
  } else if (hi <= 0.0) {
    dominance = -1;
    strict = hi < -margin;
  } else {
    report.add_vacuous();  // premise T(k) ≥ T(f) or ≤ fails
    return report;
  }

  const auto prof = profile(tk, family, theta);
  const auto rk = solve_equation(tk, family, theta, ctx.solve);
  const auto rf = solve_equation(tf, family, theta, ctx.solve);
  if (prof.d_monotonicity == Monotonicity::NonMonotone || !rk.ok() || !rf.ok()) {
    report.add_vacuous();
    return report;
  }
  const int direction = prof.d_monotonicity == Monotonicity::Decreasing ? dominance : -dominance;
  const double gap = direction * (rk.m - rf.m);
  const bool ok = strict ? gap > 0.0 : gap >= -2.0 * ctx.solve.abs_tol_x;
  if (ok) {
    report.add_pass();
  } else {
    report.add_failure({ctx.seed, theta, digest(k) + "/" + digest(f), rk.m, rf.m, 0.0,
                        std::string(strict ? "strict" : "weak") + " order not carried over (" +
                            std::string(to_string(prof.d_monotonicity)) + " D)"});
  }
  return report;
}

VerificationReport check_corollary2(const RankFrequencyFunction& f, const OperatorSpec& op,
                                    const ThresholdFamily& family, double theta,
                                    double theta_prime, const CheckContext& ctx) {
  if (!(theta < theta_prime)) throw DomainError("theta order needs theta < theta'");
  VerificationReport report;
  report.property = "theta_order";
  const auto tf = apply(op, f);
  const auto p1 = profile(tf, family, theta);
  const auto p2 = profile(tf, family, theta_prime);
  const auto r1 = solve_equation(tf, family, theta, ctx.solve);
  const auto r2 = solve_equation(tf, family, theta_prime, ctx.solve);
  if (p1.d_monotonicity == Monotonicity::NonMonotone || p1.d_monotonicity != p2.d_monotonicity ||
      !r1.ok() || !r2.ok()) {
    report.add_vacuous();
    return report;
  }
  // (i)/(ii): decreasing D moves m against A(x, ·); (iii)/(iv): along with it.
  const int a_dir = family.monotonicity_in_theta() == Monotonicity::Increasing ? 1 : -1;
  const int d_dir = p1.d_monotonicity == Monotonicity::Decreasing ? -1 : 1;
  const double gap = a_dir * d_dir * (r2.m - r1.m);
  if (gap > kStrictGap) {
    report.add_pass();
  } else {
    report.add_failure({ctx.seed, theta, digest(f), r1.m, r2.m, kStrictGap,
                        "theta' = " + num(theta_prime) + " breaks strict monotonicity"});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Basic inequalities

namespace {

enum class Inequality { Thirteen, Fourteen };

VerificationReport check_inequality(Inequality which, const RankFrequencyFunction& f,
                                    std::span<const Perturbation> schedule,
                                    const OperatorSpec& op, const ThresholdFamily& family,
                                    double theta, const CheckContext& ctx,
                                    std::optional<Interval> window) {
  VerificationReport report;
  report.property = which == Inequality::Thirteen ? "displacement" : "displacement_reverse";
  const auto tf = apply(op, f);
  const auto base = solve_equation(tf, family, theta, ctx.solve, window);
  for (const auto& step : schedule) {
    if (!base.ok()) {
      report.add_vacuous();
      continue;
    }
    std::optional<RankFrequencyFunction> fn;
    try {
      fn = perturb(f, step.mode, step.epsilon);
    } catch (const WouldViolateInvariants&) {
      report.add_vacuous();
      continue;
    }
    const auto tfn = apply(op, *fn);
    bool hypothesis;
    if (which == Inequality::Thirteen) {
      hypothesis = opposite(tfn.monotonicity(), family.monotonicity_in_x());
    } else {
      const auto prof = profile(tfn, family, theta, window);
      hypothesis = opposite(tfn.monotonicity(), prof.d_monotonicity);
    }
    if (!hypothesis) {
      report.add_vacuous();
      continue;
    }
    const auto rn = solve_equation(tfn, family, theta, ctx.solve, window);
    if (!rn.ok()) {
      report.add_vacuous();
      continue;
    }
    const double a_gap = std::abs(a_eval(family, rn.m, theta) - a_eval(family, base.m, theta));
    const double t_gap = std::abs(t_eval(tfn, base.m) - t_eval(tf, base.m));
    const double lhs = which == Inequality::Thirteen ? a_gap : t_gap;
    const double rhs = which == Inequality::Thirteen ? t_gap : a_gap;
    if (lhs <= rhs + ctx.slack) {
      report.add_pass();
    } else {
      report.add_failure({ctx.seed, theta, digest(f), lhs, rhs, ctx.slack,
                          "epsilon = " + num(step.epsilon)});
    }
  }
  return report;
}

}  // namespace

VerificationReport check_inequality_13(const RankFrequencyFunction& f,
                                       std::span<const Perturbation> schedule,
                                       const OperatorSpec& op, const ThresholdFamily& family,
                                       double theta, const CheckContext& ctx,
                                       std::optional<Interval> window) {
  return check_inequality(Inequality::Thirteen, f, schedule, op, family, theta, ctx, window);
}

VerificationReport check_inequality_14(const RankFrequencyFunction& f,
                                       std::span<const Perturbation> schedule,
                                       const OperatorSpec& op, const ThresholdFamily& family,
                                       double theta, const CheckContext& ctx,
                                       std::optional<Interval> window) {
  return check_inequality(Inequality::Fourteen, f, schedule, op, family, theta, ctx, window);
}

// ---------------------------------------------------------------------------
// Convergence

VerificationReport check_convergence_pointwise(const RankFrequencyFunction& f,
                                               const SequenceSpec& sequence,
                                               const OperatorSpec& op,
                                               const ThresholdFamily& family,
                                               std::span<const double> theta_grid,
                                               std::size_t n_max, const CheckContext& ctx) {
  VerificationReport report;
  report.property = "convergence_pointwise";
  if (n_max == 0) return report;
  const auto tf = apply(op, f);
  const double floor_tol = 10.0 * ctx.solve.abs_tol_x;

  struct Term {
    std::size_t n;
    TransformedFunction tf;
  };
  // First admissible term and the last one.
  std::optional<Term> first;
  for (std::size_t n = 1; n <= n_max && !first; ++n) {
    if (auto fn = sequence.term(f, n)) first = Term{n, apply(op, *fn)};
  }
  std::optional<TransformedFunction> last;
  if (auto fn = sequence.term(f, n_max)) last = apply(op, *fn);

  for (double theta : theta_grid) {
    const auto base = solve_equation(tf, family, theta, ctx.solve);
    if (!base.ok() || !first || !last) {
      report.add_vacuous();
      continue;
    }
    const auto r_first = solve_equation(first->tf, family, theta, ctx.solve);
    const auto r_last = solve_equation(*last, family, theta, ctx.solve);
    if (!r_first.ok() || !r_last.ok()) {
      report.add_vacuous();
      continue;
    }
    const double nf = static_cast<double>(first->n);
    const double nm = static_cast<double>(n_max);
    const double c_m = std::abs(r_first.m - base.m) * nf;
    const double c_t = std::abs(t_eval(first->tf, base.m) - t_eval(tf, base.m)) * nf;
    const double gap_m = std::abs(r_last.m - base.m);
    const double gap_t = std::abs(t_eval(*last, base.m) - t_eval(tf, base.m));

    double bound_m = c_m / nm;
    if (opposite(last->monotonicity(), family.monotonicity_in_x())) {
      bound_m = std::max(bound_m, displacement_bound(family, theta, base.m, gap_t));
    }
    const bool ok_m = gap_m <= floor_tol + bound_m;
    const bool ok_t = gap_t <= floor_tol + c_t / nm;
    if (ok_m && ok_t) {
      report.add_pass();
    } else {
      report.add_failure({ctx.seed, theta, digest(f), ok_m ? gap_t : gap_m,
                          ok_m ? c_t / nm : bound_m, floor_tol,
                          ok_m ? "T(f_n)(m) does not approach T(f)(m)"
                               : "m(f_n) does not approach m(f)"});
    }
  }
  return report;
}

std::vector<double> sup_gap_series(const RankFrequencyFunction& f, const SequenceSpec& sequence,
                                   const OperatorSpec& op, const ThresholdFamily& family,
                                   double theta_min, double theta_max, std::size_t grid_size,
                                   std::size_t n_max, const CheckContext& ctx) {
  if (!(theta_min > 0.0) || !(theta_max > theta_min) || grid_size < 2) {
    throw DomainError("uniform convergence needs 0 < theta_min < theta_max and a grid of >= 2");
  }
  const auto tf = apply(op, f);
  const auto thetas = uniform_grid(theta_min, theta_max, static_cast<int>(grid_size));
  std::vector<double> base(thetas.size(), kNaN);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto r = solve_equation(tf, family, thetas[i], ctx.solve);
    if (r.ok()) base[i] = r.m;
  }

  std::vector<double> series(n_max, kNaN);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto fn = sequence.term(f, n);
    if (!fn) continue;
    const auto tfn = apply(op, *fn);
    auto gap_at = [&](double theta) {
      const auto rn = solve_equation(tfn, family, theta, ctx.solve);
      const auto r = solve_equation(tf, family, theta, ctx.solve);
      return rn.ok() && r.ok() ? std::abs(rn.m - r.m) : -1.0;
    };
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      if (std::isnan(base[i])) continue;
      const auto rn = solve_equation(tfn, family, thetas[i], ctx.solve);
      if (!rn.ok()) continue;
      const double g = std::abs(rn.m - base[i]);
      if (g > best) {
        best = g;
        arg = i;
      }
    }
    if (best < 0.0) continue;
    // Golden-section refinement of the supremum over the neighbouring cells.
    double lo = thetas[arg == 0 ? 0 : arg - 1];
    double hi = thetas[std::min(arg + 1, thetas.size() - 1)];
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double gc = gap_at(c);
    double gd = gap_at(d);
    for (int it = 0; it < 40; ++it) {
      if (gc > gd) {
        hi = d;
        d = c;
        gd = gc;
        c = hi - inv_phi * (hi - lo);
        gc = gap_at(c);
      } else {
        lo = c;
        c = d;
        gc = gd;
        d = lo + inv_phi * (hi - lo);
        gd = gap_at(d);
      }
    }
    series[n - 1] = std::max({best, gc, gd});
  }
  return series;
}

VerificationReport check_convergence_uniform(const RankFrequencyFunction& f,
                                             const SequenceSpec& sequence,
                                             const OperatorSpec& op,
                                             const ThresholdFamily& family, double theta_min,
                                             double theta_max, std::size_t grid_size,
                                             std::size_t n_max, double final_tolerance,
                                             const CheckContext& ctx) {
  VerificationReport report;
  report.property = "convergence_uniform";
  const auto series =
      sup_gap_series(f, sequence, op, family, theta_min, theta_max, grid_size, n_max, ctx);
  constexpr double kJitter = 1e-9;
  double prev = kNaN;
  std::size_t prev_n = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (std::isnan(series[i])) continue;
    if (!std::isnan(prev)) {
      if (series[i] <= prev + kJitter) {
        report.add_pass();
      } else {
        report.add_failure({ctx.seed, 0.0, digest(f), series[i], prev, kJitter,
                            "sup-gap rises from n = " + std::to_string(prev_n) + " to n = " +
                                std::to_string(i + 1)});
      }
    }
    prev = series[i];
    prev_n = i + 1;
  }
  if (std::isnan(prev)) {
    report.add_vacuous();
  } else if (prev_n == n_max && prev < final_tolerance) {
    report.add_pass();
  } else {
    report.add_failure({ctx.seed, 0.0, digest(f), prev, final_tolerance, 0.0,
                        "sup-gap at n = " + std::to_string(prev_n) + " above tolerance"});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Instance generators

Instance reversal_instance(std::uint64_t seed) {
  Rng rng(seed);
  const double s = rng.uniform(2.0, 40.0);
  const double c = rng.uniform(1.0, 100.0);
  const double eps = rng.uniform(0.05, 0.9) * c / (2.0 * s);
  const double lo = c / (2.0 * s);
  const double hi = (c - eps * s) / s;
  const double theta = lo + rng.uniform(0.1, 0.9) * (hi - lo);
  return Instance{RankFrequencyFunction::line(0.0, c, s, c - eps * s), OperatorSpec::identity(0.0),
                  ThresholdFamily::decreasing_linear(2.0 * s), theta, std::nullopt};
}

std::optional<Instance> integral_window_instance(std::uint64_t seed, double headroom) {
  Rng rng(seed);
  RandomFunctionParams params;
  params.vanish_at_end = rng.coin(0.5);
  auto f = random_function(derive_seed(seed, 1), params);
  const auto tf = apply(OperatorSpec::integral(f.support_start()), f);
  const double a = f.support_start();
  const double s = f.support_end();
  const double mu_end = tf.primitive(s) / (s - a);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double x0 = a + rng.uniform(0.2, 0.8) * (s - a);
    // D' = f − 2θx ≤ 0 on [x₀, S] for every f_n ≤ (1 + headroom) f.
    const double lo = std::max((1.0 + headroom) * eval(f, x0) / (2.0 * x0),
                               (1.0 + headroom) * mu_end / s);
    const double hi = tf.primitive(x0) / (x0 * x0);
    if (!(lo < hi)) continue;
    const double theta = lo + rng.uniform(0.1, 0.9) * (hi - lo);
    return Instance{std::move(f), OperatorSpec::integral(a), ThresholdFamily::power(2.0, 0.0),
                    theta, Interval{x0, s}};
  }
  return std::nullopt;
}

Instance integral_decreasing_instance(std::uint64_t seed, double headroom) {
  Rng rng(seed);
  auto f = random_function(derive_seed(seed, 1));
  const double a = f.support_start();
  const double s = f.support_end();
  const double total = integral(f, a, s);
  // D(S) = I(S) − θ(2S − S) stays positive for every f_n ≥ f/(1 + headroom).
  const double theta = rng.uniform(0.05, 0.95) * total / (s * (1.0 + headroom));
  return Instance{std::move(f), OperatorSpec::integral(a),
                  ThresholdFamily::decreasing_linear(2.0 * s), theta, std::nullopt};
}

Instance stock_instance(std::uint64_t seed, OperatorKind op, double p) {
  Rng rng(seed);
  RandomFunctionParams params;
  params.vanish_at_end = rng.coin(0.5);
  auto f = random_function(derive_seed(seed, 1), params);
  const double a = f.support_start();
  const auto spec = OperatorSpec{op, a};
  auto family = ThresholdFamily::power(p, op == OperatorKind::Averaging ? a : 0.0);
  const double x = a + rng.uniform(0.05, 0.95) * f.length();
  double theta = 1.0;
  try {
    theta = psi(f, spec, family, x);
  } catch (const ZeroValue&) {
    // f vanishes at x; any θ keeps the root to the left of x.
  }
  return Instance{std::move(f), spec, family, theta, std::nullopt};
}

// ---------------------------------------------------------------------------
// Impact axioms

namespace {

RankFrequencyFunction draw_impact_function(Rng& rng, std::uint64_t seed,
                                           const ThresholdFamily& family, FunctionSource source) {
  if (source == FunctionSource::ReversalLines) {
    const double s = family.as_decreasing_linear().ceiling / 2.0;
    const double c = rng.uniform(1.0, 100.0);
    const double eps = rng.uniform(0.05, 0.9) * c / (2.0 * s);
    return RankFrequencyFunction::line(0.0, c, s, c - eps * s);
  }
  RandomFunctionParams params;
  params.vanish_at_end = rng.coin(0.5);
  if (!family.is_power()) {
    params.s_min = params.s_max = family.as_decreasing_linear().ceiling / 2.0;
  }
  return random_function(seed, params);
}

// θ = ψ(x) for x drawn in ]a, hi], or nothing where ψ is undefined.
std::optional<double> draw_theta(Rng& rng, const TransformedFunction& tf,
                                 const ThresholdFamily& family, double hi) {
  const double a = tf.lower();
  const double x = a + (hi - a) * (1.0 - rng.uniform(0.0, 1.0));
  try {
    return psi(tf, family, x);
  } catch (const ZeroValue&) {
    return std::nullopt;
  } catch (const SingularAbscissa&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<VerificationReport> check_impact_axioms(OperatorKind op_kind,
                                                    const ThresholdFamily& family,
                                                    std::uint64_t master_seed, std::size_t trials,
                                                    FunctionSource source,
                                                    const CheckContext& ctx) {
  if (source == FunctionSource::ReversalLines && family.is_power()) {
    throw DomainError("the reversal family needs a decreasing linear threshold");
  }
  std::vector<VerificationReport> reports(4);
  const std::string tag = label(op_kind, family);
  for (int i = 0; i < 4; ++i) reports[i].property = "impact/AX." + std::to_string(i + 1) + "/" + tag;
  auto& ax1 = reports[0];
  auto& ax2 = reports[1];
  auto& ax3 = reports[2];
  auto& ax4 = reports[3];
  const double tol = ctx.solve.abs_tol_x;

  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = derive_seed(master_seed, t);
    Rng rng(seed);
    const auto f = draw_impact_function(rng, derive_seed(seed, 7), family, source);
    const double a = f.support_start();
    const double s = f.support_end();
    const OperatorSpec op{op_kind, a};
    const auto tf = apply(op, f);
    auto solve = [&](const TransformedFunction& tx, double theta) {
      return solve_equation(tx, family, theta, ctx.solve);
    };

    // AX.1: the null function sits at a; a non-null one never does.
    {
      const auto zero = RankFrequencyFunction::constant(0.0, a, s);
      const double theta = rng.uniform(0.1, 10.0);
      const auto r = solve(apply(op, zero), theta);
      if (r.ok() && r.m == a) {
        ax1.add_pass();
      } else {
        ax1.add_failure({seed, theta, digest(zero), r.m, a, 0.0, "m(0) != a"});
      }
      const auto theta_f = draw_theta(rng, tf, family, s);
      const auto rf = theta_f ? solve(tf, *theta_f) : SolveResult{};
      if (!theta_f || !rf.ok()) {
        ax1.add_vacuous();
      } else if (rf.m - a > kStrictGap) {
        ax1.add_pass();
      } else {
        ax1.add_failure({seed, *theta_f, digest(f), rf.m, a, kStrictGap, "m(f) = a for f != 0"});
      }
    }

    // AX.2: f ≤ g ⇒ m(f) ≤ m(g).
    {
      const bool multiplicative = rng.coin(0.5);
      const double delta = rng.uniform(0.01, 0.5);
      const auto g = multiplicative
                         ? perturb(f, PerturbMode::Multiplicative, delta)
                         : perturb(f, PerturbMode::Additive, delta * f.breakpoints().front().y);
      const auto tg = apply(op, g);
      const auto theta = rng.coin(0.5) ? draw_theta(rng, tf, family, s)
                                       : draw_theta(rng, tg, family, s);
      if (!leq(f, g) || !theta) {
        ax2.add_vacuous();
      } else {
        const auto rf = solve(tf, *theta);
        const auto rg = solve(tg, *theta);
        if (!rf.ok() || !rg.ok()) {
          ax2.add_vacuous();
        } else if (rf.m <= rg.m + 2.0 * tol) {
          ax2.add_pass();
        } else {
          ax2.add_failure({seed, *theta, digest(f) + "/" + digest(g), rf.m, rg.m, 2.0 * tol,
                           "f <= g but m(f) > m(g)"});
        }
      }
    }

    // AX.3: f <_c g ⇒ m_θ(f) < m_θ(g) for θ ∈ ψ_f([a, c]) ∪ ψ_g([a, c]).
    {
      const double cut = a + rng.uniform(0.1, 0.9) * (s - a);
      const double reach = cut + (s - cut) * (1.0 - rng.uniform(0.0, 1.0));
      const double height = rng.uniform(0.01, 0.3) * f.breakpoints().front().y;
      std::vector<Breakpoint> bump{{a, height}, {reach, 0.0}};
      if (reach < s) bump.push_back({s, 0.0});
      const auto g = add(f, RankFrequencyFunction(std::move(bump)));
      const auto tg = apply(op, g);
      const auto theta = rng.coin(0.5) ? draw_theta(rng, tf, family, cut)
                                       : draw_theta(rng, tg, family, cut);
      if (!lt_on_prefix(f, g, cut) || !theta) {
        ax3.add_vacuous();
      } else {
        const auto rf = solve(tf, *theta);
        const auto rg = solve(tg, *theta);
        if (!rf.ok() || !rg.ok()) {
          ax3.add_vacuous();
        } else if (rg.m - rf.m > kStrictGap) {
          ax3.add_pass();
        } else {
          ax3.add_failure({seed, *theta, digest(f) + "/" + digest(g), rf.m, rg.m, kStrictGap,
                           "f <_a g but m(f) >= m(g), a = " + num(cut)});
        }
      }
    }

    // AX.4: f = g on [a, c] ⇒ m_θ(f) = m_θ(g) for θ ∈ ψ_f([a, c]).
    {
      const double cut = a + rng.uniform(0.1, 0.9) * (s - a);
      const double kappa = rng.uniform(0.2, 0.8);
      const auto g = flatten_tail(f, cut, kappa);
      const auto tg = apply(op, g);
      const auto theta = draw_theta(rng, tf, family, cut);
      if (!eq_on_prefix(f, g, cut) || !theta) {
        ax4.add_vacuous();
      } else {
        const auto rf = solve(tf, *theta);
        const auto rg = solve(tg, *theta);
        if (!rf.ok() || !rg.ok()) {
          ax4.add_vacuous();
        } else if (std::abs(rf.m - rg.m) <= tol) {
          ax4.add_pass();
        } else {
          ax4.add_failure({seed, *theta, digest(f) + "/" + digest(g), rf.m, rg.m, tol,
                           "f = g on [a, " + num(cut) + "] but bundles differ"});
        }
      }
    }
  }
  return reports;
}

bool check_theorem3_hypothesis(const RankFrequencyFunction& f, const OperatorSpec& op,
                               const ThresholdFamily& family, std::span<const double> theta_grid) {
  const auto tf = apply(op, f);
  return std::all_of(theta_grid.begin(), theta_grid.end(), [&](double theta) {
    return profile(tf, family, theta).d_monotonicity == Monotonicity::Decreasing;
  });
}

// ---------------------------------------------------------------------------
// Property suite

namespace {

struct StockCombo {
  OperatorKind op;
  double p;
};

constexpr StockCombo kStockCombos[] = {
    {OperatorKind::Identity, 0.5}, {OperatorKind::Identity, 1.0}, {OperatorKind::Identity, 2.0},
    {OperatorKind::Averaging, 1.0}, {OperatorKind::Averaging, 2.0},
};

std::string combo_name(const StockCombo& c) {
  return std::string(to_string(c.op)) + "+power(p=" + num(c.p) + ")";
}

std::vector<double> random_points(Rng& rng, double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo + rng.uniform(0.0, 1.0) * (hi - lo));
  return xs;
}

VerificationReport named(VerificationReport r, std::string name) {
  r.property = std::move(name);
  return r;
}

}  // namespace

SuiteReport run_property_suite(const SuiteConfig& config) {
  SuiteReport suite;
  suite.master_seed = config.master_seed;
  CheckContext base_ctx;
  base_ctx.slack = config.slack;
  base_ctx.solve.abs_tol_x = config.abs_tol_x;
  const std::size_t trials = config.trials;
  std::uint64_t stream = 0;
  auto next_master = [&] { return derive_seed(config.master_seed, 1000003ULL * ++stream); };

  // Operators: contract over functions on a shared support.
  {
    const std::uint64_t master = next_master();
    std::vector<RankFrequencyFunction> samples;
    const std::size_t count = std::min<std::size_t>(trials, 12);
    RandomFunctionParams params;
    params.s_min = params.s_max = 10.0;
    for (std::size_t i = 0; i < count; ++i) {
      auto f = random_function(derive_seed(master, i), params);
      samples.push_back(perturb(f, PerturbMode::Additive, 0.5));
      samples.push_back(std::move(f));
    }
    if (count > 0) samples.push_back(RankFrequencyFunction::constant(0.0, 0.0, 10.0));
    for (auto kind : {OperatorKind::Identity, OperatorKind::Averaging, OperatorKind::Integral}) {
      VerificationReport r;
      r.property = "operator_contract/" + std::string(to_string(kind));
      if (!samples.empty()) r = check_operator_contract(OperatorSpec{kind, 0.0}, samples, master);
      suite.reports.push_back(std::move(r));
    }
    VerificationReport mono;
    mono.property = "operator/averaging_decreasing";
    for (std::size_t i = 0; i < trials; ++i) {
      const auto f = random_function(derive_seed(master, 5000 + i));
      if (classify_monotonicity(apply(OperatorSpec::averaging(0.0), f)) ==
          Monotonicity::Decreasing) {
        mono.add_pass();
      } else {
        mono.add_failure({derive_seed(master, 5000 + i), 0.0, digest(f), 0, 0, 0,
                          "mu(f) not classified decreasing"});
      }
    }
    suite.reports.push_back(std::move(mono));
  }

  // Sign rule, dominance and θ-order on stock combinations and the reversal family.
  {
    const std::uint64_t master = next_master();
    for (const auto& combo : kStockCombos) {
      VerificationReport lemma;
      VerificationReport cor1;
      VerificationReport cor2;
      for (std::size_t t = 0; t < trials; ++t) {
        CheckContext ctx = base_ctx;
        ctx.seed = derive_seed(master, t);
        Rng rng(ctx.seed);
        const auto in = stock_instance(ctx.seed, combo.op, combo.p);
        const auto xs = random_points(rng, in.f.support_start(), in.f.support_end(), 8);
        lemma.absorb(check_lemma1(in.f, in.op, in.family, in.theta, xs, ctx));
        const auto k = perturb(in.f, PerturbMode::Multiplicative, rng.uniform(0.05, 0.5));
        cor1.absorb(check_corollary1(k, in.f, in.op, in.family, in.theta, ctx));
        cor1.absorb(check_corollary1(in.f, k, in.op, in.family, in.theta, ctx));
        cor2.absorb(check_corollary2(in.f, in.op, in.family, in.theta,
                                     in.theta * rng.uniform(1.2, 3.0), ctx));
      }
      suite.reports.push_back(named(std::move(lemma), "sign_rule/" + combo_name(combo)));
      suite.reports.push_back(named(std::move(cor1), "dominance/" + combo_name(combo)));
      suite.reports.push_back(named(std::move(cor2), "theta_order/" + combo_name(combo)));
    }
    VerificationReport lemma;
    VerificationReport cor1;
    VerificationReport cor2;
    for (std::size_t t = 0; t < trials; ++t) {
      CheckContext ctx = base_ctx;
      ctx.seed = derive_seed(master, 77777 + t);
      Rng rng(ctx.seed);
      const auto in = reversal_instance(ctx.seed);
      const auto xs = random_points(rng, 0.0, in.f.support_end(), 8);
      lemma.absorb(check_lemma1(in.f, in.op, in.family, in.theta, xs, ctx));
      const auto k = perturb(in.f, PerturbMode::Multiplicative, rng.uniform(0.001, 0.05));
      cor1.absorb(check_corollary1(k, in.f, in.op, in.family, in.theta, ctx));
      const double s = in.f.support_end();
      const double c = in.f.breakpoints().front().y;
      const double hi = in.f.breakpoints().back().y / s;
      (void)c;
      cor2.absorb(check_corollary2(in.f, in.op, in.family, in.theta,
                                   in.theta + rng.uniform(0.1, 0.9) * (hi - in.theta), ctx));
    }
    suite.reports.push_back(named(std::move(lemma), "sign_rule/reversal"));
    suite.reports.push_back(named(std::move(cor1), "dominance/reversal"));
    suite.reports.push_back(named(std::move(cor2), "theta_order/reversal"));
  }

  // Displacement inequalities.
  {
    const std::uint64_t master = next_master();
    const SequenceSpec harmonic{PerturbMode::Multiplicative, 1.0, false};
    const auto schedule = harmonic.schedule(config.schedule_length);
    VerificationReport i13;
    VerificationReport i13b;
    VerificationReport i14a;
    VerificationReport i14b;
    for (std::size_t t = 0; t < trials; ++t) {
      CheckContext ctx = base_ctx;
      ctx.seed = derive_seed(master, t);
      const auto& combo = kStockCombos[t % std::size(kStockCombos)];
      const auto in = stock_instance(ctx.seed, combo.op, combo.p);
      i13.absorb(check_inequality_13(in.f, schedule, in.op, in.family, in.theta, ctx));

      const auto dec = integral_decreasing_instance(ctx.seed, 1.0);
      i13b.absorb(check_inequality_13(dec.f, schedule, dec.op, dec.family, dec.theta, ctx));

      if (const auto win = integral_window_instance(ctx.seed, 1.0)) {
        i14a.absorb(check_inequality_14(win->f, schedule, win->op, win->family, win->theta, ctx,
                                        win->window));
      }
      const auto rev = reversal_instance(ctx.seed);
      const SequenceSpec small{PerturbMode::Multiplicative, 0.05, false};
      const auto rev_schedule = small.schedule(config.schedule_length);
      i14b.absorb(check_inequality_14(rev.f, rev_schedule, rev.op, rev.family, rev.theta, ctx));
    }
    suite.reports.push_back(named(std::move(i13), "displacement/decreasing-T"));
    suite.reports.push_back(named(std::move(i13b), "displacement/integral-decreasing-A"));
    suite.reports.push_back(named(std::move(i14a), "displacement_reverse/integral-window"));
    suite.reports.push_back(named(std::move(i14b), "displacement_reverse/reversal"));
  }

  // Convergence of the h- and g-bundles.
  {
    const std::uint64_t master = next_master();
    const SequenceSpec alternating{PerturbMode::Multiplicative, 1.0, true};
    for (auto op : {OperatorKind::Identity, OperatorKind::Averaging}) {
      VerificationReport point;
      VerificationReport uniform;
      for (std::size_t t = 0; t < trials; ++t) {
        CheckContext ctx = base_ctx;
        ctx.seed = derive_seed(master, t);
        const auto in = stock_instance(ctx.seed, op, 1.0);
        const auto range = admissible_range(in.f, in.op, in.family);
        const double lo = range.theta_min.value_or(0.0);
        std::vector<double> grid;
        for (int i = 1; i <= 6; ++i) grid.push_back(lo + 0.5 * i * (1.0 + lo));
        point.absorb(check_convergence_pointwise(in.f, alternating, in.op, in.family, grid,
                                                 config.convergence_n_max, ctx));
      }
      const std::size_t uniform_trials = std::min<std::size_t>(trials, 3);
      for (std::size_t t = 0; t < uniform_trials; ++t) {
        CheckContext ctx = base_ctx;
        ctx.seed = derive_seed(master, 90000 + t);
        Rng rng(ctx.seed);
        const double s = rng.uniform(5.0, 20.0);
        // The gap of a line decays like S/n, hence the tolerance S/n_max.
        const auto f = RankFrequencyFunction::line(0.0, rng.uniform(s, 4.0 * s), s, 0.0);
        uniform.absorb(check_convergence_uniform(
            f, alternating, OperatorSpec{op, 0.0}, ThresholdFamily::power(1.0, 0.0), 0.5, 5.0, 24,
            config.convergence_n_max, s / static_cast<double>(config.convergence_n_max), ctx));
      }
      const std::string tag = op == OperatorKind::Identity ? "h" : "g";
      suite.reports.push_back(named(std::move(point), "convergence_pointwise/" + tag));
      suite.reports.push_back(named(std::move(uniform), "convergence_uniform/" + tag));
    }
  }

  // Impact axioms.
  {
    const std::uint64_t master = next_master();
    for (const auto& combo : kStockCombos) {
      CheckContext ctx = base_ctx;
      const auto family = ThresholdFamily::power(combo.p, 0.0);
      auto reports = check_impact_axioms(combo.op, family, derive_seed(master, 1), trials,
                                         FunctionSource::RandomDecreasing, ctx);

      // Forward direction: hypothesis holds on sampled functions ⇒ axioms hold.
      VerificationReport forward;
      forward.property = "impact_forward/" + combo_name(combo);
      const bool axioms_ok = std::none_of(reports.begin(), reports.end(), [](const auto& r) {
        return r.verdict() == Verdict::Fail;
      });
      for (std::size_t t = 0; t < std::min<std::size_t>(trials, 10); ++t) {
        const auto in = stock_instance(derive_seed(master, 300 + t), combo.op, combo.p);
        const std::vector<double> grid{0.25 * in.theta, in.theta, 4.0 * in.theta};
        if (!check_theorem3_hypothesis(in.f, in.op, in.family, grid)) {
          forward.add_vacuous();
        } else if (axioms_ok) {
          forward.add_pass();
        } else {
          forward.add_failure({derive_seed(master, 300 + t), in.theta, digest(in.f), 0, 0, 0,
                               "hypothesis holds but an impact axiom failed"});
        }
      }
      for (auto& r : reports) suite.reports.push_back(std::move(r));
      suite.reports.push_back(std::move(forward));
    }
    if (config.impact_include_reversal) {
      auto reports = check_impact_axioms(OperatorKind::Identity,
                                         ThresholdFamily::decreasing_linear(20.0),
                                         derive_seed(master, 2), trials,
                                         FunctionSource::ReversalLines, base_ctx);
      for (auto& r : reports) {
        r.property += "/reversal";
        suite.reports.push_back(std::move(r));
      }
    }
  }
  return suite;
}

}  // namespace hbundle
