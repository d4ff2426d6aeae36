#include "hbundle/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hbundle/errors.hpp"

namespace hbundle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Real roots of qa u² + qb u + qc = 0 (any degree ≤ 2).
std::vector<double> quadratic_roots(double qa, double qb, double qc) {
  const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
  if (scale == 0.0) return {};
  if (std::abs(qa) <= 1e-14 * scale) {
    if (qb == 0.0) return {};
    return {-qc / qb};
  }
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) {
    if (disc < -1e-12 * qb * qb) return {};
    disc = 0.0;
  }
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  if (q == 0.0) return {0.0};
  return {q / qa, qc / q};
}

class Equation {
 public:
  Equation(const TransformedFunction& tf, const ThresholdFamily& family, double theta)
      : tf_(tf), family_(family), theta_(theta) {}

  double residual(double x) const { return t_eval(tf_, x) - a_eval(family_, x, theta_); }

  // |D(x)| below this is indistinguishable from zero.
  double zero_band(double x) const {
    return 4.0 * kEps * std::max(std::abs(t_eval(tf_, x)), std::abs(a_eval(family_, x, theta_)));
  }

  bool has_exact_form() const {
    if (!family_.is_power()) return false;
    const double p = family_.as_power().p;
    switch (tf_.kind()) {
      case OperatorKind::Identity:
        return p == 1.0 || p == 2.0;
      case OperatorKind::Averaging:
        return p == 1.0;
      case OperatorKind::Integral:
        return false;
    }
    return false;
  }

  // Roots of the segment polynomials inside [l, r].
  std::vector<double> exact_candidates(double l, double r) const {
    std::vector<double> out;
    const auto& f = tf_.source();
    const auto pts = f.breakpoints();
    const double shift = family_.as_power().shift;
    const double p = family_.as_power().p;
    const double a = tf_.lower();
    for (std::size_t i = f.segment_index(l); i < f.segment_count() && pts[i].x <= r; ++i) {
      const double x0 = pts[i].x;
      const double u_lo = std::max(l, x0) - x0;
      const double u_hi = std::min(r, pts[i + 1].x) - x0;
      if (u_hi < u_lo) continue;
      const double y0 = pts[i].y;
      const double s = f.slope(i);
      const double beta = x0 - shift;
      std::vector<double> roots;
      if (tf_.kind() == OperatorKind::Identity && p == 1.0) {
        // y0 + s u = θ (u + β)
        roots = quadratic_roots(0.0, s - theta_, y0 - theta_ * beta);
      } else if (tf_.kind() == OperatorKind::Identity) {
        // y0 + s u = θ (u + β)²
        roots = quadratic_roots(theta_, 2.0 * theta_ * beta - s, theta_ * beta * beta - y0);
      } else {
        // I(x0) + y0 u + s u²/2 = θ (u + α)(u + β), α = x0 − a
        const double alpha = x0 - a;
        roots = quadratic_roots(0.5 * s - theta_, y0 - theta_ * (alpha + beta),
                                tf_.primitive_at_breakpoint(i) - theta_ * alpha * beta);
      }
      const double slack = 1e-12 * std::max(1.0, u_hi - u_lo);
      for (double u : roots) {
        if (std::isfinite(u) && u >= u_lo - slack && u <= u_hi + slack) {
          out.push_back(std::clamp(x0 + u, l, r));
        }
      }
    }
    return out;
  }

 private:
  const TransformedFunction& tf_;
  const ThresholdFamily& family_;
  double theta_;
};

SolveResult locate(const Equation& eq, double l, double r, double d_l, double d_r,
                   const SolveConfig& cfg) {
  if (cfg.exact_when_possible && eq.has_exact_form()) {
    const auto candidates = eq.exact_candidates(l, r);
    double best = kNaN;
    double best_abs = std::numeric_limits<double>::infinity();
    for (double x : candidates) {
      const double d = std::abs(eq.residual(x));
      if (d < best_abs) {
        best_abs = d;
        best = x;
      }
    }
    const double accept = 1e-9 * std::max({std::abs(d_l), std::abs(d_r), 1.0});
    if (std::isfinite(best) && best_abs <= accept) return {best, SolveStatus::ExactSegment};
  }

  int s_l = sign_of(d_l);
  while (r - l > cfg.abs_tol_x) {
    const double mid = l + 0.5 * (r - l);
    if (mid <= l || mid >= r) break;
    const double d_mid = eq.residual(mid);
    if (d_mid == 0.0) return {mid, SolveStatus::Bisection};
    if (sign_of(d_mid) == s_l) {
      l = mid;
    } else {
      r = mid;
    }
  }
  return {l + 0.5 * (r - l), SolveStatus::Bisection};
}

}  // namespace

void SolveConfig::validate() const {
  if (!(abs_tol_x > 0.0)) throw DomainError("abs_tol_x must be > 0");
  if (scan_points < 16) throw DomainError("scan_points must be >= 16");
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ExactSegment:
      return "ExactSegment";
    case SolveStatus::Bisection:
      return "Bisection";
    case SolveStatus::NoRoot:
      return "NoRoot";
    case SolveStatus::NonUnique:
      return "NonUnique";
  }
  return "?";
}

SolveResult solve_equation(const TransformedFunction& tf, const ThresholdFamily& family,
                           double theta, const SolveConfig& cfg, std::optional<Interval> window) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw NonPositiveTheta("theta must be a finite value > 0, got " + num(theta));
  }
  cfg.validate();
  Interval dom = solving_domain(tf, family);
  if (window) {
    dom.lo = std::max(dom.lo, window->lo);
    dom.hi = std::min(dom.hi, window->hi);
    if (!(dom.lo < dom.hi)) throw DomainError("solve window does not meet the domain");
  }
  if (tf.is_zero()) return {tf.lower(), SolveStatus::ExactSegment};

  const Equation eq(tf, family, theta);
  const auto n = static_cast<std::size_t>(cfg.scan_points);
  std::vector<double> xs(n);
  std::vector<double> ds(n);
  std::vector<int> signs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = i + 1 == n ? dom.hi : dom.lo + dom.length() * static_cast<double>(i) / (n - 1);
    ds[i] = eq.residual(xs[i]);
    signs[i] = std::abs(ds[i]) <= eq.zero_band(xs[i]) ? 0 : sign_of(ds[i]);
  }

  std::vector<std::size_t> zeros;
  int changes = 0;
  int last_sign = 0;
  std::size_t last_idx = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (signs[i] == 0) {
      zeros.push_back(i);
      continue;
    }
    if (last_sign != 0 && signs[i] != last_sign) {
      ++changes;
      left = last_idx;
      right = i;
    }
    last_sign = signs[i];
    last_idx = i;
  }

  if (changes > 1) return {kNaN, SolveStatus::NonUnique};
  if (changes == 1) {
    // A rounding-level zero inside the bracket is the crossing itself; any
    // zero elsewhere is a second root.
    const auto inside = std::count_if(zeros.begin(), zeros.end(),
                                      [&](std::size_t z) { return z > left && z < right; });
    if (inside != static_cast<std::ptrdiff_t>(zeros.size()) || inside > 1) {
      return {kNaN, SolveStatus::NonUnique};
    }
    if (inside == 1 && ds[zeros.front()] == 0.0) {
      return {xs[zeros.front()], SolveStatus::ExactSegment};
    }
    return locate(eq, xs[left], xs[right], ds[left], ds[right], cfg);
  }
  if (zeros.empty()) return {kNaN, SolveStatus::NoRoot};
  if (zeros.size() > 1) return {kNaN, SolveStatus::NonUnique};
  // D touches zero without crossing, e.g. at x = S for θ = f(S)/S.
  const std::size_t z = zeros.front();
  return {xs[z], ds[z] == 0.0 ? SolveStatus::ExactSegment : SolveStatus::Bisection};
}

SolveResult solve_bundle_point(const RankFrequencyFunction& f, const OperatorSpec& op,
                               const ThresholdFamily& family, double theta,
                               const SolveConfig& cfg) {
  return solve_equation(apply(op, f), family, theta, cfg);
}

BundleSample sample_bundle(const RankFrequencyFunction& f, const OperatorSpec& op,
                           const ThresholdFamily& family, std::span<const double> theta_grid,
                           const SolveConfig& cfg, std::string function_id) {
  if (!std::is_sorted(theta_grid.begin(), theta_grid.end())) {
    throw DomainError("theta grid must be sorted");
  }
  for (double th : theta_grid) {
    if (!(th > 0.0)) throw NonPositiveTheta("theta grid values must be > 0");
  }
  BundleSample bundle;
  bundle.function_id = std::move(function_id);
  bundle.op = op.kind;
  bundle.threshold = family.describe();
  bundle.entries.reserve(theta_grid.size());
  const auto tf = apply(op, f);
  for (double th : theta_grid) {
    const auto r = solve_equation(tf, family, th, cfg);
    bundle.entries.push_back({th, r.m, r.status});
  }
  return bundle;
}

namespace {

double unwrap(const SolveResult& r, std::string_view index, double theta) {
  if (r.status == SolveStatus::NoRoot) {
    throw NoRootError(std::string(index) + ": theta = " + num(theta) + " is not admissible");
  }
  if (r.status == SolveStatus::NonUnique) {
    throw NonUniqueError(std::string(index) + ": equation has several roots at theta = " +
                         num(theta));
  }
  return r.m;
}

}  // namespace

double h_index(const RankFrequencyFunction& f, double theta, const SolveConfig& cfg) {
  return unwrap(solve_bundle_point(f, OperatorSpec::for_function(OperatorKind::Identity, f),
                                   ThresholdFamily::power(1.0, 0.0), theta, cfg),
                "h-index", theta);
}

double g_index(const RankFrequencyFunction& f, double theta, const SolveConfig& cfg) {
  return unwrap(solve_bundle_point(f, OperatorSpec::for_function(OperatorKind::Averaging, f),
                                   ThresholdFamily::power(1.0, f.support_start()), theta, cfg),
                "g-index", theta);
}

double kosmulski_index(const RankFrequencyFunction& f, double theta, double p,
                       const SolveConfig& cfg) {
  return unwrap(solve_bundle_point(f, OperatorSpec::for_function(OperatorKind::Identity, f),
                                   ThresholdFamily::power(p, 0.0), theta, cfg),
                "kosmulski index", theta);
}

double g_kosmulski_index(const RankFrequencyFunction& f, double theta, double p,
                         const SolveConfig& cfg) {
  return unwrap(solve_bundle_point(f, OperatorSpec::for_function(OperatorKind::Averaging, f),
                                   ThresholdFamily::power(p, f.support_start()), theta, cfg),
                "g-kosmulski index", theta);
}

double polar_radius(const RankFrequencyFunction& f, double theta, const SolveConfig& cfg) {
  return h_index(f, theta, cfg) * std::sqrt(1.0 + theta * theta);
}

}  // namespace hbundle
