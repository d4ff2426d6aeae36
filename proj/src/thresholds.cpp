#include "hbundle/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hbundle/errors.hpp"

namespace hbundle {

namespace {

constexpr int kRangeGrid = 1024;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void require_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw NonPositiveTheta("theta must be a finite value > 0, got " + num(theta));
  }
}

}  // namespace

ThresholdFamily ThresholdFamily::power(double p, double shift) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("power exponent must be > 0");
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw DomainError("power shift must be >= 0");
  return ThresholdFamily(PowerThreshold{p, shift});
}

ThresholdFamily ThresholdFamily::decreasing_linear(double ceiling) {
  if (!(ceiling > 0.0) || !std::isfinite(ceiling)) throw DomainError("ceiling must be > 0");
  return ThresholdFamily(DecreasingLinearThreshold{ceiling});
}

double ThresholdFamily::x_lower() const {
  return is_power() ? as_power().shift : 0.0;
}

double ThresholdFamily::x_upper() const {
  return is_power() ? std::numeric_limits<double>::infinity() : as_decreasing_linear().ceiling;
}

bool ThresholdFamily::in_domain(double x) const {
  if (is_power()) return x >= as_power().shift;
  return x >= 0.0 && x < as_decreasing_linear().ceiling;
}

Monotonicity ThresholdFamily::monotonicity_in_x() const {
  return is_power() ? Monotonicity::Increasing : Monotonicity::Decreasing;
}

std::string ThresholdFamily::describe() const {
  if (is_power()) {
    return "power(p=" + num(as_power().p) + ",shift=" + num(as_power().shift) + ")";
  }
  return "decreasing_linear(ceiling=" + num(as_decreasing_linear().ceiling) + ")";
}

double a_eval(const ThresholdFamily& family, double x, double theta) {
  require_theta(theta);
  if (!family.in_domain(x)) {
    throw DomainError("x = " + num(x) + " outside the domain of " + family.describe());
  }
  if (family.is_power()) {
    const auto& pw = family.as_power();
    const double d = x - pw.shift;
    if (pw.p == 1.0) return theta * d;
    if (pw.p == 2.0) return theta * d * d;
    return theta * std::pow(d, pw.p);
  }
  return theta * (family.as_decreasing_linear().ceiling - x);
}

double a_derivative_x(const ThresholdFamily& family, double x, double theta) {
  require_theta(theta);
  if (family.is_power()) {
    const auto& pw = family.as_power();
    if (pw.p == 1.0) return theta;
    if (pw.p == 2.0) return 2.0 * theta * (x - pw.shift);
    return pw.p * theta * std::pow(x - pw.shift, pw.p - 1.0);
  }
  return -theta;
}

double a_inverse_theta(const ThresholdFamily& family, double x, double value) {
  if (!(value >= 0.0)) throw DomainError("threshold value must be >= 0");
  if (family.is_power()) {
    const auto& pw = family.as_power();
    if (x == pw.shift) throw SingularAbscissa("A(x, .) vanishes at x = shift = " + num(x));
    if (x < pw.shift) throw DomainError("x = " + num(x) + " below the shift " + num(pw.shift));
    return value / std::pow(x - pw.shift, pw.p);
  }
  const double ceiling = family.as_decreasing_linear().ceiling;
  if (x == ceiling) throw SingularAbscissa("A(x, .) vanishes at x = ceiling = " + num(x));
  if (x > ceiling || x < 0.0) throw DomainError("x = " + num(x) + " outside [0, ceiling)");
  return value / (ceiling - x);
}

double a_inverse_x(const ThresholdFamily& family, double theta, double value) {
  require_theta(theta);
  if (family.is_power()) {
    const auto& pw = family.as_power();
    if (!(value >= 0.0)) throw DomainError("power threshold takes values >= 0");
    return pw.shift + std::pow(value / theta, 1.0 / pw.p);
  }
  return family.as_decreasing_linear().ceiling - value / theta;
}

Interval solving_domain(const TransformedFunction& tf, const ThresholdFamily& family) {
  const double lo = std::max(tf.lower(), family.x_lower());
  const double hi = tf.upper();
  if (!family.is_power() && !(hi < family.x_upper())) {
    throw DomainError("support end " + num(hi) + " must lie below the ceiling " +
                      num(family.x_upper()));
  }
  if (!(lo < hi)) throw DomainError("support and threshold domain do not overlap");
  return {lo, hi};
}

double psi(const TransformedFunction& tf, const ThresholdFamily& family, double x) {
  const double value = t_eval(tf, x);
  if (value == 0.0) throw ZeroValue("T(f)(" + num(x) + ") = 0 maps to the excluded theta = 0");
  return a_inverse_theta(family, x, value);
}

double psi(const RankFrequencyFunction& f, const OperatorSpec& op,
           const ThresholdFamily& family, double x) {
  return psi(apply(op, f), family, x);
}

AdmissibleRange admissible_range(const TransformedFunction& tf, const ThresholdFamily& family) {
  if (tf.is_zero()) throw ZeroFunction("admissible range of the null function is undefined");
  const Interval dom = solving_domain(tf, family);

  AdmissibleRange range;
  if (family.is_power() && tf.monotonicity() == Monotonicity::Decreasing &&
      family.as_power().shift <= tf.lower()) {
    // ψ_f(x) = T(f)(x) / (x − shift)^p is decreasing on ]shift, S].
    range.certified = true;
    const double at_end = t_eval(tf, dom.hi);
    if (at_end > 0.0) range.theta_min = a_inverse_theta(family, dom.hi, at_end);
    if (dom.lo > family.as_power().shift) range.theta_max = psi(tf, family, dom.lo);
    return range;
  }

  double lo_theta = std::numeric_limits<double>::infinity();
  double hi_theta = 0.0;
  for (int i = 0; i < kRangeGrid; ++i) {
    const double x = i == kRangeGrid - 1 ? dom.hi : dom.lo + dom.length() * i / (kRangeGrid - 1);
    try {
      const double th = psi(tf, family, x);
      lo_theta = std::min(lo_theta, th);
      hi_theta = std::max(hi_theta, th);
    } catch (const SingularAbscissa&) {
    } catch (const ZeroValue&) {
      // θ = 0 is excluded, but it marks the lower end as open at zero.
      lo_theta = 0.0;
    }
  }
  if (hi_theta == 0.0) throw ZeroFunction("psi has no positive value on the domain");
  if (lo_theta > 0.0) range.theta_min = lo_theta;
  range.theta_max = hi_theta;
  range.certified = false;
  return range;
}

AdmissibleRange admissible_range(const RankFrequencyFunction& f, const OperatorSpec& op,
                                 const ThresholdFamily& family) {
  return admissible_range(apply(op, f), family);
}

}  // namespace hbundle
