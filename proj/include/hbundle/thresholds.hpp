#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "hbundle/funcspace.hpp"
#include "hbundle/operators.hpp"

namespace hbundle {

/// A(x, θ) = θ (x − shift)^p on x ≥ shift. p = 1, shift = 0 gives the
/// Line θx; shift = a gives the g-index threshold θ(x − a).
struct PowerThreshold {
  double p = 1.0;
  double shift = 0.0;
};

/// A(x, θ) = θ (ceiling − x) on [0, ceiling). Decreasing in x; exists to
/// exercise the decreasing-threshold branches of the theory.
struct DecreasingLinearThreshold {
  double ceiling = 1.0;
};

/// The two-argument threshold family A(x, θ) intersected with T(f).
class ThresholdFamily {
 public:
  static ThresholdFamily power(double p, double shift = 0.0);
  static ThresholdFamily decreasing_linear(double ceiling);

  bool is_power() const { return std::holds_alternative<PowerThreshold>(kind_); }
  const PowerThreshold& as_power() const { return std::get<PowerThreshold>(kind_); }
  const DecreasingLinearThreshold& as_decreasing_linear() const {
    return std::get<DecreasingLinearThreshold>(kind_);
  }

  /// Closed x-domain of A; for the decreasing family the upper end is open.
  double x_lower() const;
  double x_upper() const;
  bool in_domain(double x) const;

  /// Strict monotonicity of A(·, θ); θ > 0 is implied.
  Monotonicity monotonicity_in_x() const;
  /// Both families are strictly increasing in θ at every interior x.
  Monotonicity monotonicity_in_theta() const { return Monotonicity::Increasing; }

  /// "power(p=2,shift=0)" style label.
  std::string describe() const;

 private:
  explicit ThresholdFamily(std::variant<PowerThreshold, DecreasingLinearThreshold> k)
      : kind_(k) {}
  std::variant<PowerThreshold, DecreasingLinearThreshold> kind_;
};

double a_eval(const ThresholdFamily& family, double x, double theta);

/// ∂A/∂x (x, θ). At x = shift with p < 1 this is +∞.
double a_derivative_x(const ThresholdFamily& family, double x, double theta);

/// The unique θ with A(x, θ) = value. Throws SingularAbscissa where A(x, ·)
/// is identically zero (x = shift, x = ceiling).
double a_inverse_theta(const ThresholdFamily& family, double x, double value);

/// The unique x with A(x, θ) = value, on the x-domain.
double a_inverse_x(const ThresholdFamily& family, double theta, double value);

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double length() const { return hi - lo; }
};

/// Where T(f)(x) = A(x, θ) is solved: [a, S] intersected with A's x-domain.
/// Throws DomainError when the intersection is empty or when S reaches the
/// ceiling of a decreasing family.
Interval solving_domain(const TransformedFunction& tf, const ThresholdFamily& family);

/// ψ_f(x) = A⁻¹(T(f)(x)): the θ whose bundle value is x. Throws ZeroValue when
/// T(f)(x) = 0.
double psi(const TransformedFunction& tf, const ThresholdFamily& family, double x);
double psi(const RankFrequencyFunction& f, const OperatorSpec& op,
           const ThresholdFamily& family, double x);

/// The set of admissible θ, [theta_min, theta_max]. An absent theta_min
/// means every θ > 0 down to zero is admissible.
struct AdmissibleRange {
  std::optional<double> theta_min;
  double theta_max = std::numeric_limits<double>::infinity();
  bool certified = false;

  bool contains(double theta) const {
    return theta > 0.0 && (!theta_min || theta >= *theta_min) && theta <= theta_max;
  }
};

/// Image of ψ_f over the solving domain. When T(f) is decreasing and A is a
/// power family, ψ_f is decreasing and the range is [ψ_f(S), ψ_f(a)]
/// (unbounded above when a = shift), certified. Otherwise the extremes of
/// ψ_f on a 1024-point grid, not certified. Throws ZeroFunction for f ≡ 0.
AdmissibleRange admissible_range(const TransformedFunction& tf, const ThresholdFamily& family);
AdmissibleRange admissible_range(const RankFrequencyFunction& f, const OperatorSpec& op,
                                 const ThresholdFamily& family);

}  // namespace hbundle
