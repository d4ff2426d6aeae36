#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hbundle/funcspace.hpp"
#include "hbundle/report.hpp"

namespace hbundle {

enum class OperatorKind { Identity, Averaging, Integral };

std::string_view to_string(OperatorKind kind);

/// Non-strict monotonicity classes; a constant is Decreasing.
enum class Monotonicity { Decreasing, Increasing, NonMonotone };

std::string_view to_string(Monotonicity m);

enum class Certification { SegmentDerivative, GridSample };

/// The operator T applied to f before it is intersected with A(·, θ).
/// `origin` is the left end a of the functions it acts on.
struct OperatorSpec {
  OperatorKind kind = OperatorKind::Identity;
  double origin = 0.0;

  static OperatorSpec identity(double origin = 0.0) { return {OperatorKind::Identity, origin}; }
  static OperatorSpec averaging(double origin = 0.0) { return {OperatorKind::Averaging, origin}; }
  static OperatorSpec integral(double origin = 0.0) { return {OperatorKind::Integral, origin}; }
  /// The operator of the given kind whose origin matches f's support.
  static OperatorSpec for_function(OperatorKind kind, const RankFrequencyFunction& f) {
    return {kind, f.support_start()};
  }
};

/// x − a below this fraction of S − a evaluates μ(f) by its limit f(a).
inline constexpr double kAveragingCutoff = 1e-9;

/// T(f) in exactly evaluable form.
///
/// Each source segment [x_i, x_{i+1}] carries the value of the primitive
/// I(f)(x_i) = ∫_a^{x_i} f, so that on the segment
///   I(f)(x) = I(f)(x_i) + y_i (x − x_i) + s_i (x − x_i)² / 2.
/// Identity evaluates the segment line, Integral the quadratic above and
/// Averaging the ratio I(f)(x) / (x − a), with f(a) at x = a.
class TransformedFunction {
 public:
  TransformedFunction(OperatorKind kind, RankFrequencyFunction source);

  OperatorKind kind() const { return kind_; }
  const RankFrequencyFunction& source() const { return source_; }
  double lower() const { return source_.support_start(); }
  double upper() const { return source_.support_end(); }
  bool is_zero() const { return source_.is_zero(); }

  /// ∫_a^x f, exact.
  double primitive(double x) const;
  /// ∫_a^{x_i} f at breakpoint i.
  double primitive_at_breakpoint(std::size_t i) const { return cumulative_[i]; }

  Monotonicity monotonicity() const { return monotonicity_; }
  Certification certification() const { return certification_; }

 private:
  OperatorKind kind_;
  RankFrequencyFunction source_;
  std::vector<double> cumulative_;
  Monotonicity monotonicity_ = Monotonicity::Decreasing;
  Certification certification_ = Certification::SegmentDerivative;
};

/// Builds T(f). Throws OriginMismatch when op.origin ≠ f's support start.
TransformedFunction apply(const OperatorSpec& op, const RankFrequencyFunction& f);

/// T(f)(x). Throws DomainError outside [a, S].
double t_eval(const TransformedFunction& tf, double x);

/// Cached at construction time; identity and integral kinds are classified
/// from segment slopes, averaging from the sign of f(x)(x − a) − I(f)(x),
/// which is monotone on every segment.
Monotonicity classify_monotonicity(const TransformedFunction& tf);

/// Classifies samples taken on a uniform grid: Decreasing when no step rises
/// by more than `tolerance`, Increasing when none falls by more, otherwise
/// NonMonotone.
Monotonicity classify_samples(std::span<const double> values, double tolerance);

/// Checks positivity, T(f) ≡ 0 ⟺ f ≡ 0, and strict monotonicity of the
/// restrictions: for every ordered sample pair with f <_c g (c at the
/// quarter points of the support), T(f) < T(g) on ]a, c].
VerificationReport check_operator_contract(const OperatorSpec& op,
                                           std::span<const RankFrequencyFunction> samples,
                                           std::uint64_t seed = 0);

}  // namespace hbundle
