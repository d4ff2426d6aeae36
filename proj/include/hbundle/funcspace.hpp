#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hbundle {

struct Breakpoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// A decreasing, non-negative, piecewise-linear rank-frequency function on
/// [a, S]: f(x) is the item count of the source at rank x.
///
/// The breakpoint list is validated on construction and never changes
/// afterwards; abscissae are strictly increasing, ordinates are finite,
/// non-negative and non-increasing, and there are at least two points.
class RankFrequencyFunction {
 public:
  explicit RankFrequencyFunction(std::vector<Breakpoint> points);

  /// Straight line from (a, y_a) to (s, y_s).
  static RankFrequencyFunction line(double a, double y_a, double s, double y_s);
  static RankFrequencyFunction constant(double value, double a, double s);

  double support_start() const { return points_.front().x; }
  double support_end() const { return points_.back().x; }
  double length() const { return support_end() - support_start(); }

  std::span<const Breakpoint> breakpoints() const { return points_; }
  std::size_t segment_count() const { return points_.size() - 1; }

  /// Index i of the segment [x_i, x_{i+1}] holding x; the last segment for x = S.
  std::size_t segment_index(double x) const;
  double slope(std::size_t segment) const;

  /// True for the null function, which is the only one with f(a) = 0.
  bool is_zero() const { return points_.front().y == 0.0; }

  bool contains(double x) const { return x >= support_start() && x <= support_end(); }

  friend bool operator==(const RankFrequencyFunction&, const RankFrequencyFunction&) = default;

 private:
  std::vector<Breakpoint> points_;
};

/// f(x), by linear interpolation; exact at breakpoints. Throws DomainError
/// outside [a, S].
double eval(const RankFrequencyFunction& f, double x);

/// Exact integral of f over [lower, upper] (trapezoids are exact per segment).
double integral(const RankFrequencyFunction& f, double lower, double upper);

/// Builds the continuous rank-frequency function of a list of citation counts:
/// flat at c_1 on [0, 1], f(i) = c_i for i = 1..N, and a linear descent to 0
/// at N + 1. Unsorted input is sorted in decreasing order and `resorted` (when
/// given) is set.
RankFrequencyFunction from_citation_counts(std::span<const double> counts,
                                           bool* resorted = nullptr);

/// Union of both breakpoint abscissae, sorted, without duplicates.
std::vector<double> merged_abscissae(const RankFrequencyFunction& f,
                                     const RankFrequencyFunction& g);

/// f ≤ g pointwise. A difference of two piecewise-linear functions attains
/// its extrema at breakpoints, so the comparison at the merged abscissae is
/// exact.
bool leq(const RankFrequencyFunction& f, const RankFrequencyFunction& g);

/// Strictness margin used by lt_on_prefix.
inline constexpr double kStrictnessTolerance = 1e-12;

/// f <_a g: g − f exceeds kStrictnessTolerance everywhere on [a, a_cut].
bool lt_on_prefix(const RankFrequencyFunction& f, const RankFrequencyFunction& g,
                  double a_cut);

/// f = g on [a, a_cut], compared exactly.
bool eq_on_prefix(const RankFrequencyFunction& f, const RankFrequencyFunction& g,
                  double a_cut);

/// The relations of the impact axioms, as a value.
struct FunctionOrdering {
  enum class Relation { Leq, StrictOnPrefix, EqualOnPrefix };

  Relation relation = Relation::Leq;
  double prefix = 0.0;  // ignored for Leq

  static FunctionOrdering pointwise() { return {Relation::Leq, 0.0}; }
  static FunctionOrdering strict_on_prefix(double a) { return {Relation::StrictOnPrefix, a}; }
  static FunctionOrdering equal_on_prefix(double a) { return {Relation::EqualOnPrefix, a}; }
};

bool holds(const FunctionOrdering& ordering, const RankFrequencyFunction& f,
           const RankFrequencyFunction& g);

enum class PerturbMode { Additive, Multiplicative };

/// y_i ↦ y_i + ε or y_i·(1 + ε) at every breakpoint. Throws
/// WouldViolateInvariants when the result would go negative (additive) or
/// when ε ≤ −1 (multiplicative).
RankFrequencyFunction perturb(const RankFrequencyFunction& f, PerturbMode mode,
                              double epsilon);

struct RandomFunctionParams {
  std::size_t max_breakpoints = 8;
  double support_start = 0.0;
  double s_min = 2.0;  // range of the support length S − a
  double s_max = 40.0;
  double y_max = 100.0;
  /// Pin the last ordinate to zero (f(S) = 0) instead of drawing it.
  bool vanish_at_end = false;
};

/// Deterministic generator for property tests: N ∈ [2, max_breakpoints]
/// breakpoints on [a, a + L], ordinates drawn positive and sorted decreasing.
RankFrequencyFunction random_function(std::uint64_t seed,
                                      const RandomFunctionParams& params = {});

/// Short hex fingerprint of the breakpoint data, for counterexample reports.
std::string digest(const RankFrequencyFunction& f);

}  // namespace hbundle
