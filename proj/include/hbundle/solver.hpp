#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbundle/funcspace.hpp"
#include "hbundle/operators.hpp"
#include "hbundle/thresholds.hpp"

namespace hbundle {

struct SolveConfig {
  double abs_tol_x = 1e-10;
  int scan_points = 1024;
  bool exact_when_possible = true;

  /// Throws DomainError unless abs_tol_x > 0 and scan_points >= 16.
  void validate() const;
};

enum class SolveStatus { ExactSegment, Bisection, NoRoot, NonUnique };

std::string_view to_string(SolveStatus s);

struct SolveResult {
  double m = 0.0;  // NaN unless ok()
  SolveStatus status = SolveStatus::NoRoot;

  bool ok() const { return status == SolveStatus::ExactSegment || status == SolveStatus::Bisection; }
};

/// Solves T(f)(x) = A(x, θ) for x on the solving domain, or on `window` when
/// given (clipped to the domain).
///
/// D(x) = T(f)(x) − A(x, θ) is scanned on cfg.scan_points points. One sign
/// change brackets the root, which is then located exactly on the segment
/// polynomial when possible (identity with p ∈ {1, 2}, averaging with p = 1
/// through I(f)(x) = (x − a)A(x, θ)) and by bisection to cfg.abs_tol_x
/// otherwise. No sign change and no rounding-level zero gives NoRoot; more
/// than one root gives NonUnique. The null function solves at x = a.
///
/// Throws NonPositiveTheta for θ ≤ 0.
SolveResult solve_equation(const TransformedFunction& tf, const ThresholdFamily& family,
                           double theta, const SolveConfig& cfg = {},
                           std::optional<Interval> window = std::nullopt);

/// m_θ(f) for the operator and threshold family given.
SolveResult solve_bundle_point(const RankFrequencyFunction& f, const OperatorSpec& op,
                               const ThresholdFamily& family, double theta,
                               const SolveConfig& cfg = {});

struct BundleEntry {
  double theta = 0.0;
  double m = 0.0;
  SolveStatus status = SolveStatus::NoRoot;
};

/// The bundle θ ↦ m_θ(f) sampled on a θ-grid.
struct BundleSample {
  std::string function_id;
  OperatorKind op = OperatorKind::Identity;
  std::string threshold;
  std::vector<BundleEntry> entries;
};

/// Solves independently at every θ of a sorted, positive grid.
BundleSample sample_bundle(const RankFrequencyFunction& f, const OperatorSpec& op,
                           const ThresholdFamily& family, std::span<const double> theta_grid,
                           const SolveConfig& cfg = {}, std::string function_id = {});

// Named indices. Each throws NoRootError / NonUniqueError when the equation
// has no unique solution.

/// f(x) = θx.
double h_index(const RankFrequencyFunction& f, double theta, const SolveConfig& cfg = {});
/// μ(f)(x) = θ(x − a).
double g_index(const RankFrequencyFunction& f, double theta, const SolveConfig& cfg = {});
/// f(x) = θx^p.
double kosmulski_index(const RankFrequencyFunction& f, double theta, double p,
                       const SolveConfig& cfg = {});
/// μ(f)(x) = θ(x − a)^p.
double g_kosmulski_index(const RankFrequencyFunction& f, double theta, double p,
                         const SolveConfig& cfg = {});
/// h_θ(f)·√(1 + θ²), the radius of the h-point in polar form.
double polar_radius(const RankFrequencyFunction& f, double theta, const SolveConfig& cfg = {});

}  // namespace hbundle
