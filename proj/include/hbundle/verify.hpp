#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hbundle/funcspace.hpp"
#include "hbundle/operators.hpp"
#include "hbundle/report.hpp"
#include "hbundle/solver.hpp"
#include "hbundle/thresholds.hpp"

namespace hbundle {

/// Monotonicity of the three functions every check branches on:
/// T(f), A(·, θ), and D(·) = T(f)(·) − A(·, θ).
struct HypothesisProfile {
  Monotonicity t_monotonicity = Monotonicity::Decreasing;
  Monotonicity a_monotonicity_in_x = Monotonicity::Increasing;
  Monotonicity d_monotonicity = Monotonicity::NonMonotone;
  Certification d_certification = Certification::GridSample;
};

/// Computes the profile on the solving domain (or on `window`).
///
/// D is classified by the sum rule when T(f) and A(·, θ) have opposite
/// monotonicity, by derivative signs at segment ends when D' is monotone on
/// every segment (identity; integral with p ∈ {1, 2} or the decreasing
/// family), and on a 1024-point grid otherwise.
HypothesisProfile profile(const TransformedFunction& tf, const ThresholdFamily& family,
                          double theta, std::optional<Interval> window = std::nullopt);
HypothesisProfile profile(const RankFrequencyFunction& f, const OperatorSpec& op,
                          const ThresholdFamily& family, double theta);

/// Shared knobs of every check.
struct CheckContext {
  std::uint64_t seed = 0;  // copied into counterexamples
  SolveConfig solve{1e-13, 1024, true};
  double slack = 1e-9;  // absolute slack of the inequality checks
};

struct Perturbation {
  PerturbMode mode = PerturbMode::Multiplicative;
  double epsilon = 0.0;
};

/// ε_n = scale·s_n / n for n = 1..n_max, with s_n = (−1)ⁿ when alternating.
struct SequenceSpec {
  PerturbMode mode = PerturbMode::Multiplicative;
  double scale = 1.0;
  bool alternating = false;

  double epsilon(std::size_t n) const;
  /// f_n, or nothing when the perturbation would leave the function space.
  std::optional<RankFrequencyFunction> term(const RankFrequencyFunction& f, std::size_t n) const;
  std::vector<Perturbation> schedule(std::size_t n_max) const;
};

/// Sign rule on each sample x: for decreasing D, D(x) > 0 ⟺ m_θ(k) > x and
/// D(x) < 0 ⟺ m_θ(k) < x; reversed for increasing D. Samples within
/// 10·abs_tol_x of m are inconclusive and counted vacuous.
VerificationReport check_lemma1(const RankFrequencyFunction& k, const OperatorSpec& op,
                                const ThresholdFamily& family, double theta,
                                std::span<const double> x_samples, const CheckContext& ctx = {});

/// Dominance: T(k) ≥ T(f) (checked on a grid, strict when the margin
/// exceeds 1e-9 of the scale) orders m_θ(k) and m_θ(f) the same way for
/// decreasing D_k, the opposite way for increasing D_k.
VerificationReport check_corollary1(const RankFrequencyFunction& k, const RankFrequencyFunction& f,
                                    const OperatorSpec& op, const ThresholdFamily& family,
                                    double theta, const CheckContext& ctx = {});

/// θ-order: for θ < θ′ the bundle moves against A(x, ·) when D decreases
/// and with it when D increases.
VerificationReport check_corollary2(const RankFrequencyFunction& f, const OperatorSpec& op,
                                    const ThresholdFamily& family, double theta,
                                    double theta_prime, const CheckContext& ctx = {});

/// |A(m_θ(f_n)) − A(m_θ(f))| ≤ |T(f_n)(m_θ(f)) − T(f)(m_θ(f))| for every
/// f_n = perturb(f, schedule[n]) whose T(f_n) and A(·, θ) have opposite
/// monotonicity.
VerificationReport check_inequality_13(const RankFrequencyFunction& f,
                                       std::span<const Perturbation> schedule,
                                       const OperatorSpec& op, const ThresholdFamily& family,
                                       double theta, const CheckContext& ctx = {},
                                       std::optional<Interval> window = std::nullopt);

/// The reverse inequality, for f_n with T(f_n) increasing and D_n decreasing
/// or T(f_n) decreasing and D_n increasing.
VerificationReport check_inequality_14(const RankFrequencyFunction& f,
                                       std::span<const Perturbation> schedule,
                                       const OperatorSpec& op, const ThresholdFamily& family,
                                       double theta, const CheckContext& ctx = {},
                                       std::optional<Interval> window = std::nullopt);

/// One trial per θ: m_θ(f_n) → m_θ(f) and T(f_n)(m_θ(f)) → T(f)(m_θ(f)).
/// The gap at n_max must stay below 10·abs_tol_x plus the larger of C/n_max
/// (C the first-term gap times its index) and the displacement bound that
/// check_inequality_13 gives when its hypothesis holds.
VerificationReport check_convergence_pointwise(const RankFrequencyFunction& f,
                                               const SequenceSpec& sequence,
                                               const OperatorSpec& op,
                                               const ThresholdFamily& family,
                                               std::span<const double> theta_grid,
                                               std::size_t n_max, const CheckContext& ctx = {});

/// sup over θ ∈ [theta_min, theta_max] of |m_θ(f_n) − m_θ(f)|, for n = 1..n_max.
/// The supremum is taken on a uniform grid and then refined by golden-section
/// search around the best grid cell. Terms outside the function space are NaN.
std::vector<double> sup_gap_series(const RankFrequencyFunction& f, const SequenceSpec& sequence,
                                   const OperatorSpec& op, const ThresholdFamily& family,
                                   double theta_min, double theta_max, std::size_t grid_size,
                                   std::size_t n_max, const CheckContext& ctx = {});

/// The sup-gap series is non-increasing (within 1e-9) and ends below
/// `final_tolerance`.
VerificationReport check_convergence_uniform(const RankFrequencyFunction& f,
                                             const SequenceSpec& sequence,
                                             const OperatorSpec& op,
                                             const ThresholdFamily& family, double theta_min,
                                             double theta_max, std::size_t grid_size,
                                             std::size_t n_max, double final_tolerance = 1e-2,
                                             const CheckContext& ctx = {});

/// Where the functions of the impact trials come from.
enum class FunctionSource {
  /// Random decreasing piecewise-linear functions on [0, S].
  RandomDecreasing,
  /// Lines c − εx on [0, S] with εS < c/2 against A = θ(2S − x): D increases.
  ReversalLines,
};

/// AX.1–AX.4, one report each, over `trials` seeded trials. θ is drawn
/// from ψ_f([0, a]) ∪ ψ_g([0, a]); a trial where either bundle fails to
/// solve is vacuous. For ReversalLines the family must be decreasing linear.
std::vector<VerificationReport> check_impact_axioms(OperatorKind op, const ThresholdFamily& family,
                                                    std::uint64_t master_seed, std::size_t trials,
                                                    FunctionSource source =
                                                        FunctionSource::RandomDecreasing,
                                                    const CheckContext& ctx = {});

/// True iff D decreases for every θ of the grid.
bool check_theorem3_hypothesis(const RankFrequencyFunction& f, const OperatorSpec& op,
                               const ThresholdFamily& family, std::span<const double> theta_grid);

/// A ready-to-check configuration produced by the instance generators.
struct Instance {
  RankFrequencyFunction f;
  OperatorSpec op;
  ThresholdFamily family;
  double theta = 1.0;
  std::optional<Interval> window;
};

/// f = c − εx on [0, S], A = θ(2S − x), θ ∈ ]c/(2S), (c − εS)/S[, so that
/// D = (c − 2Sθ) + (θ − ε)x increases through zero.
Instance reversal_instance(std::uint64_t seed);

/// T = I(f) against A = θx² on a window [x₀, S] where 2θx₀ ≥ (1 + headroom)f(x₀),
/// which keeps D_n decreasing for every f_n ≤ (1 + headroom)f, and where D
/// changes sign. Nothing when the draw admits no such θ.
std::optional<Instance> integral_window_instance(std::uint64_t seed, double headroom);

/// T = I(f) against A = θ(2S − x) on [0, S]: T increases, A decreases.
Instance integral_decreasing_instance(std::uint64_t seed, double headroom);

/// A random decreasing f with T ∈ {identity, averaging} and a power family,
/// θ drawn from the interior of the admissible range.
Instance stock_instance(std::uint64_t seed, OperatorKind op, double p);

struct SuiteConfig {
  std::uint64_t master_seed = 20240601;
  std::size_t trials = 100;
  std::size_t schedule_length = 50;
  std::size_t convergence_n_max = 200;
  double slack = 1e-9;
  double abs_tol_x = 1e-13;
  /// Also runs the impact axioms on the reversal family, which must fail.
  bool impact_include_reversal = false;
};

/// Every check above over seeded random inputs. Deterministic per master seed.
SuiteReport run_property_suite(const SuiteConfig& config);

}  // namespace hbundle
