#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hbundle {

enum class Verdict { Pass, Fail, Vacuous };

std::string_view to_string(Verdict v);

/// One failing instance, with enough data to replay it.
struct Counterexample {
  std::uint64_t seed = 0;
  double theta = 0.0;
  std::string inputs_digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::string detail;
};

/// Outcome of one property check.
///
/// `trials` counts every instance that was drawn; `satisfied` counts the
/// instances whose hypothesis held and whose conclusion was asserted. The
/// verdict is derived, never stored: Fail iff at least one counterexample was
/// recorded, Vacuous iff no instance satisfied the hypothesis.
struct VerificationReport {
  std::string property;
  std::size_t trials = 0;
  std::size_t satisfied = 0;
  std::vector<Counterexample> failures;

  Verdict verdict() const;

  /// Adds a trial whose hypothesis did not hold.
  void add_vacuous() { ++trials; }
  /// Adds a trial whose conclusion was asserted and held.
  void add_pass() {
    ++trials;
    ++satisfied;
  }
  void add_failure(Counterexample c) {
    ++trials;
    ++satisfied;
    failures.push_back(std::move(c));
  }

  /// Folds another report's counts and failures into this one.
  void absorb(const VerificationReport& other);
};

/// Aggregate of many property reports.
struct SuiteReport {
  std::uint64_t master_seed = 0;
  std::vector<VerificationReport> reports;

  bool any_failed() const;
  bool all_vacuous() const;
};

}  // namespace hbundle
