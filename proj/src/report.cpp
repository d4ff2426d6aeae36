#include "hbundle/report.hpp"

#include <algorithm>

namespace hbundle {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "Pass";
    case Verdict::Fail:
      return "Fail";
    case Verdict::Vacuous:
      return "Vacuous";
  }
  return "?";
}

Verdict VerificationReport::verdict() const {
  if (!failures.empty()) return Verdict::Fail;
  if (satisfied == 0) return Verdict::Vacuous;
  return Verdict::Pass;
}

void VerificationReport::absorb(const VerificationReport& other) {
  trials += other.trials;
  satisfied += other.satisfied;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

bool SuiteReport::any_failed() const {
  return std::any_of(reports.begin(), reports.end(),
                     [](const auto& r) { return r.verdict() == Verdict::Fail; });
}

bool SuiteReport::all_vacuous() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const auto& r) { return r.verdict() == Verdict::Vacuous; });
}

}  // namespace hbundle
