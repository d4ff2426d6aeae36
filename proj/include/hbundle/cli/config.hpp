#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hbundle/errors.hpp"
#include "hbundle/operators.hpp"
#include "hbundle/solver.hpp"
#include "hbundle/thresholds.hpp"
#include "hbundle/verify.hpp"

namespace hbundle::cli {

/// Malformed input file, config file or flag value. Maps to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

struct ThetaGridSpec {
  double min = 1.0;
  double max = 1.0;
  int count = 1;
  bool log = false;

  /// min:max:count[:log]
  static ThetaGridSpec parse(const std::string& text);
  std::vector<double> values() const;
};

/// One index to compute: an operator against a threshold family.
struct IndexDef {
  std::string name;
  OperatorKind op = OperatorKind::Identity;
  bool decreasing = false;      // power family otherwise
  double p = 1.0;
  std::optional<double> shift;  // power only; defaults to the support start for averaging
  double ceiling = 0.0;         // decreasing linear only

  /// "<name> <operator> power <p> [shift]" or "<name> <operator> decreasing_linear <ceiling>".
  static IndexDef parse(const std::string& text);
  ThresholdFamily family(double support_start) const;
};

struct RunConfig {
  std::vector<IndexDef> indices;  // h and g unless the config names some
  ThetaGridSpec theta_grid;
  SolveConfig solve;
  SuiteConfig suite;
  std::string report_path = "verify_report.json";

  RunConfig();
};

/// Reads `key = value` lines; `#` starts a comment. Repeated `index` keys
/// accumulate and replace the default indices.
RunConfig load_config(std::istream& in, const std::string& origin);
RunConfig load_config_file(const std::string& path);

}  // namespace hbundle::cli
