#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hbundle/funcspace.hpp"

namespace hbundle::cli {

/// One citation record of the input file.
struct Source {
  std::string id;
  std::vector<double> counts;
  std::vector<Breakpoint> breakpoints;  // explicit function, JSON only; overrides counts
  std::string location;  // "path:line" or "path:entry N", for messages
};

/// Reads `id,counts` CSV (counts `;`-separated) or a JSON array of
/// {"id", "counts"} objects; JSON is detected by a leading '['. A JSON
/// object may give "breakpoints": [[x, y], ...] instead of counts.
/// Throws InputError with the offending line (or entry) on malformed input,
/// empty or negative counts, and files without records.
std::vector<Source> read_sources(std::istream& in, const std::string& origin);
std::vector<Source> read_sources_file(const std::string& path);

/// Rank-frequency function of a source. Unsorted counts are sorted and a
/// warning naming the source goes to `warn`.
RankFrequencyFunction to_function(const Source& src, std::ostream& warn);

/// 12 significant digits, "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double v);

/// Minimal CSV quoting for identifiers.
std::string csv_field(const std::string& s);

}  // namespace hbundle::cli
