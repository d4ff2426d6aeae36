#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hbundle/cli/config.hpp"
#include "hbundle/cli/io.hpp"
#include "hbundle/report.hpp"

namespace hbundle::cli {

enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitBadInput = 2;

/// One row per (source, index, θ): id,index,theta,value,status.
void cmd_index(const std::vector<Source>& sources, const RunConfig& cfg, Format fmt,
               std::ostream& out, std::ostream& err);

/// id,index,operator,p,shift,theta,m,status over the θ-grid.
void cmd_bundle(const std::vector<Source>& sources, const RunConfig& cfg, Format fmt,
                std::ostream& out, std::ostream& err);

/// id,index,theta_min,theta_max,min_attained,certified.
void cmd_admissible(const std::vector<Source>& sources, const RunConfig& cfg, Format fmt,
                    std::ostream& out, std::ostream& err);

/// Runs the property suite; returns the exit code.
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

void write_report_text(const SuiteReport& report, std::ostream& out);
std::string report_json(const SuiteReport& report);

/// The whole command line, without the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hbundle::cli
