#include "hbundle/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbundle/errors.hpp"
#include "hbundle/solver.hpp"
#include "hbundle/thresholds.hpp"

namespace hbundle::cli {

namespace {

struct Cell {
  std::string text;
  bool numeric = false;
};

Cell text(std::string s) { return {std::move(s), false}; }
Cell number(double v) { return {format_number(v), true}; }

// Buffered table, emitted in input order once every row is known.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  void write(Format fmt, std::ostream& out) const {
    if (fmt == Format::Csv) {
      for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
      out << '\n';
      for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          out << (i ? "," : "") << csv_field(row[i].text);
        }
        out << '\n';
      }
      return;
    }
    auto doc = nlohmann::json::array();
    for (const auto& row : rows_) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        const auto& c = row[i];
        const double v = c.numeric ? std::strtod(c.text.c_str(), nullptr) : 0.0;
        if (c.numeric && std::isfinite(v)) {
          obj[columns_[i]] = v;
        } else {
          obj[columns_[i]] = c.text;
        }
      }
      doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string op_name(OperatorKind k) { return std::string(to_string(k)); }

// Library errors raised by a (source, index) pair are input problems.
template <typename Fn>
void for_each_pair(const std::vector<Source>& sources, const RunConfig& cfg, std::ostream& err,
                   Fn&& fn) {
  for (const auto& src : sources) {
    const auto f = to_function(src, err);
    for (const auto& idx : cfg.indices) {
      try {
        fn(src, f, idx, idx.family(f.support_start()));
      } catch (const InputError&) {
        throw;
      } catch (const Error& e) {
        throw InputError(src.location + ": index '" + idx.name + "': " + e.what());
      }
    }
  }
}

}  // namespace

void cmd_index(const std::vector<Source>& sources, const RunConfig& cfg, Format fmt,
               std::ostream& out, std::ostream& err) {
  Table table({"id", "index", "theta", "value", "status"});
  const auto thetas = cfg.theta_grid.values();
  for_each_pair(sources, cfg, err,
                [&](const Source& src, const RankFrequencyFunction& f, const IndexDef& idx,
                    const ThresholdFamily& family) {
                  const OperatorSpec op{idx.op, f.support_start()};
                  for (double th : thetas) {
                    const auto r = solve_bundle_point(f, op, family, th, cfg.solve);
                    table.add({text(src.id), text(idx.name), number(th), number(r.m),
                               text(std::string(to_string(r.status)))});
                  }
                });
  table.write(fmt, out);
}

void cmd_bundle(const std::vector<Source>& sources, const RunConfig& cfg, Format fmt,
                std::ostream& out, std::ostream& err) {
  Table table({"id", "index", "operator", "p", "shift", "theta", "m", "status"});
  const auto thetas = cfg.theta_grid.values();
  for_each_pair(sources, cfg, err,
                [&](const Source& src, const RankFrequencyFunction& f, const IndexDef& idx,
                    const ThresholdFamily& family) {
                  const OperatorSpec op{idx.op, f.support_start()};
                  const auto bundle = sample_bundle(f, op, family, thetas, cfg.solve, src.id);
                  const Cell p = family.is_power() ? number(family.as_power().p) : text("");
                  const Cell shift =
                      family.is_power() ? number(family.as_power().shift) : text("");
                  for (const auto& e : bundle.entries) {
                    table.add({text(src.id), text(idx.name), text(op_name(idx.op)), p, shift,
                               number(e.theta), number(e.m),
                               text(std::string(to_string(e.status)))});
                  }
                });
  table.write(fmt, out);
}

void cmd_admissible(const std::vector<Source>& sources, const RunConfig& cfg, Format fmt,
                    std::ostream& out, std::ostream& err) {
  Table table({"id", "index", "theta_min", "theta_max", "min_attained", "certified"});
  for_each_pair(sources, cfg, err,
                [&](const Source& src, const RankFrequencyFunction& f, const IndexDef& idx,
                    const ThresholdFamily& family) {
                  const OperatorSpec op{idx.op, f.support_start()};
                  try {
                    const auto range = admissible_range(f, op, family);
                    if (!range.certified) {
                      err << "note: " << src.id << "/" << idx.name
                          << ": range estimated on a grid, not certified\n";
                    }
                    table.add({text(src.id), text(idx.name),
                               number(range.theta_min.value_or(0.0)), number(range.theta_max),
                               text(range.theta_min ? "true" : "false"),
                               text(range.certified ? "true" : "false")});
                  } catch (const ZeroFunction&) {
                    err << "warning: " << src.location << ": '" << src.id
                        << "' has only zero counts; no admissible range\n";
                    table.add({text(src.id), text(idx.name), number(NAN), number(NAN),
                               text("false"), text("false")});
                  }
                });
  table.write(fmt, out);
}

void write_report_text(const SuiteReport& report, std::ostream& out) {
  out << "master_seed " << report.master_seed << '\n';
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t vacuous = 0;
  for (const auto& r : report.reports) {
    const auto v = r.verdict();
    pass += v == Verdict::Pass;
    fail += v == Verdict::Fail;
    vacuous += v == Verdict::Vacuous;
    std::string tag(to_string(v));
    std::transform(tag.begin(), tag.end(), tag.begin(), ::toupper);
    out << tag << ' ' << r.property << " trials=" << r.trials << " satisfied=" << r.satisfied
        << " failures=" << r.failures.size() << '\n';
    const std::size_t shown = std::min<std::size_t>(r.failures.size(), 3);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& c = r.failures[i];
      out << "  counterexample seed=" << c.seed << " theta=" << format_number(c.theta)
          << " inputs=" << c.inputs_digest << " lhs=" << format_number(c.lhs)
          << " rhs=" << format_number(c.rhs) << " slack=" << format_number(c.slack) << " : "
          << c.detail << '\n';
    }
  }
  out << "summary pass=" << pass << " fail=" << fail << " vacuous=" << vacuous << '\n';
}

std::string report_json(const SuiteReport& report) {
  nlohmann::json doc;
  doc["master_seed"] = report.master_seed;
  auto& reports = doc["reports"] = nlohmann::json::array();
  for (const auto& r : report.reports) {
    nlohmann::json j;
    j["property"] = r.property;
    j["verdict"] = std::string(to_string(r.verdict()));
    j["trials"] = r.trials;
    j["satisfied"] = r.satisfied;
    auto& fs = j["failures"] = nlohmann::json::array();
    for (const auto& c : r.failures) {
      fs.push_back({{"seed", c.seed},
                    {"theta", format_number(c.theta)},
                    {"inputs", c.inputs_digest},
                    {"lhs", format_number(c.lhs)},
                    {"rhs", format_number(c.rhs)},
                    {"slack", format_number(c.slack)},
                    {"detail", c.detail}});
    }
    reports.push_back(std::move(j));
  }
  doc["failed"] = report.any_failed();
  return doc.dump(2) + "\n";
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto report = run_property_suite(cfg.suite);
  write_report_text(report, out);
  if (!cfg.report_path.empty()) {
    std::ofstream file(cfg.report_path, std::ios::binary);
    if (!file) throw InputError("cannot write report '" + cfg.report_path + "'");
    file << report_json(report);
  }
  if (report.all_vacuous()) {
    err << "warning: no trial satisfied its hypothesis; every verdict is Vacuous\n";
  }
  return report.any_failed() ? kExitVerificationFailed : kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Impact bundles of citation data", "hbundle"};
  app.require_subcommand(1);

  std::string config_path;
  std::string input_path;
  std::string theta_grid;
  std::string format = "csv";
  std::string report_path;
  std::uint64_t seed = 0;
  double tol = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--tol", tol, "absolute solver tolerance in x");
  };
  auto add_data = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("input", input_path, "CSV or JSON citation file")->required();
    sub->add_option("--theta-grid", theta_grid, "min:max:count[:log]");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* index = app.add_subcommand("index", "indices of every source on the theta grid");
  auto* bundle = app.add_subcommand("bundle", "bundle table of every source");
  auto* admissible = app.add_subcommand("admissible", "admissible theta range of every source");
  auto* verify = app.add_subcommand("verify", "run the property suite");
  add_data(index);
  add_data(bundle);
  add_data(admissible);
  add_common(verify);
  verify->add_option("--report", report_path, "machine-readable report path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    auto* sub = app.get_subcommands().front();
    if (sub->count("--seed")) cfg.suite.master_seed = seed;
    if (sub->count("--tol")) {
      if (!(tol > 0.0)) throw InputError("--tol must be > 0");
      cfg.solve.abs_tol_x = tol;
      cfg.suite.abs_tol_x = tol;
    }
    if (sub == verify) {
      if (!report_path.empty()) cfg.report_path = report_path;
      return cmd_verify(cfg, out, err);
    }
    if (!theta_grid.empty()) cfg.theta_grid = ThetaGridSpec::parse(theta_grid);
    const Format fmt = format == "json" ? Format::Json : Format::Csv;
    const auto sources = read_sources_file(input_path);
    if (sub == index) cmd_index(sources, cfg, fmt, out, err);
    if (sub == bundle) cmd_bundle(sources, cfg, fmt, out, err);
    if (sub == admissible) cmd_admissible(sources, cfg, fmt, out, err);
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
}

}  // namespace hbundle::cli
