#include "hbundle/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hbundle::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(trim(part));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InputError(what + ": not a number: '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw InputError(what + ": not an unsigned integer: '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InputError(what + ": expected true or false, got '" + s + "'");
}

OperatorKind parse_operator(const std::string& s) {
  if (s == "identity") return OperatorKind::Identity;
  if (s == "averaging") return OperatorKind::Averaging;
  if (s == "integral") return OperatorKind::Integral;
  throw InputError("unknown operator '" + s + "'");
}

}  // namespace

ThetaGridSpec ThetaGridSpec::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 4) {
    throw InputError("theta grid must be min:max:count[:log], got '" + text + "'");
  }
  ThetaGridSpec g;
  g.min = parse_double(parts[0], "theta grid min");
  g.max = parse_double(parts[1], "theta grid max");
  const auto count = parse_u64(parts[2], "theta grid count");
  if (parts.size() == 4) {
    if (parts[3] != "log" && parts[3] != "linear") {
      throw InputError("theta grid spacing must be log or linear, got '" + parts[3] + "'");
    }
    g.log = parts[3] == "log";
  }
  if (!(g.min > 0.0)) throw InputError("theta grid min must be > 0");
  if (g.max < g.min) throw InputError("theta grid max must be >= min");
  if (count < 1 || count > 1000000) throw InputError("theta grid count must be in [1, 1e6]");
  g.count = static_cast<int>(count);
  return g;
}

std::vector<double> ThetaGridSpec::values() const {
  std::vector<double> out;
  if (count == 1) return {min};
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    out.push_back(log ? min * std::pow(max / min, t) : min + (max - min) * t);
  }
  out.back() = max;
  return out;
}

IndexDef IndexDef::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> w;
  for (std::string s; in >> s;) w.push_back(s);
  if (w.size() < 4) throw InputError("index needs '<name> <operator> <family> <params>'");
  IndexDef d;
  d.name = w[0];
  d.op = parse_operator(w[1]);
  if (w[2] == "power") {
    if (w.size() > 5) throw InputError("power index takes p and an optional shift");
    d.p = parse_double(w[3], "index p");
    if (!(d.p > 0.0)) throw InputError("index p must be > 0");
    if (w.size() == 5) {
      d.shift = parse_double(w[4], "index shift");
      if (*d.shift < 0.0) throw InputError("index shift must be >= 0");
    }
  } else if (w[2] == "decreasing_linear") {
    if (w.size() != 4) throw InputError("decreasing_linear index takes one ceiling");
    d.decreasing = true;
    d.ceiling = parse_double(w[3], "index ceiling");
    if (!(d.ceiling > 0.0)) throw InputError("index ceiling must be > 0");
  } else {
    throw InputError("unknown threshold family '" + w[2] + "'");
  }
  return d;
}

ThresholdFamily IndexDef::family(double support_start) const {
  if (decreasing) return ThresholdFamily::decreasing_linear(ceiling);
  const double s = shift.value_or(op == OperatorKind::Averaging ? support_start : 0.0);
  return ThresholdFamily::power(p, s);
}

RunConfig::RunConfig() {
  indices.push_back(IndexDef::parse("h identity power 1"));
  indices.push_back(IndexDef::parse("g averaging power 1"));
}

RunConfig load_config(std::istream& in, const std::string& origin) {
  RunConfig cfg;
  bool custom_indices = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw InputError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "index") {
        if (!custom_indices) cfg.indices.clear();
        custom_indices = true;
        cfg.indices.push_back(IndexDef::parse(value));
      } else if (key == "theta_grid") {
        cfg.theta_grid = ThetaGridSpec::parse(value);
      } else if (key == "seed") {
        cfg.suite.master_seed = parse_u64(value, key);
      } else if (key == "tol") {
        cfg.solve.abs_tol_x = parse_double(value, key);
      } else if (key == "scan_points") {
        cfg.solve.scan_points = static_cast<int>(parse_u64(value, key));
      } else if (key == "exact_when_possible") {
        cfg.solve.exact_when_possible = parse_bool(value, key);
      } else if (key == "trials") {
        cfg.suite.trials = parse_u64(value, key);
      } else if (key == "schedule_length") {
        cfg.suite.schedule_length = parse_u64(value, key);
      } else if (key == "convergence_n_max") {
        cfg.suite.convergence_n_max = parse_u64(value, key);
      } else if (key == "slack") {
        cfg.suite.slack = parse_double(value, key);
      } else if (key == "verify_tol") {
        cfg.suite.abs_tol_x = parse_double(value, key);
      } else if (key == "impact_include_reversal") {
        cfg.suite.impact_include_reversal = parse_bool(value, key);
      } else if (key == "report") {
        cfg.report_path = value;
      } else {
        throw InputError("unknown key '" + key + "'");
      }
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  try {
    cfg.solve.validate();
  } catch (const DomainError& e) {
    throw InputError(origin + ": " + e.what());
  }
  if (!(cfg.suite.slack >= 0.0)) throw InputError(origin + ": slack must be >= 0");
  if (!(cfg.suite.abs_tol_x > 0.0)) throw InputError(origin + ": verify_tol must be > 0");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return load_config(in, path);
}

}  // namespace hbundle::cli
