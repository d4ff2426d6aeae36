#include "hbundle/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hbundle/cli/config.hpp"

namespace hbundle::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check_counts(const Source& src) {
  if (src.counts.empty()) throw InputError(src.location + ": empty counts for '" + src.id + "'");
  for (double c : src.counts) {
    if (!std::isfinite(c) || c < 0.0) {
      throw InputError(src.location + ": counts must be finite and non-negative");
    }
  }
}

// Splits one CSV record into fields, honouring double quotes.
std::vector<std::string> csv_split(const std::string& line, const std::string& where) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw InputError(where + ": unterminated quote");
  for (auto& f : fields) f = trim(f);
  return fields;
}

std::vector<Source> read_csv(std::istream& in, const std::string& origin) {
  std::vector<Source> out;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (trim(line).empty()) continue;
    const auto fields = csv_split(line, where);
    if (!header) {
      if (fields.size() != 2 || fields[0] != "id" || fields[1] != "counts") {
        throw InputError(where + ": expected header 'id,counts'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 2) throw InputError(where + ": expected 2 fields, got " +
                                             std::to_string(fields.size()));
    Source src{fields[0], {}, {}, where};
    if (src.id.empty()) throw InputError(where + ": empty id");
    if (!fields[1].empty()) {
      std::istringstream cs(fields[1]);
      for (std::string tok; std::getline(cs, tok, ';');) {
        tok = trim(tok);
        double v = 0.0;
        const auto* end = tok.data() + tok.size();
        const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
        if (tok.empty() || ec != std::errc() || ptr != end) {
          throw InputError(where + ": bad count '" + tok + "'");
        }
        src.counts.push_back(v);
      }
    }
    check_counts(src);
    out.push_back(std::move(src));
  }
  if (!header) throw InputError(origin + ": empty input");
  return out;
}

std::vector<Source> read_json(std::istream& in, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(origin + ": " + e.what());
  }
  if (!doc.is_array()) throw InputError(origin + ": expected a JSON array");
  std::vector<Source> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& e = doc[i];
    const std::string where = origin + ":entry " + std::to_string(i + 1);
    if (!e.is_object() || !e.contains("id") || !e["id"].is_string()) {
      throw InputError(where + ": expected {\"id\": string, \"counts\": [number, ...]}");
    }
    Source src{e["id"].get<std::string>(), {}, {}, where};
    if (e.contains("breakpoints")) {
      const auto& bps = e["breakpoints"];
      if (!bps.is_array()) throw InputError(where + ": breakpoints must be an array");
      for (const auto& b : bps) {
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
          throw InputError(where + ": each breakpoint must be [x, y]");
        }
        src.breakpoints.push_back({b[0].get<double>(), b[1].get<double>()});
      }
      if (src.breakpoints.empty()) throw InputError(where + ": empty breakpoints");
    } else {
      if (!e.contains("counts") || !e["counts"].is_array()) {
        throw InputError(where + ": expected {\"id\": string, \"counts\": [number, ...]}");
      }
      for (const auto& c : e["counts"]) {
        if (!c.is_number()) throw InputError(where + ": counts must be numbers");
        src.counts.push_back(c.get<double>());
      }
      check_counts(src);
    }
    out.push_back(std::move(src));
  }
  return out;
}

}  // namespace

std::vector<Source> read_sources(std::istream& in, const std::string& origin) {
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError(origin + ": empty input");
  std::istringstream body(text);
  auto out = text[first] == '[' ? read_json(body, origin) : read_csv(body, origin);
  if (out.empty()) throw InputError(origin + ": no records");
  return out;
}

std::vector<Source> read_sources_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input '" + path + "'");
  return read_sources(in, path);
}

RankFrequencyFunction to_function(const Source& src, std::ostream& warn) {
  if (!src.breakpoints.empty()) {
    try {
      return RankFrequencyFunction(src.breakpoints);
    } catch (const Error& e) {
      throw InputError(src.location + ": " + e.what());
    }
  }
  bool resorted = false;
  auto f = from_citation_counts(src.counts, &resorted);
  if (resorted) warn << "warning: " << src.location << ": counts of '" << src.id
                     << "' were not decreasing and have been sorted\n";
  return f;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace hbundle::cli
