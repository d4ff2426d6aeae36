#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbundle/cli/commands.hpp"
#include "hbundle/solver.hpp"

using namespace hbundle;
using namespace hbundle::cli;

namespace {

const std::string kFixtures = HBUNDLE_FIXTURES;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("theta grid specs") {
  auto g = ThetaGridSpec::parse("0.5:2:3");
  CHECK(g.values() == std::vector<double>{0.5, 1.25, 2});
  g = ThetaGridSpec::parse("1:100:3:log");
  const auto v = g.values();
  CHECK(v[1] == doctest::Approx(10));
  CHECK(v[2] == 100);
  CHECK(ThetaGridSpec::parse("2:2:1").values() == std::vector<double>{2});
  CHECK_THROWS_AS(ThetaGridSpec::parse("0:1:3"), InputError);
  CHECK_THROWS_AS(ThetaGridSpec::parse("1:0.5:3"), InputError);
  CHECK_THROWS_AS(ThetaGridSpec::parse("1:2:0"), InputError);
  CHECK_THROWS_AS(ThetaGridSpec::parse("1:2"), InputError);
  CHECK_THROWS_AS(ThetaGridSpec::parse("1:2:3:cubic"), InputError);
}

TEST_CASE("config files") {
  std::istringstream in(
      "# comment\nseed = 5\ntrials = 7\ntheta_grid = 1:2:2\n"
      "index = k identity power 2\nindex = d integral decreasing_linear 50\n"
      "tol = 1e-11\nimpact_include_reversal = true\n");
  const auto cfg = load_config(in, "test.cfg");
  CHECK(cfg.suite.master_seed == 5);
  CHECK(cfg.suite.trials == 7);
  CHECK(cfg.theta_grid.count == 2);
  REQUIRE(cfg.indices.size() == 2);
  CHECK(cfg.indices[0].name == "k");
  CHECK(cfg.indices[0].p == 2);
  CHECK(cfg.indices[1].decreasing);
  CHECK(cfg.solve.abs_tol_x == 1e-11);
  CHECK(cfg.suite.impact_include_reversal);

  const RunConfig defaults;
  REQUIRE(defaults.indices.size() == 2);
  CHECK(defaults.indices[1].op == OperatorKind::Averaging);

  std::istringstream bad("seed = 1\ncolour = blue\n");
  try {
    load_config(bad, "bad.cfg");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
  }
  std::istringstream tol("tol = -1\n");
  CHECK_THROWS_AS(load_config(tol, "t"), InputError);
}

TEST_CASE("input parsing") {
  std::istringstream csv("id,counts\na,3;2;1\n\"b,c\",5\n");
  const auto s = read_sources(csv, "in.csv");
  REQUIRE(s.size() == 2);
  CHECK(s[1].id == "b,c");
  CHECK(s[0].counts == std::vector<double>{3, 2, 1});
  CHECK(s[0].location == "in.csv:2");

  std::istringstream json(R"([{"id": "x", "counts": [1, 2]}, {"id": "y", "breakpoints": [[0, 2], [4, 0]]}])");
  const auto j = read_sources(json, "in.json");
  REQUIRE(j.size() == 2);
  CHECK(j[1].breakpoints.size() == 2);

  std::istringstream empty("id,counts\na,3\nb,\n");
  try {
    read_sources(empty, "e.csv");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("e.csv:3") != std::string::npos);
  }
  std::istringstream negative("id,counts\na,3;-1\n");
  CHECK_THROWS_AS(read_sources(negative, "n"), InputError);
  std::istringstream header("name,values\na,1\n");
  CHECK_THROWS_AS(read_sources(header, "h"), InputError);
  std::istringstream nothing("");
  CHECK_THROWS_AS(read_sources(nothing, "z"), InputError);
  std::istringstream broken("[{\"id\": 1}]");
  CHECK_THROWS_AS(read_sources(broken, "b"), InputError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(20.0 / 3) == "6.66666666667");
  CHECK(format_number(5) == "5");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(NAN) == "nan");
  CHECK(csv_field("a,b") == "\"a,b\"");
}

TEST_CASE("index command on the discrete fixture") {
  const auto r = run({"index", kFixtures + "/counts.csv"});
  CHECK(r.code == kExitOk);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"id", "index", "theta", "value", "status"});
  CHECK(rows[1] == std::vector<std::string>{"author-a", "h", "1", "4", "ExactSegment"});
  CHECK(rows[2] == std::vector<std::string>{"author-a", "g", "1", "6", "ExactSegment"});
  // author-c is unsorted.
  CHECK(r.err.find("author-c") != std::string::npos);
  CHECK(r.err.find("sorted") != std::string::npos);
}

TEST_CASE("malformed inputs exit 2 with the line") {
  auto r = run({"index", kFixtures + "/empty_counts.csv"});
  CHECK(r.code == kExitBadInput);
  CHECK(r.err.find("empty_counts.csv:3") != std::string::npos);
  r = run({"bundle", kFixtures + "/bad_number.csv"});
  CHECK(r.code == kExitBadInput);
  CHECK(r.err.find("bad_number.csv:2") != std::string::npos);
  r = run({"index", kFixtures + "/does_not_exist.csv"});
  CHECK(r.code == kExitBadInput);
  r = run({"index", kFixtures + "/counts.csv", "--theta-grid", "0:1:2"});
  CHECK(r.code == kExitBadInput);
  r = run({"index", kFixtures + "/counts.csv", "--config", kFixtures + "/bad_key.cfg"});
  CHECK(r.code == kExitBadInput);
  r = run({"frobnicate"});
  CHECK(r.code == kExitBadInput);
  r = run({"index", kFixtures + "/counts.csv", "--format", "xml"});
  CHECK(r.code == kExitBadInput);
}

TEST_CASE("bundle command on the line fixture") {
  const auto r = run({"bundle", kFixtures + "/functions.json", "--theta-grid", "0.5:2:3:log"});
  REQUIRE(r.code == kExitOk);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"id", "index", "operator", "p", "shift", "theta",
                                            "m", "status"});
  CHECK(rows[1] == std::vector<std::string>{"line", "h", "identity", "1", "0", "0.5",
                                            "6.66666666667", "ExactSegment"});
  CHECK(rows[2][6] == "5");
  CHECK(rows[3][6] == "3.33333333333");
}

TEST_CASE("bundle output round-trips against the solver") {
  const auto r = run({"bundle", kFixtures + "/counts.json", "--config",
                      kFixtures + "/indices.cfg"});
  REQUIRE(r.code == kExitOk);
  const auto rows = parse_csv(r.out);
  const auto sources = read_sources_file(kFixtures + "/counts.json");
  const auto cfg = load_config_file(kFixtures + "/indices.cfg");
  std::size_t row = 1;
  std::ostringstream sink;
  for (const auto& src : sources) {
    const auto f = to_function(src, sink);
    for (const auto& idx : cfg.indices) {
      double prev = INFINITY;
      for (double th : cfg.theta_grid.values()) {
        REQUIRE(row < rows.size());
        const auto res = solve_bundle_point(f, OperatorSpec{idx.op, f.support_start()},
                                            idx.family(f.support_start()), th, cfg.solve);
        CHECK(rows[row][0] == src.id);
        CHECK(rows[row][1] == idx.name);
        CHECK(rows[row][6] == format_number(res.m));
        const double m = std::strtod(rows[row][6].c_str(), nullptr);
        if (idx.name == "h") CHECK(m < prev);
        prev = m;
        ++row;
      }
    }
  }
  CHECK(row == rows.size());
}

TEST_CASE("single-theta bundle equals the index") {
  const auto b = run({"bundle", kFixtures + "/counts.csv", "--theta-grid", "1.5:1.5:1"});
  const auto i = run({"index", kFixtures + "/counts.csv", "--theta-grid", "1.5:1.5:1"});
  const auto br = parse_csv(b.out);
  const auto ir = parse_csv(i.out);
  REQUIRE(br.size() == ir.size());
  for (std::size_t k = 1; k < br.size(); ++k) CHECK(br[k][6] == ir[k][3]);
}

TEST_CASE("admissible command") {
  const auto r = run({"admissible", kFixtures + "/functions.json"});
  REQUIRE(r.code == kExitOk);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"id", "index", "theta_min", "theta_max",
                                            "min_attained", "certified"});
  // line/h, line/g, constant/h, constant/g, triangle/h, triangle/g
  CHECK(rows[1] == std::vector<std::string>{"line", "h", "0", "inf", "false", "true"});
  CHECK(rows[3] == std::vector<std::string>{"constant", "h", "0.5", "inf", "true", "true"});
  CHECK(rows[4] == std::vector<std::string>{"constant", "g", "0.5", "inf", "true", "true"});
  CHECK(rows[5] == std::vector<std::string>{"triangle", "h", "0", "inf", "false", "true"});
}

TEST_CASE("json output") {
  const auto r = run({"admissible", kFixtures + "/functions.json", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.size() == 6);
  CHECK(doc[2]["theta_min"] == 0.5);
  CHECK(doc[2]["theta_max"] == "inf");
}

TEST_CASE("verify command exit codes") {
  const std::string report = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                             "/hbundle_unit_report.json";
  auto r = run({"verify", "--config", kFixtures + "/stock.cfg", "--report", report});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("summary") != std::string::npos);
  std::FILE* fp = std::fopen(report.c_str(), "r");
  REQUIRE(fp != nullptr);
  std::fclose(fp);

  r = run({"verify", "--config", kFixtures + "/zero_trials.cfg", "--report", report});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("Vacuous") != std::string::npos);
  CHECK(r.out.find("PASS") == std::string::npos);

  r = run({"verify", "--config", kFixtures + "/reversal.cfg", "--report", report});
  CHECK(r.code == kExitVerificationFailed);
  CHECK(r.out.find("counterexample") != std::string::npos);

  r = run({"verify", "--config", kFixtures + "/bad_key.cfg"});
  CHECK(r.code == kExitBadInput);
  std::remove(report.c_str());
}
