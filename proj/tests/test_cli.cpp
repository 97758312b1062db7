#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fsrlab/analyze.hpp"
#include "fsrlab/cli.hpp"
#include "fsrlab/fixtures.hpp"
#include "fsrlab/report.hpp"
#include "support.hpp"

using namespace fsrlab;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("fsrlab_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("bundled fixtures match their expected verdicts") {
  for (const auto& f : fixture_table()) {
    CAPTURE(f.name);
    auto rule = load_fixture_rule(f.name);
    std::map<std::string, bool> fresh;
    for (const auto& v : classify_properties(*rule)) fresh[to_string(v.property)] = v.holds;
    fresh["BoundedValence"] = check_bounded_valence(*rule).verdict.holds;
    REQUIRE(f.expected.size() == fresh.size());
    for (const auto& [p, holds] : f.expected) {
      CAPTURE(p);
      CHECK(fresh.at(p) == holds);
    }
  }
}

TEST_CASE("analyze exit codes follow the verdicts") {
  const Run pillow = run({"analyze", "pillow2.fsr", "--json"});
  CHECK(pillow.code == kExitOk);
  const Json doc = Json::parse(pillow.out);
  CHECK(schema_errors(doc).empty());
  bool comb = false;
  for (const auto& v : doc["verdicts"]) {
    if (v["property"] == "CombExp") comb = v["holds"].get<bool>();
  }
  CHECK(comb);

  const Run columns = run({"analyze", "columns2.fsr", "--property", "esep"});
  CHECK(columns.code == kExitFinding);
  CHECK(columns.out.find("witness: (P,c,a) -> (P,c,a)") != std::string::npos);

  CHECK(run({"analyze", "barycentric", "--property", "bounded-valence"}).code == kExitFinding);
  CHECK(run({"analyze", "barycentric", "--property", "CombExp"}).code == kExitOk);
  CHECK(run({"analyze", "pillow2", "--crosscheck", "2"}).code == kExitOk);
  CHECK(run({"analyze", "pillow2", "--property", "nonsense"}).code == kExitInput);
}

TEST_CASE("validate reports findings and exits 2 on a bad file") {
  const std::string bad = temp_file("bad.fsr", "fsr bad\nvertex A\nedge a : A -> A\n");
  const Run r = run({"validate", bad});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("[missing-subdivision]") != std::string::npos);

  const std::string broken = temp_file("broken.fsr", "fsr broken\nvertex A\nedge a : A -> Z\n");
  const Run p = run({"validate", broken});
  CHECK(p.code == kExitInput);
  CHECK(p.err.find(":3:") != std::string::npos);

  const Run ok = run({"validate", "columns2", "--json"});
  CHECK(ok.code == kExitOk);
  CHECK(Json::parse(ok.out)["ok"] == true);

  CHECK(run({"analyze", bad}).code == kExitInput);
  CHECK(run({"validate", "/no/such/file.fsr"}).code == kExitInput);
}

TEST_CASE("usage errors print help and exit 2") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {}, {"frobnicate"}, {"subdivide", "pillow2"}, {"graph", "pillow2", "--flavor", "thin"}, {"probe", "pillow2"}}) {
    const Run r = run(args);
    CHECK(r.code == kExitInput);
    CHECK(r.err.find("Usage") != std::string::npos);
  }
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("subdivide emits census, json, dot and svg") {
  const Run census = run({"subdivide", "pillow2", "--level", "2"});
  CHECK(census.code == kExitOk);
  CHECK(census.out.find("    2        34     64     32      2") != std::string::npos);

  const Run json = run({"subdivide", "pillow2", "--level", "1", "--emit", "json"});
  CHECK(json.code == kExitOk);
  CHECK(schema_errors(Json::parse(json.out)).empty());

  const Run summary = run({"subdivide", "pillow2", "--level", "3", "--json"});
  const Json counts = Json::parse(summary.out);
  CHECK(schema_errors(counts).empty());
  CHECK(counts["counts"]["faces"] == 128);

  CHECK(run({"subdivide", "pillow2", "--level", "1", "--emit", "dot"}).out.rfind("digraph level_1 {", 0) == 0);
  const Run svg = run({"subdivide", "pillow2", "--level", "1", "--tile", "P", "--emit", "svg"});
  CHECK(svg.code == kExitOk);
  CHECK(svg.out.rfind("<svg", 0) == 0);

  const Run sphere_svg = run({"subdivide", "pillow2", "--level", "1", "--emit", "svg"});
  CHECK(sphere_svg.code == kExitInput);
  CHECK(sphere_svg.err.find("unsupported combination") != std::string::npos);
  CHECK(run({"subdivide", "pillow2", "--level", "1", "--tile", "Z"}).code == kExitInput);
}

TEST_CASE("the cell budget is enforced through the environment") {
  setenv("FSRLAB_CELL_BUDGET", "100", 1);
  const Run r = run({"subdivide", "pillow2", "--level", "6"});
  unsetenv("FSRLAB_CELL_BUDGET");
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("FSRLAB_CELL_BUDGET") != std::string::npos);
}

TEST_CASE("graph and probe commands") {
  const Run g = run({"graph", "pillow2", "--levels", "2", "--flavor", "skinny", "--emit", "json"});
  CHECK(g.code == kExitOk);
  CHECK(schema_errors(Json::parse(g.out)).empty());
  CHECK(run({"graph", "columns2", "--levels", "1", "--emit", "dot"}).out.rfind("graph Gamma_fat {", 0) == 0);
  CHECK(run({"graph", "columns2", "--ports", "1", "--emit", "dot"}).out.find("color=red") != std::string::npos);

  const Run pass = run({"probe", "rushton", "pillow2", "--M", "3", "--n", "1", "--depth", "3", "--json"});
  CHECK(pass.code == kExitOk);
  const Json pd = Json::parse(pass.out);
  CHECK(pd["status"] == "PASS_AT_DEPTH");
  CHECK(schema_errors(pd).empty());

  CHECK(run({"probe", "rushton", "triangles3", "--M", "3", "--n", "1", "--depth", "3"}).code == kExitFinding);
  CHECK(run({"probe", "rushton", "pillow2", "--M", "0", "--n", "1", "--depth", "3"}).code == kExitInput);

  const Run cert = run({"probe", "contraction", "pillow2", "--max-n", "2", "--json"});
  CHECK(cert.code == kExitOk);
  CHECK(Json::parse(cert.out)["status"] == "CERTIFIED");
  const Run wit = run({"probe", "contraction", "columns2", "--max-n", "2", "--json"});
  CHECK(wit.code == kExitFinding);
  CHECK(Json::parse(wit.out)["status"] == "WITNESS");
  const Run unknown = run({"probe", "contraction", "columns2", "--max-n", "2", "--step-budget", "1", "--json"});
  CHECK(unknown.code == kExitOk);
  CHECK(Json::parse(unknown.out)["status"] == "UNKNOWN");
}

TEST_CASE("fixtures and schema commands") {
  const Run list = run({"fixtures", "list"});
  CHECK(list.code == kExitOk);
  for (const auto& n : fixture_names()) CHECK(list.out.find(n) != std::string::npos);
  const Run emit = run({"fixtures", "emit", "columns2"});
  CHECK(emit.out == std::string(fixture_text("columns2")));
  const Run unknown = run({"fixtures", "emit", "nope"});
  CHECK(unknown.code == kExitInput);
  CHECK(unknown.err.find("available: pillow2") != std::string::npos);

  CHECK(Json::parse(run({"schema", "probe.v1"}).out) == report_schema("probe.v1"));
  CHECK(run({"schema", "probe.v2"}).code == kExitInput);
}

TEST_CASE("reruns give identical output and exit codes") {
  const std::vector<std::vector<std::string>> commands = {
      {"analyze", "columns2", "--json"},
      {"analyze", "pillow2", "--json", "--crosscheck", "2", "--pairs", "2"},
      {"probe", "contraction", "columns2", "--max-n", "2", "--json"},
      {"subdivide", "barycentric", "--level", "2", "--tile", "T1", "--emit", "svg", "--layout", "radial"},
  };
  for (const auto& c : commands) {
    const Run a = run(c);
    const Run b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("documents can be written to a file") {
  const auto path = (std::filesystem::temp_directory_path() / "fsrlab_test_graph.dot").string();
  std::filesystem::remove(path);
  const Run r = run({"analyze", "columns2", "--dot", "EE", "-o", path});
  CHECK(r.code == kExitFinding);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().rfind("digraph G_EE {", 0) == 0);
}
