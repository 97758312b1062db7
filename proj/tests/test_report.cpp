#include <doctest.h>

#include <cmath>
#include <regex>

#include "fsrlab/analyze.hpp"
#include "fsrlab/complex.hpp"
#include "fsrlab/fixtures.hpp"
#include "fsrlab/graphs.hpp"
#include "fsrlab/render.hpp"
#include "fsrlab/report.hpp"

using namespace fsrlab;

namespace {

AnalysisInputs full_analysis(SubdivisionEngine& engine) {
  const Rule& rule = engine.rule();
  AnalysisInputs in;
  in.verdicts = classify_properties(rule);
  in.valence = check_bounded_valence(rule);
  for (SeparationKind k : {SeparationKind::EE, SeparationKind::VV, SeparationKind::VE}) {
    in.graphs.push_back(build_separation_graph(rule, k));
  }
  for (const auto& v : in.verdicts) in.crosschecks.push_back(crosscheck_at_bound(engine, v.property, 2));
  in.growth = growth_constants(engine);
  in.boundary_pairs = boundary_pair_report(engine, 2);
  return in;
}

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Proper crossing of two segments with no shared endpoint.
bool segments_cross(Point a, Point b, Point c, Point d) {
  constexpr double eps = 1e-9;
  const double d1 = cross(a, b, c), d2 = cross(a, b, d), d3 = cross(c, d, a), d4 = cross(c, d, b);
  return ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps));
}

// Edges meet only at shared endpoints, no two vertices coincide and every
// face is counterclockwise.
void check_embedding(const LevelComplex& c, const LayoutResult& lay) {
  const auto& p = lay.positions;
  for (size_t i = 0; i < p.size(); ++i) {
    for (size_t j = i + 1; j < p.size(); ++j) CHECK(std::hypot(p[i].x - p[j].x, p[i].y - p[j].y) > 1e-6);
  }
  int crossings = 0;
  for (size_t i = 0; i < c.edges.size(); ++i) {
    for (size_t j = i + 1; j < c.edges.size(); ++j) {
      const auto& e = c.edges[i];
      const auto& f = c.edges[j];
      if (e.tail == f.tail || e.tail == f.head || e.head == f.tail || e.head == f.head) continue;
      crossings += segments_cross(p[e.tail], p[e.head], p[f.tail], p[f.head]);
    }
  }
  CHECK(crossings == 0);
  for (size_t f = 0; f < c.faces.size(); ++f) {
    const auto corners = c.face_corners(static_cast<int>(f));
    double area = 0;
    for (size_t i = 0; i < corners.size(); ++i) {
      const Point a = p[corners[i]], b = p[corners[(i + 1) % corners.size()]];
      area += a.x * b.y - a.y * b.x;
    }
    CHECK(area > 0);
  }
}

}  // namespace

TEST_CASE("every report is schema-valid") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    auto rule = load_fixture_rule(name);
    SubdivisionEngine engine(rule);

    for (int n = 0; n <= 2; ++n) {
      for (bool cells : {true, false}) {
        const Json doc = complex_report(*rule, engine.sphere(n), cells);
        CHECK(doc["schema"] == "complex.v1");
        CHECK(schema_errors(doc).empty());
      }
      const Json tile = complex_report(*rule, engine.tile(0, n));
      CHECK(schema_errors(tile).empty());
    }

    const Json verdicts = verdict_report(*rule, full_analysis(engine));
    const auto errs = schema_errors(verdicts);
    CHECK_MESSAGE(errs.empty(), (errs.empty() ? "" : errs.front()));
    CHECK(schema_errors(verdict_report(*rule, AnalysisInputs{})).empty());

    CHECK(schema_errors(probe_report(*rule, rushton_probe(engine, 3, 1, 2))).empty());
    CHECK(schema_errors(probe_report(*rule, contraction_report(engine, 2))).empty());
    CHECK(schema_errors(graph_report(*rule, build_subdivision_graph(engine, 2, Flavor::Skinny))).empty());
  }
  // Probe evidence sections: violations and witness cycles.
  SubdivisionEngine tri(load_fixture_rule("triangles3"));
  const Json violation = probe_report(tri.rule(), rushton_probe(tri, 3, 1, 3));
  CHECK(violation["status"] == "VIOLATION");
  CHECK(schema_errors(violation).empty());
  SubdivisionEngine columns(load_fixture_rule("columns2"));
  const Json witness = probe_report(columns.rule(), contraction_report(columns, 2));
  CHECK(witness["status"] == "WITNESS");
  CHECK(schema_errors(witness).empty());
}

TEST_CASE("verdict JSON carries witness labels and null levels") {
  auto rule = load_fixture_rule("columns2");
  const Json v = verdict_json(check_separation(*rule, SeparationKind::EE));
  CHECK(v["property"] == "Esep");
  CHECK(v["holds"] == false);
  CHECK(v["certified_level"].is_null());
  CHECK(v["witness"] == Json::array({"(P,c,a)"}));
}

TEST_CASE("the validator rejects malformed documents") {
  auto rule = load_fixture_rule("pillow2");
  AnalysisInputs in;
  in.verdicts = classify_properties(*rule);
  Json doc = verdict_report(*rule, in);
  REQUIRE(schema_errors(doc).empty());

  Json missing = doc;
  missing["verdicts"][0].erase("holds");
  CHECK(!schema_errors(missing).empty());

  Json wrong_type = doc;
  wrong_type["verdicts"][0]["holds"] = "yes";
  CHECK(!schema_errors(wrong_type).empty());

  Json bad_enum = doc;
  bad_enum["mode"] = "sideways";
  CHECK(!schema_errors(bad_enum).empty());

  Json extra = doc;
  extra["surprise"] = 1;
  CHECK(!schema_errors(extra).empty());

  CHECK(!schema_errors(Json{{"schema", "nonsense.v9"}}).empty());
  CHECK(!schema_errors(Json::array()).empty());
}

TEST_CASE("schemas are listed and retrievable") {
  const auto names = schema_names();
  CHECK(names == std::vector<std::string>{"complex.v1", "graph.v1", "probe.v1", "verdict.v1"});
  for (const auto& n : names) CHECK(report_schema(n).is_object());
}

TEST_CASE("tutte layout of pillow2 R(P) is a planar drawing of 4 faces") {
  auto rule = load_fixture_rule("pillow2");
  SubdivisionEngine engine(rule);
  const LevelComplex& c = engine.tile(0, 1);
  REQUIRE(c.faces.size() == 4);
  const auto lay = disk_layout(c, Layout::Tutte);
  CHECK(lay.residual < 1e-9);
  check_embedding(c, lay);

  const std::string svg = complex_svg(*rule, c, Layout::Tutte);
  const std::regex polygon("<polygon ");
  CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), polygon), std::sregex_iterator()) == 4);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("disk layouts are embeddings at deeper levels") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    auto rule = load_fixture_rule(name);
    SubdivisionEngine engine(rule);
    for (int t = 0; t < rule->tile_count(); ++t) {
      for (int n = 1; n <= 3; ++n) {
        for (Layout layout : {Layout::Tutte, Layout::Radial}) {
          const auto lay = disk_layout(engine.tile(t, n), layout);
          CHECK(lay.residual < 1e-9);
          check_embedding(engine.tile(t, n), lay);
        }
      }
    }
  }
}

TEST_CASE("svg output is deterministic and refuses sphere complexes") {
  auto rule = load_fixture_rule("barycentric");
  SubdivisionEngine a(rule), b(rule);
  RenderOptions o;
  o.format = RenderFormat::Svg;
  CHECK(emit_render(*rule, a.tile(1, 2), o) == emit_render(*rule, b.tile(1, 2), o));
  CHECK_THROWS_AS(emit_render(*rule, a.sphere(1), o), UnsupportedRender);
  o.format = RenderFormat::Json;
  CHECK(Json::parse(emit_render(*rule, a.sphere(1), o))["schema"] == "complex.v1");
}

TEST_CASE("dot exports") {
  auto columns = load_fixture_rule("columns2");
  const auto g = build_separation_graph(*columns, SeparationKind::EE);
  const auto v = check_separation(*columns, g);
  const std::string dot = separation_dot(*columns, g, v.witness);
  CHECK(dot.find("digraph G_EE {") == 0);
  CHECK(dot.find("n0 -> n0 [label=\"PL\", color=red, penwidth=2];") != std::string::npos);
  // Only the witness loop is highlighted.
  std::size_t red = 0;
  for (auto at = dot.find("color=red"); at != std::string::npos; at = dot.find("color=red", at + 1)) ++red;
  CHECK(red == 1);

  SUBCASE("an empty graph is a valid empty document") {
    auto tri = load_fixture_rule("triangles3");
    const auto empty = build_separation_graph(*tri, SeparationKind::EE);
    REQUIRE(empty.nodes.empty());
    CHECK(separation_dot(*tri, empty) == "digraph G_EE {\n}\n");
  }
  SUBCASE("subdivision graph: vertical edges dashed") {
    SubdivisionEngine engine(load_fixture_rule("pillow2"));
    const auto gamma = build_subdivision_graph(engine, 1, Flavor::Fat);
    const std::string d = subdivision_graph_dot(engine.rule(), gamma);
    std::size_t dashed = 0;
    for (auto at = d.find("style=dashed"); at != std::string::npos; at = d.find("style=dashed", at + 1)) ++dashed;
    CHECK(dashed == 2 + 8);
    CHECK(d.find("t0_0 -- t0_1;") != std::string::npos);
  }
  SUBCASE("port graph: the non-winding cycle is highlighted") {
    SubdivisionEngine engine(columns);
    const auto pg = port_walk_graph(engine, 1);
    const std::string d = port_walk_dot(*columns, pg);
    std::size_t red = 0;
    for (auto at = d.find("color=red"); at != std::string::npos; at = d.find("color=red", at + 1)) ++red;
    CHECK(red == 2);
  }
}
