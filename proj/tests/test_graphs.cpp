#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fsrlab/analyze.hpp"
#include "fsrlab/complex.hpp"
#include "fsrlab/fixtures.hpp"
#include "fsrlab/graphs.hpp"
#include "support.hpp"

using namespace fsrlab;

namespace {

int edge_index(const FsrSpec& spec, const std::string& id) {
  for (size_t e = 0; e < spec.edges.size(); ++e) {
    if (spec.edges[e].id == id) return static_cast<int>(e);
  }
  return -1;
}

bool has_neighbor(const SubdivisionGraph& g, int level, int u, int v) {
  auto nb = g.at(level).neighbors(u);
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

}  // namespace

TEST_CASE("pillow2 fat graph: one horizontal edge at level 0, eight vertical edges into level 1") {
  SubdivisionEngine engine(load_fixture_rule("pillow2"));
  const auto g = build_subdivision_graph(engine, 1, Flavor::Fat);
  CHECK(g.size(-1) == 1);
  CHECK(g.size(0) == 2);
  CHECK(g.at(0).horizontal_edges() == 1);
  CHECK(g.vertical_edges(0) == 2);
  CHECK(g.vertical_edges(1) == 8);
  CHECK(g.size(1) == 8);
}

TEST_CASE("adjacency is symmetric, loop-free and skinny contains fat") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    SubdivisionEngine engine(load_fixture_rule(name));
    const auto fat = build_subdivision_graph(engine, 2, Flavor::Fat);
    const auto skinny = build_subdivision_graph(engine, 2, Flavor::Skinny);
    for (int n = 0; n <= 2; ++n) {
      REQUIRE(fat.size(n) == skinny.size(n));
      for (int u = 0; u < fat.size(n); ++u) {
        auto nb = fat.at(n).neighbors(u);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
        for (int v : nb) {
          CHECK(v != u);
          CHECK(has_neighbor(fat, n, v, u));
          CHECK(has_neighbor(skinny, n, u, v));
        }
      }
      CHECK(skinny.at(n).horizontal_edges() >= fat.at(n).horizontal_edges());
    }
  }
}

TEST_CASE("fat adjacency is exactly edge sharing") {
  auto rule = load_fixture_rule("barycentric");
  SubdivisionEngine engine(rule);
  const auto g = build_subdivision_graph(engine, 2, Flavor::Fat);
  const LevelComplex& c = engine.sphere(2);
  std::vector<std::vector<int>> faces_of_edge(c.edges.size());
  for (size_t f = 0; f < c.faces.size(); ++f) {
    for (const auto& d : c.faces[f].slots) faces_of_edge[d.edge].push_back(static_cast<int>(f));
  }
  long long pairs = 0;
  std::set<std::pair<int, int>> expected;
  for (const auto& fs : faces_of_edge) {
    REQUIRE(fs.size() == 2);
    if (fs[0] != fs[1]) expected.insert(std::minmax(fs[0], fs[1]));
  }
  for (int u = 0; u < g.size(2); ++u) {
    for (int v : g.at(2).neighbors(u)) {
      if (u < v) {
        ++pairs;
        CHECK(expected.count({u, v}) == 1);
      }
    }
  }
  CHECK(pairs == static_cast<long long>(expected.size()));
}

TEST_CASE("level distances") {
  SubdivisionEngine pillow(load_fixture_rule("pillow2"));
  const auto g = build_subdivision_graph(pillow, 1, Flavor::Fat);
  CHECK(level_distance(g, 0, 0, 1) == 1);
  CHECK(level_distance(g, 0, 1, 1) == 0);
  for (int u = 0; u < g.size(1); ++u) CHECK(level_distance(g, 1, u, u) == 0);

  // The level-2 columns of one pillow face: the two extreme columns are 3 apart.
  auto rule = load_fixture_rule("columns2");
  SubdivisionEngine columns(rule);
  const auto h = build_subdivision_graph(columns, 2, Flavor::Fat);
  REQUIRE(h.size(2) == 8);
  for (int base = 0; base < 2; ++base) {
    int widest = 0;
    for (int u = 0; u < 8; ++u) {
      for (int v = 0; v < 8; ++v) {
        if (project_vertex(h, 0, 2, u) == base && project_vertex(h, 0, 2, v) == base) {
          widest = std::max(widest, *level_distance(h, 2, u, v));
        }
      }
    }
    CHECK(widest == 3);
  }
}

TEST_CASE("projection and lifts") {
  SubdivisionEngine engine(load_fixture_rule("pillow2"));
  const auto g = build_subdivision_graph(engine, 3, Flavor::Fat);
  const LevelComplex& l1 = engine.sphere(1);
  for (int u = 0; u < g.size(1); ++u) {
    CHECK(project_vertex(g, 1, 1, u) == u);
    CHECK(project_vertex(g, 0, 1, u) == l1.faces[u].parent);
  }
  for (int u = 0; u < g.size(3); ++u) {
    CHECK(project_vertex(g, 1, 3, u) == project_vertex(g, 1, 2, project_vertex(g, 2, 3, u)));
    CHECK(project_vertex(g, 0, 3, u) == g.at(1).parent[g.at(2).parent[g.at(3).parent[u]]]);
  }
  for (int m = 0; m <= 2; ++m) {
    for (int n = 0; m + n <= 3; ++n) {
      long long total = 0;
      for (int u = 0; u < g.size(m); ++u) {
        const auto ls = lifts(g, m, n, u);
        CHECK(std::is_sorted(ls.begin(), ls.end()));
        for (int l : ls) CHECK(project_vertex(g, m, m + n, l) == u);
        total += static_cast<long long>(ls.size());
      }
      CHECK(total == g.size(m + n));
    }
  }
}

TEST_CASE("projection does not expand distances and skinny distances never exceed fat") {
  std::mt19937 rng(7);
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    SubdivisionEngine engine(load_fixture_rule(name));
    const auto fat = build_subdivision_graph(engine, 3, Flavor::Fat);
    const auto skinny = build_subdivision_graph(engine, 3, Flavor::Skinny);
    for (int trial = 0; trial < 100; ++trial) {
      const int u = std::uniform_int_distribution<int>(0, fat.size(3) - 1)(rng);
      const int v = std::uniform_int_distribution<int>(0, fat.size(3) - 1)(rng);
      const auto d3 = level_distance(fat, 3, u, v);
      REQUIRE(d3);
      for (int m = 0; m < 3; ++m) {
        const auto dm = level_distance(fat, m, project_vertex(fat, m, 3, u), project_vertex(fat, m, 3, v));
        CHECK(*dm <= *d3);
      }
      CHECK(*level_distance(skinny, 3, u, v) <= *d3);
    }
  }
}

TEST_CASE("port-walk arcs replay on the level complex") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    SubdivisionEngine engine(load_fixture_rule(name));
    for (int n = 1; n <= 2; ++n) {
      const auto g = port_walk_graph(engine, n);
      for (const auto& a : g.arcs) CHECK(port_arc_is_sound(engine.sphere(n), g, a));
      for (const auto& c : g.cycles) {
        CHECK(c.ports.size() == c.crossed.size());
        CHECK(c.sides.size() == c.ports.size());
        PortCycle copy = c;
        CHECK(classify_winding(engine.rule().spec(), copy) == c.winding);
      }
    }
  }
}

TEST_CASE("pillow2 port cycles all wind; columns2 has a non-winding 2-cycle through a and c") {
  SubdivisionEngine pillow(load_fixture_rule("pillow2"));
  const auto p = port_walk_graph(pillow, 1);
  CHECK(p.complete);
  CHECK(!p.cycles.empty());
  CHECK(!p.shortest_non_winding);
  for (const auto& c : p.cycles) {
    CHECK(c.winding);
    CHECK(c.center >= 0);
  }

  auto rule = load_fixture_rule("columns2");
  SubdivisionEngine columns(rule);
  const auto q = port_walk_graph(columns, 1);
  REQUIRE(q.shortest_non_winding);
  const PortCycle& c = *q.shortest_non_winding;
  CHECK(c.ports.size() == 2);
  CHECK(!c.winding);
  std::vector<int> crossed = c.crossed;
  std::sort(crossed.begin(), crossed.end());
  CHECK(crossed == std::vector<int>{edge_index(rule->spec(), "a"), edge_index(rule->spec(), "c")});
}

TEST_CASE("winding classification is the common-endpoint test") {
  auto rule = load_fixture_rule("pillow2");
  const FsrSpec& spec = rule->spec();
  for (size_t e = 0; e < spec.edges.size(); ++e) {
    for (size_t f = 0; f < spec.edges.size(); ++f) {
      PortCycle c;
      c.crossed = {static_cast<int>(e), static_cast<int>(f)};
      const auto& x = spec.edges[e];
      const auto& y = spec.edges[f];
      const bool share = x.tail == y.tail || x.tail == y.head || x.head == y.tail || x.head == y.head;
      CHECK(classify_winding(spec, c) == share);
    }
  }
}

TEST_CASE("rushton probe") {
  SubdivisionEngine pillow(load_fixture_rule("pillow2"));
  const auto r = rushton_probe(pillow, 3, 1, 3);
  CHECK(r.status == ProbeStatus::PassAtDepth);
  CHECK(r.pairs_checked > 0);

  SUBCASE("a threshold beyond the diameter passes vacuously") {
    const auto v = rushton_probe(pillow, 1000, 1, 3);
    CHECK(v.status == ProbeStatus::PassAtDepth);
    CHECK(v.pairs_checked == 0);
  }
  SUBCASE("raising M only removes pairs") {
    SubdivisionEngine tri(load_fixture_rule("triangles3"));
    long long previous_pairs = -1;
    long long previous_violations = -1;
    for (int M = 1; M <= 4; ++M) {
      const auto v = rushton_probe(tri, M, 1, 3);
      if (previous_pairs >= 0) {
        CHECK(v.pairs_checked <= previous_pairs);
        CHECK(v.violations_found <= previous_violations);
      }
      previous_pairs = v.pairs_checked;
      previous_violations = v.violations_found;
    }
  }
  SUBCASE("violations replay and tampered ones do not") {
    SubdivisionEngine tri(load_fixture_rule("triangles3"));
    const auto v = rushton_probe(tri, 3, 1, 3);
    REQUIRE(v.status == ProbeStatus::Violation);
    REQUIRE(!v.violations.empty());
    CHECK(v.violations.size() <= 16);
    for (const auto& x : v.violations) {
      CHECK(x.delta_m >= 3);
      CHECK(x.delta_lift <= x.delta_m);
      CHECK(replay_rushton(tri, x));
      RushtonViolation bad = x;
      bad.delta_lift += 1;
      CHECK(!replay_rushton(tri, bad));
    }
  }
  SUBCASE("bad parameters") {
    CHECK_THROWS_AS(rushton_probe(pillow, 0, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(rushton_probe(pillow, 3, 2, 1), std::invalid_argument);
  }
}

TEST_CASE("contraction report") {
  for (const std::string name : {"pillow2", "barycentric", "triangles3"}) {
    CAPTURE(name);
    SubdivisionEngine engine(load_fixture_rule(name));
    const auto r = contraction_report(engine, 3);
    CHECK(r.status == ProbeStatus::Certified);
    REQUIRE(r.certificates.size() == 2);
    for (const auto& c : r.certificates) CHECK(c.holds);
  }
  SubdivisionEngine columns(load_fixture_rule("columns2"));
  const auto r = contraction_report(columns, 3);
  CHECK(r.status == ProbeStatus::Witness);
  REQUIRE(r.cycles.size() == 3);
  for (int n = 1; n <= 3; ++n) {
    CHECK(r.cycles[n - 1].first == n);
    CHECK(r.cycles[n - 1].second.ports.size() == 2);
    CHECK(!r.cycles[n - 1].second.winding);
  }

  SUBCASE("a starved search is UNKNOWN, never a witness") {
    PortCycleOptions tight;
    tight.step_budget = 1;
    const auto u = contraction_report(columns, 2, tight);
    CHECK(u.status == ProbeStatus::Unknown);
  }
}

TEST_CASE("boundary pairs") {
  auto columns = load_fixture_rule("columns2");
  SubdivisionEngine ce(columns);
  const auto r = boundary_pair_report(ce, 4);
  const CellRef a{Dim::Edge, edge_index(columns->spec(), "a")};
  const CellRef c{Dim::Edge, edge_index(columns->spec(), "c")};
  bool found = false;
  for (const auto& p : r.pairs) {
    found |= (p.first == a && p.second == c) || (p.first == c && p.second == a);
    const auto met = level0_cells_met(*columns, ce.sphere(4), p.face);
    CHECK(std::find(met.begin(), met.end(), p.first) != met.end());
    CHECK(std::find(met.begin(), met.end(), p.second) != met.end());
  }
  CHECK(found);

  SubdivisionEngine pe(load_fixture_rule("pillow2"));
  CHECK(boundary_pair_report(pe, 3).pairs.empty());

  // A certified edge-separation level leaves no edge pair behind.
  for (const auto& name : fixture_names()) {
    auto rule = load_fixture_rule(name);
    const auto v = check_separation(*rule, SeparationKind::EE, DisjointMode::Glued);
    if (!v.holds) continue;
    SubdivisionEngine e(rule);
    for (const auto& p : boundary_pair_report(e, *v.certified_level).pairs) {
      CHECK_FALSE((p.first.dim == Dim::Edge && p.second.dim == Dim::Edge));
    }
  }
}
