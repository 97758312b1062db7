#include "fsrlab/analyze.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

namespace fsrlab {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

// Vertex types at the ends of a model cell.
std::vector<int> vertex_types(const TileType& t, ModelCell c) {
  if (c.dim == Dim::Vertex) return {t.boundary[c.index].corner};
  const int n = t.size();
  return {t.boundary[mod(c.index - 1, n)].corner, t.boundary[c.index].corner};
}

std::vector<int> corner_indices(const TileType& t, ModelCell c) {
  if (c.dim == Dim::Vertex) return {c.index};
  return {mod(c.index - 1, t.size()), c.index};
}

std::pair<Dim, Dim> dims_of(SeparationKind kind) {
  switch (kind) {
    case SeparationKind::EE:
      return {Dim::Edge, Dim::Edge};
    case SeparationKind::VV:
      return {Dim::Vertex, Dim::Vertex};
    case SeparationKind::VE:
      break;
  }
  return {Dim::Vertex, Dim::Edge};
}

// Ordered pairs of disjoint cells of a tile type, sorted.
std::vector<std::pair<ModelCell, ModelCell>> node_pairs(const FsrSpec& spec, int tile, SeparationKind kind,
                                                        DisjointMode mode) {
  const auto [d1, d2] = dims_of(kind);
  const int n = spec.tiles[tile].size();
  std::vector<std::pair<ModelCell, ModelCell>> out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ModelCell x{d1, i}, y{d2, j};
      if (cells_disjoint(spec, tile, x, y, mode)) out.emplace_back(x, y);
    }
  }
  return out;
}

std::string cell_name(const FsrSpec& spec, int tile, ModelCell c) {
  const TileType& t = spec.tiles[tile];
  auto name_of = [&](int i) {
    return c.dim == Dim::Vertex ? spec.vertices[t.boundary[i].corner].id : spec.edges[t.boundary[i].edge.edge].id;
  };
  const std::string name = name_of(c.index);
  int same = 0;
  for (int i = 0; i < t.size(); ++i) same += name_of(i) == name;
  if (same == 1) return name;
  return name + "#" + std::to_string(c.index);
}

// Model cells of a tile type met by one face of R^n(t), read off origins.
struct FaceContacts {
  std::vector<char> corners;
  std::vector<char> slots;
};

FaceContacts contacts(const LevelComplex& c, int face, int corner_count) {
  FaceContacts out{std::vector<char>(corner_count, 0), std::vector<char>(corner_count, 0)};
  for (const DirectedEdge& d : c.faces[face].slots) {
    const CellRef& eo = c.edges[d.edge].origin;
    if (eo.dim == Dim::Edge) out.slots[eo.index] = 1;
    const CellRef& vo = c.vertices[c.edge_end(d)].origin;
    if (vo.dim == Dim::Vertex) out.corners[vo.index] = 1;
  }
  return out;
}

bool meets(const FaceContacts& fc, ModelCell cell) {
  return (cell.dim == Dim::Vertex ? fc.corners : fc.slots)[cell.index] != 0;
}

PropertyVerdict composite(Property p, const std::vector<const PropertyVerdict*>& parts) {
  PropertyVerdict v;
  v.property = p;
  v.holds = true;
  int level = 0;
  std::string names;
  for (const PropertyVerdict* part : parts) {
    if (!names.empty()) names += " and ";
    names += to_string(part->property);
    if (part->holds) {
      level = std::max(level, part->certified_level.value_or(0));
    } else if (v.holds) {
      v.holds = false;
      v.witness = part->witness;
      v.witness_labels = part->witness_labels;
      v.basis = std::string("fails because ") + to_string(part->property) + " fails";
    }
  }
  if (v.holds) {
    v.certified_level = level;
    v.basis = "conjunction of " + names;
  }
  return v;
}

}  // namespace

const char* to_string(SeparationKind kind) {
  switch (kind) {
    case SeparationKind::EE:
      return "EE";
    case SeparationKind::VV:
      return "VV";
    case SeparationKind::VE:
      return "VE";
  }
  return "?";
}

bool cells_disjoint(const FsrSpec& spec, int tile, ModelCell x, ModelCell y, DisjointMode mode) {
  const TileType& t = spec.tiles[tile];
  std::vector<int> a, b;
  if (mode == DisjointMode::ModelDisk) {
    a = corner_indices(t, x);
    b = corner_indices(t, y);
  } else {
    a = vertex_types(t, x);
    b = vertex_types(t, y);
  }
  for (int u : a) {
    if (std::find(b.begin(), b.end(), u) != b.end()) return false;
  }
  // Distinct edges with distinct ends are disjoint; the same slot never is.
  return !(x.dim == Dim::Edge && y.dim == Dim::Edge && x.index == y.index);
}

int SeparationGraph::find(const SeparationNode& node) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || !(*it == node)) return -1;
  return static_cast<int>(it - nodes.begin());
}

std::string SeparationGraph::label(const FsrSpec& spec, int node) const {
  const SeparationNode& n = nodes[node];
  return "(" + spec.tiles[n.tile].id + "," + cell_name(spec, n.tile, n.a1) + "," + cell_name(spec, n.tile, n.a2) +
         ")";
}

SeparationGraph build_separation_graph(const Rule& rule, SeparationKind kind, DisjointMode mode) {
  const FsrSpec& spec = rule.spec();
  SeparationGraph g;
  g.kind = kind;
  g.mode = mode;
  for (int t = 0; t < rule.tile_count(); ++t) {
    for (const auto& [x, y] : node_pairs(spec, t, kind, mode)) g.nodes.push_back({t, x, y});
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  g.successors.assign(g.nodes.size(), {});

  for (int from = 0; from < static_cast<int>(g.nodes.size()); ++from) {
    const SeparationNode& node = g.nodes[from];
    const CompiledScheme& cs = rule.scheme(node.tile);
    for (int q = 0; q < static_cast<int>(cs.faces.size()); ++q) {
      const auto& face = cs.faces[q];
      const int k = static_cast<int>(face.sides.size());
      // Cells of the image tile type lying in a source cell, with their local index.
      auto inside = [&](ModelCell source, Dim dim) {
        std::vector<std::pair<ModelCell, int>> out;
        for (int c = 0; c < k; ++c) {
          const int j = mod(c - face.rotation, k);
          if (dim == Dim::Vertex) {
            const int local = face.corners[j];
            if (source.dim == Dim::Vertex && local == source.index) out.push_back({{Dim::Vertex, c}, local});
          } else {
            const int local = face.sides[j].edge;
            const auto& le = cs.edges[local];
            if (source.dim == Dim::Edge && le.boundary && le.slot == source.index) out.push_back({{Dim::Edge, c}, local});
          }
        }
        return out;
      };
      for (const auto& [c1, l1] : inside(node.a1, node.a1.dim)) {
        for (const auto& [c2, l2] : inside(node.a2, node.a2.dim)) {
          const int to = g.find({face.image, c1, c2});
          if (to < 0) continue;
          g.arcs.push_back({from, to, q, l1, l2});
          g.successors[from].push_back(to);
        }
      }
    }
  }
  return g;
}

bool arc_is_sound(SubdivisionEngine& engine, const SeparationGraph& graph, const SeparationArc& arc) {
  const SeparationNode& src = graph.nodes.at(arc.from);
  const SeparationNode& dst = graph.nodes.at(arc.to);
  const LevelComplex& c = engine.tile(src.tile, 1);
  if (arc.face < 0 || arc.face >= static_cast<int>(c.faces.size())) return false;
  const ComplexFace& f = c.faces[arc.face];
  if (f.type != dst.tile) return false;
  auto lies_in = [&](ModelCell target_cell, ModelCell source_cell) {
    if (target_cell.dim == Dim::Vertex) {
      const int v = c.edge_end(f.slots[target_cell.index]);
      return c.vertices[v].origin == CellRef{Dim::Vertex, source_cell.index};
    }
    const int e = f.slots[target_cell.index].edge;
    return c.edges[e].origin == CellRef{Dim::Edge, source_cell.index};
  };
  return lies_in(dst.a1, src.a1) && lies_in(dst.a2, src.a2);
}

const char* to_string(Property p) {
  switch (p) {
    case Property::Esub:
      return "Esub";
    case Property::Esep:
      return "Esep";
    case Property::Vsep:
      return "Vsep";
    case Property::VEsep:
      return "VEsep";
    case Property::M0comb:
      return "M0comb";
    case Property::CombExp:
      return "CombExp";
    case Property::BoundedValence:
      return "BoundedValence";
  }
  return "?";
}

std::optional<Property> property_from_string(std::string_view name) {
  std::string lower;
  for (char ch : name) {
    if (ch != '-' && ch != '_') lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  for (Property p : {Property::Esub, Property::Esep, Property::Vsep, Property::VEsep, Property::M0comb,
                     Property::CombExp, Property::BoundedValence}) {
    std::string candidate;
    for (const char* c = to_string(p); *c != '\0'; ++c) {
      candidate += static_cast<char>(std::tolower(static_cast<unsigned char>(*c)));
    }
    if (candidate == lower) return p;
  }
  return std::nullopt;
}

std::optional<SeparationKind> separation_kind_of(Property p) {
  switch (p) {
    case Property::Esep:
      return SeparationKind::EE;
    case Property::Vsep:
      return SeparationKind::VV;
    case Property::VEsep:
      return SeparationKind::VE;
    default:
      return std::nullopt;
  }
}

PropertyVerdict check_separation(const Rule& rule, const SeparationGraph& graph) {
  PropertyVerdict v;
  switch (graph.kind) {
    case SeparationKind::EE:
      v.property = Property::Esep;
      break;
    case SeparationKind::VV:
      v.property = Property::Vsep;
      break;
    case SeparationKind::VE:
      v.property = Property::VEsep;
      break;
  }
  std::vector<int> cycle = shortest_cycle(graph.successors);
  const std::string name = std::string("G_") + to_string(graph.kind);
  if (cycle.empty()) {
    v.holds = true;
    v.certified_level = longest_path(graph.successors) + 1;
    v.basis = name + " is acyclic (" + std::to_string(graph.nodes.size()) + " nodes, " +
              std::to_string(graph.arcs.size()) + " arcs)";
    if (graph.nodes.empty()) v.basis += "; vacuous";
    return v;
  }
  v.holds = false;
  v.witness = cycle;
  for (int n : cycle) v.witness_labels.push_back(graph.label(rule.spec(), n));
  v.basis = name + " has a directed cycle of length " + std::to_string(cycle.size());
  return v;
}

PropertyVerdict check_separation(const Rule& rule, SeparationKind kind, DisjointMode mode) {
  return check_separation(rule, build_separation_graph(rule, kind, mode));
}

PropertyVerdict check_esub(const Rule& rule) {
  const FsrSpec& spec = rule.spec();
  const int E = rule.edge_count();
  Adjacency succ(E);
  for (int e = 0; e < E; ++e) {
    if (spec.edges[e].subedge_count() == 1) succ[e].push_back(spec.edges[e].images[0].edge);
  }
  PropertyVerdict v;
  v.property = Property::Esub;
  std::vector<int> cycle = shortest_cycle(succ);
  if (!cycle.empty()) {
    v.holds = false;
    v.witness = cycle;
    for (int e : cycle) v.witness_labels.push_back(spec.edges[e].id);
    v.basis = "edges cycling through single-subedge words are never subdivided";
    return v;
  }
  // First level at which an edge is properly subdivided: 1 + that of its image.
  std::vector<int> level(E, 0);
  std::function<int(int)> first = [&](int e) {
    if (level[e] == 0) level[e] = succ[e].empty() ? 1 : 1 + first(succ[e][0]);
    return level[e];
  };
  int worst = 0;
  for (int e = 0; e < E; ++e) worst = std::max(worst, first(e));
  v.holds = true;
  v.certified_level = worst;
  v.basis = "every single-subedge chain ends at a subdividing edge";
  return v;
}

std::vector<PropertyVerdict> classify_properties(const Rule& rule, DisjointMode mode) {
  std::vector<PropertyVerdict> out;
  out.push_back(check_esub(rule));
  out.push_back(check_separation(rule, SeparationKind::EE, mode));
  out.push_back(check_separation(rule, SeparationKind::VV, mode));
  out.push_back(check_separation(rule, SeparationKind::VE, mode));
  const PropertyVerdict& esub = out[0];
  const PropertyVerdict& esep = out[1];
  const PropertyVerdict& vsep = out[2];
  const PropertyVerdict& vesep = out[3];
  PropertyVerdict m0 = composite(Property::M0comb, {&esub, &esep});
  PropertyVerdict ce = composite(Property::CombExp, {&esep, &vesep, &vsep});
  out.push_back(std::move(m0));
  out.push_back(std::move(ce));
  return out;
}

BoundedValenceReport check_bounded_valence(const Rule& rule) {
  const FsrSpec& spec = rule.spec();
  const int V = rule.vertex_count();
  BoundedValenceReport r;
  r.graph.successor.resize(V);
  r.graph.weight.resize(V);
  for (int v = 0; v < V; ++v) {
    r.graph.successor[v] = rule.vertex_map(v);
    r.graph.weight[v] = rule.level1_valence(v) / rule.base_valence(rule.vertex_map(v));
  }
  // Each orbit ends in a cycle; the cycle is branched iff some weight exceeds 1.
  std::vector<int> first_branched_cycle;
  for (int v = 0; v < V; ++v) {
    std::vector<int> seen_at(V, -1);
    std::vector<int> path;
    int u = v;
    while (seen_at[u] < 0) {
      seen_at[u] = static_cast<int>(path.size());
      path.push_back(u);
      u = r.graph.successor[u];
    }
    std::vector<int> cycle(path.begin() + seen_at[u], path.end());
    bool branched = std::any_of(cycle.begin(), cycle.end(), [&](int w) { return r.graph.weight[w] > 1; });
    if (!branched) continue;
    r.ideal.push_back(v);
    if (first_branched_cycle.empty()) {
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      first_branched_cycle = cycle;
    }
  }
  PropertyVerdict& verdict = r.verdict;
  verdict.property = Property::BoundedValence;
  verdict.holds = r.ideal.empty();
  if (verdict.holds) {
    verdict.basis = "no vertex orbit reaches a cycle with local degree product above 1";
  } else {
    verdict.witness = first_branched_cycle;
    for (int w : first_branched_cycle) verdict.witness_labels.push_back(spec.vertices[w].id);
    long long product = 1;
    for (int w : first_branched_cycle) product *= r.graph.weight[w];
    verdict.basis = "periodic branch point: orbit cycle with degree product " + std::to_string(product);
  }
  return r;
}

std::vector<Violation> scan_violations(SubdivisionEngine& engine, SeparationKind kind, int tile, int level,
                                       DisjointMode mode) {
  const FsrSpec& spec = engine.rule().spec();
  const LevelComplex& c = engine.tile(tile, level);
  const int n = spec.tiles[tile].size();
  const auto pairs = node_pairs(spec, tile, kind, mode);
  std::vector<Violation> out;
  if (pairs.empty()) return out;
  for (int f = 0; f < static_cast<int>(c.faces.size()); ++f) {
    const FaceContacts fc = contacts(c, f, n);
    for (const auto& [x, y] : pairs) {
      if (meets(fc, x) && meets(fc, y)) out.push_back({tile, level, f, x, y});
    }
  }
  return out;
}

namespace {

void crosscheck_separation(SubdivisionEngine& engine, SeparationKind kind, DisjointMode mode, CrosscheckReport& r) {
  const Rule& rule = engine.rule();
  const SeparationGraph g = build_separation_graph(rule, kind, mode);
  r.verdict = check_separation(rule, g);
  if (!r.verdict.holds) {
    const std::vector<int>& cycle = r.verdict.witness;
    const int c = static_cast<int>(cycle.size());
    if (c > r.level_cap) {
      r.partial = true;
      r.detail = "witness cycle length " + std::to_string(c) + " exceeds the level cap";
      return;
    }
    // Follow the cycle's arcs down from the start tile.
    const SeparationNode start = g.nodes[cycle[0]];
    int face = 0;
    for (int i = 0; i < c; ++i) {
      const int from = cycle[i];
      const int to = cycle[(i + 1) % c];
      auto arc = std::find_if(g.arcs.begin(), g.arcs.end(),
                              [&](const SeparationArc& a) { return a.from == from && a.to == to; });
      const LevelComplex& next = engine.tile(start.tile, i + 1);
      face = next.children.face_face_begin[face] + arc->face;
    }
    const LevelComplex& last = engine.tile(start.tile, c);
    r.level_checked = c;
    const FaceContacts fc = contacts(last, face, rule.spec().tiles[start.tile].size());
    if (meets(fc, start.a1) && meets(fc, start.a2)) {
      r.violation = Violation{start.tile, c, face, start.a1, start.a2};
      r.agrees = true;
      r.detail = "tile " + std::to_string(face) + " of level " + std::to_string(c) + " in " +
                 rule.spec().tiles[start.tile].id + " meets both cells of " + r.verdict.witness_labels[0];
    } else {
      r.detail = "replayed witness tile does not meet both cells";
    }
    return;
  }
  const int target = *r.verdict.certified_level;
  if (target > r.level_cap) {
    r.partial = true;
    r.detail = "certified level " + std::to_string(target) + " exceeds the level cap";
    return;
  }
  long long at_target = 0, below = 0;
  for (int t = 0; t < rule.tile_count(); ++t) {
    at_target += static_cast<long long>(scan_violations(engine, kind, t, target, mode).size());
    if (target > 1) below += static_cast<long long>(scan_violations(engine, kind, t, target - 1, mode).size());
  }
  r.level_checked = target;
  // Sharpness: a longest DAG path of target-1 arcs yields a violation one level up.
  const bool sharp = target == 1 || below > 0;
  r.agrees = at_target == 0 && sharp;
  r.detail = std::to_string(at_target) + " violating tiles at level " + std::to_string(target);
  if (target > 1) r.detail += ", " + std::to_string(below) + " at level " + std::to_string(target - 1);
}

void crosscheck_esub(SubdivisionEngine& engine, CrosscheckReport& r) {
  const Rule& rule = engine.rule();
  r.verdict = check_esub(rule);
  auto subedges = [&](int level) {
    std::vector<int> count(rule.edge_count(), 0);
    for (const auto& e : engine.sphere(level).edges) {
      if (e.origin.dim == Dim::Edge) ++count[e.origin.index];
    }
    return count;
  };
  if (!r.verdict.holds) {
    const int c = static_cast<int>(r.verdict.witness.size());
    const int level = std::max(c, std::min(r.level_cap, 4));
    const std::vector<int> count = subedges(level);
    r.level_checked = level;
    r.agrees = std::all_of(r.verdict.witness.begin(), r.verdict.witness.end(), [&](int e) { return count[e] == 1; });
    r.detail = "witness edges remain single edges at level " + std::to_string(level);
    return;
  }
  const int target = *r.verdict.certified_level;
  if (target > r.level_cap) {
    r.partial = true;
    r.detail = "certified level exceeds the level cap";
    return;
  }
  const std::vector<int> at = subedges(target);
  const bool all_split = std::all_of(at.begin(), at.end(), [](int k) { return k >= 2; });
  bool sharp = true;
  if (target > 1) {
    const std::vector<int> before = subedges(target - 1);
    sharp = std::any_of(before.begin(), before.end(), [](int k) { return k == 1; });
  }
  r.level_checked = target;
  r.agrees = all_split && sharp;
  r.detail = all_split ? "every base edge is properly subdivided at level " + std::to_string(target)
                       : "some base edge is still a single edge at level " + std::to_string(target);
}

}  // namespace

CrosscheckReport crosscheck_at_bound(SubdivisionEngine& engine, Property property, int n_max, DisjointMode mode) {
  const Rule& rule = engine.rule();
  CrosscheckReport r;
  r.property = property;
  const int l = rule.max_tile_size();
  r.bound = rule.tile_count() * l * l;
  r.level_cap = std::min(n_max, r.bound);

  auto run_part = [&](Property part) {
    CrosscheckReport sub = r;
    sub.property = part;
    try {
      if (part == Property::Esub) {
        crosscheck_esub(engine, sub);
      } else {
        crosscheck_separation(engine, *separation_kind_of(part), mode, sub);
      }
    } catch (const BudgetExceeded& e) {
      sub.partial = true;
      sub.agrees = false;
      sub.detail = e.what();
    }
    return sub;
  };

  switch (property) {
    case Property::Esub:
    case Property::Esep:
    case Property::Vsep:
    case Property::VEsep:
      return run_part(property);
    case Property::M0comb:
    case Property::CombExp: {
      std::vector<Property> parts = property == Property::M0comb
                                        ? std::vector<Property>{Property::Esub, Property::Esep}
                                        : std::vector<Property>{Property::Esep, Property::VEsep, Property::Vsep};
      std::vector<CrosscheckReport> subs;
      std::vector<const PropertyVerdict*> verdicts;
      for (Property p : parts) subs.push_back(run_part(p));
      for (const auto& s : subs) verdicts.push_back(&s.verdict);
      r.verdict = composite(property, verdicts);
      r.agrees = true;
      for (const auto& s : subs) {
        r.agrees = r.agrees && s.agrees;
        r.partial = r.partial || s.partial;
        r.level_checked = std::max(r.level_checked, s.level_checked);
        if (!r.violation && s.violation) r.violation = s.violation;
        if (!r.detail.empty()) r.detail += "; ";
        r.detail += std::string(to_string(s.property)) + ": " + s.detail;
      }
      return r;
    }
    case Property::BoundedValence:
      break;
  }
  throw std::invalid_argument("no brute-force crosscheck for BoundedValence");
}

}  // namespace fsrlab
