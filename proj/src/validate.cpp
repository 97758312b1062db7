#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "fsrlab/format.hpp"
#include "fsrlab/rule.hpp"

namespace fsrlab {

bool ValidationReport::has_code(const std::string& code) const {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.code == code; });
}

namespace {

std::string format_findings(const ValidationReport& r) {
  std::string out = "invalid finite subdivision rule";
  for (const auto& f : r.findings) {
    if (f.severity == Severity::Error) out += "\n  " + f.code + " at " + f.location + ": " + f.message;
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

InvalidSpec::InvalidSpec(ValidationReport report)
    : std::runtime_error(format_findings(report)), report_(std::move(report)) {}

int CompiledScheme::point(int slot, int k) const {
  int m = slot_subedges[slot];
  if (k == 0) return (slot + corner_count - 1) % corner_count;
  if (k == m) return slot;
  return slot_point_begin[slot] + k - 1;
}

class RuleBuilder {
 public:
  explicit RuleBuilder(const FsrSpec& spec) : spec_(spec) {}

  ValidationReport run(Rule* out) {
    rule_ = out;
    check_edges();
    check_tiles();
    check_gluing();
    check_schemes();
    if (report_.ok) check_local_degrees();
    return std::move(report_);
  }

 private:
  const FsrSpec& spec_;
  Rule* rule_ = nullptr;
  ValidationReport report_;
  std::vector<int> vmap_;
  bool words_ok_ = true;
  bool tiles_ok_ = true;
  std::vector<CompiledScheme> schemes_;
  std::vector<EdgeIncidence> incidence_;

  void error(std::string code, std::string location, std::string message) {
    report_.ok = false;
    report_.findings.push_back({Severity::Error, std::move(code), std::move(location), std::move(message)});
  }

  std::string vname(int v) const { return spec_.vertices.at(v).id; }
  std::string ename(SignedEdge e) const { return signed_edge_name(spec_, e); }

  void check_edges() {
    vmap_.assign(spec_.vertices.size(), -1);
    auto assign = [&](int v, int image, const std::string& where) {
      if (vmap_[v] == -1) {
        vmap_[v] = image;
      } else if (vmap_[v] != image) {
        error("vertex-map-conflict", where,
              "vertex " + vname(v) + " maps to both " + vname(vmap_[v]) + " and " + vname(image));
      }
    };
    for (const auto& e : spec_.edges) {
      std::string where = "edge " + e.id;
      if (e.images.empty()) {
        error("missing-subdivision", where, "edge has no subdivision word");
        words_ok_ = false;
        continue;
      }
      if (e.points.size() + 1 != e.images.size()) {
        error("word-shape", where, "subdivision word must alternate edges and vertices");
        words_ok_ = false;
        continue;
      }
      for (size_t j = 0; j + 1 < e.images.size(); ++j) {
        int p = e.points[j];
        if (spec_.edge_end(e.images[j]) != p || spec_.edge_start(e.images[j + 1]) != p) {
          error("word-chain", where,
                "subedges " + std::to_string(j) + " and " + std::to_string(j + 1) + " do not meet at " + vname(p));
        }
      }
      assign(e.tail, spec_.edge_start(e.images.front()), where);
      assign(e.head, spec_.edge_end(e.images.back()), where);
    }
    for (size_t v = 0; v < vmap_.size(); ++v) {
      if (vmap_[v] == -1) {
        error("vertex-image", "vertex " + vname(static_cast<int>(v)), "no edge word determines the image of this vertex");
        words_ok_ = false;
      }
    }
  }

  void check_tiles() {
    for (const auto& t : spec_.tiles) {
      std::string where = "tile " + t.id;
      int n = t.size();
      if (n < 3) {
        error("tile-too-small", where, "tile must have ≥ 3 vertices");
        tiles_ok_ = false;
        continue;
      }
      for (int i = 0; i < n; ++i) {
        const Slot& s = t.boundary[i];
        const Slot& next = t.boundary[(i + 1) % n];
        if (spec_.edge_end(s.edge) != s.corner || spec_.edge_start(next.edge) != s.corner) {
          error("tile-corner", where + " corner " + std::to_string(i),
                "corner " + vname(s.corner) + " is not the common endpoint of " + ename(s.edge) + " and " +
                    ename(next.edge));
          tiles_ok_ = false;
        }
      }
    }
  }

  void check_gluing() {
    const int E = static_cast<int>(spec_.edges.size());
    incidence_.assign(E, {});
    std::vector<int> count(E, 0);
    std::map<std::pair<int, int>, int> slot_uses;
    bool ok = tiles_ok_;
    for (const auto& inc : spec_.gluing.incidences) {
      std::string where = "sphere side " + spec_.edges[inc.edge].id;
      if (++count[inc.edge] > 1) {
        error("gluing-duplicate", where, "edge has more than one side record");
        ok = false;
        continue;
      }
      incidence_[inc.edge] = inc;
      bool sides_ok = true;
      for (const GluingSide& g : {inc.first, inc.second}) {
        ++slot_uses[{g.tile, g.slot}];
        const SignedEdge se = spec_.tiles[g.tile].boundary[g.slot].edge;
        if (se.edge != inc.edge) {
          error("gluing-slot-edge", where,
                "slot " + std::to_string(g.slot) + " of tile " + spec_.tiles[g.tile].id + " carries " + ename(se));
          sides_ok = false;
        }
      }
      if (!sides_ok) {
        ok = false;
        continue;
      }
      bool r1 = spec_.tiles[inc.first.tile].boundary[inc.first.slot].edge.reversed;
      bool r2 = spec_.tiles[inc.second.tile].boundary[inc.second.slot].edge.reversed;
      if (r1 == r2) {
        error("gluing-orientation", where, "both sides traverse the edge in the same direction (non-orientable)");
        ok = false;
      }
    }
    for (int e = 0; e < E; ++e) {
      if (count[e] == 0) {
        error("gluing-missing", "edge " + spec_.edges[e].id, "edge has no sphere side record");
        ok = false;
      }
    }
    for (size_t t = 0; t < spec_.tiles.size(); ++t) {
      for (int i = 0; i < spec_.tiles[t].size(); ++i) {
        int uses = 0;
        auto it = slot_uses.find({static_cast<int>(t), i});
        if (it != slot_uses.end()) uses = it->second;
        if (uses != 1) {
          error("gluing-slot", "tile " + spec_.tiles[t].id + " slot " + std::to_string(i),
                "slot appears in " + std::to_string(uses) + " side records (expected 1)");
          ok = false;
        }
      }
    }
    if (!ok) return;

    // Corner slots glued through edge endpoints must carry one vertex name
    // per class, and classes must match the declared vertices one-to-one.
    std::vector<int> corner_base;
    int total = 0;
    for (const auto& t : spec_.tiles) {
      corner_base.push_back(total);
      total += t.size();
    }
    UnionFind uf(total);
    UnionFind tiles(static_cast<int>(spec_.tiles.size()));
    auto corner_id = [&](int tile, int c) {
      int n = spec_.tiles[tile].size();
      return corner_base[tile] + ((c % n) + n) % n;
    };
    // Corner of side g sitting at the tail (false) or head (true) of the edge.
    auto corner_at = [&](const GluingSide& g, bool head) {
      bool rev = spec_.tiles[g.tile].boundary[g.slot].edge.reversed;
      bool slot_end = head != rev;
      return corner_id(g.tile, slot_end ? g.slot : g.slot - 1);
    };
    for (const auto& inc : spec_.gluing.incidences) {
      uf.unite(corner_at(inc.first, false), corner_at(inc.second, false));
      uf.unite(corner_at(inc.first, true), corner_at(inc.second, true));
      tiles.unite(inc.first.tile, inc.second.tile);
    }
    std::map<int, std::set<int>> names_by_class;
    std::map<int, std::set<int>> classes_by_name;
    for (size_t t = 0; t < spec_.tiles.size(); ++t) {
      for (int i = 0; i < spec_.tiles[t].size(); ++i) {
        int cls = uf.find(corner_id(static_cast<int>(t), i));
        int v = spec_.tiles[t].boundary[i].corner;
        names_by_class[cls].insert(v);
        classes_by_name[v].insert(cls);
      }
    }
    for (const auto& [cls, names] : names_by_class) {
      if (names.size() > 1) {
        std::string list;
        for (int v : names) list += " " + vname(v);
        error("gluing-vertex", "sphere", "glued corners carry different vertex names:" + list);
      }
    }
    for (size_t v = 0; v < spec_.vertices.size(); ++v) {
      auto it = classes_by_name.find(static_cast<int>(v));
      if (it == classes_by_name.end()) {
        error("gluing-vertex", "vertex " + vname(static_cast<int>(v)), "vertex is not a corner of any tile");
      } else if (it->second.size() > 1) {
        error("gluing-vertex", "vertex " + vname(static_cast<int>(v)),
              "vertex names " + std::to_string(it->second.size()) + " distinct points of the glued surface");
      }
    }
    for (size_t t = 1; t < spec_.tiles.size(); ++t) {
      if (tiles.find(static_cast<int>(t)) != tiles.find(0)) {
        error("sphere-disconnected", "sphere", "tile " + spec_.tiles[t].id + " is not connected to " + spec_.tiles[0].id);
        break;
      }
    }
    int chi = static_cast<int>(spec_.vertices.size()) - static_cast<int>(spec_.edges.size()) +
              static_cast<int>(spec_.tiles.size());
    if (chi != 2) {
      error("sphere-euler", "sphere", "Euler characteristic is " + std::to_string(chi) + " (a sphere needs 2)");
    }
  }

  void check_schemes() {
    std::vector<int> seen(spec_.tiles.size(), 0);
    for (const auto& s : spec_.schemes) ++seen[s.tile];
    for (size_t t = 0; t < spec_.tiles.size(); ++t) {
      if (seen[t] != 1) {
        error("scheme-count", "tile " + spec_.tiles[t].id,
              "tile type has " + std::to_string(seen[t]) + " subdivision schemes (expected 1)");
      }
    }
    if (!words_ok_ || !tiles_ok_ || !report_.ok) return;
    schemes_.resize(spec_.tiles.size());
    for (const auto& s : spec_.schemes) check_scheme(s);
  }

  void check_scheme(const SubdivisionScheme& s) {
    const TileType& tile = spec_.tiles[s.tile];
    const std::string where = "subdivision " + tile.id;
    const int n = tile.size();
    CompiledScheme cs;
    cs.tile = s.tile;
    cs.corner_count = n;
    int next = n;
    for (int i = 0; i < n; ++i) {
      int m = spec_.edges[tile.boundary[i].edge.edge].subedge_count();
      cs.slot_subedges.push_back(m);
      cs.slot_point_begin.push_back(next);
      next += m - 1;
    }
    cs.interior_begin = next;
    cs.vertex_count = next + static_cast<int>(s.interior.size());
    cs.vertex_image.assign(cs.vertex_count, -1);
    for (int i = 0; i < n; ++i) cs.vertex_image[i] = vmap_[tile.boundary[i].corner];
    for (int i = 0; i < n; ++i) {
      const SignedEdge se = tile.boundary[i].edge;
      const EdgeType& et = spec_.edges[se.edge];
      int m = et.subedge_count();
      for (int k = 1; k < m; ++k) {
        cs.vertex_image[cs.point(i, k)] = se.reversed ? et.points[m - k - 1] : et.points[k - 1];
      }
    }
    for (size_t v = 0; v < s.interior.size(); ++v) cs.vertex_image[cs.interior_begin + v] = s.interior[v].image;

    const size_t errors_before = report_.findings.size();
    auto local = [&](const LocalEndpoint& ep, const std::string& at) -> int {
      switch (ep.kind) {
        case EndpointKind::Corner: return ep.a;
        case EndpointKind::Interior: return cs.interior_begin + ep.a;
        case EndpointKind::BoundaryPoint:
          if (ep.b < 1 || ep.b >= cs.slot_subedges[ep.a]) {
            error("endpoint-range", at,
                  "slot " + std::to_string(ep.a) + " has no boundary point " + std::to_string(ep.b));
            return -1;
          }
          return cs.point(ep.a, ep.b);
      }
      return -1;
    };
    for (const auto& e : s.edges) {
      CompiledScheme::Edge ce;
      ce.tail = local(e.tail, where + " edge " + e.id);
      ce.head = local(e.head, where + " edge " + e.id);
      ce.image = e.image;
      cs.edges.push_back(ce);
    }
    if (report_.findings.size() != errors_before) return;

    auto side_start = [&](const LocalSide& side) {
      const auto& e = cs.edges[side.edge];
      return side.reversed ? e.head : e.tail;
    };
    auto side_end = [&](const LocalSide& side) {
      const auto& e = cs.edges[side.edge];
      return side.reversed ? e.tail : e.head;
    };

    struct Use {
      int face;
      int side;
      bool reversed;
    };
    std::vector<std::vector<Use>> uses(cs.edges.size());
    for (size_t f = 0; f < s.faces.size(); ++f) {
      const LocalFace& face = s.faces[f];
      CompiledScheme::Face cf;
      cf.sides = face.sides;
      cf.image = face.image;
      cf.rotation = face.rotation;
      const int k = static_cast<int>(face.sides.size());
      if (k == 0) {
        error("face-empty", where + " face " + face.id, "face has no sides");
        continue;
      }
      for (int j = 0; j < k; ++j) {
        const LocalSide& a = face.sides[j];
        const LocalSide& b = face.sides[(j + 1) % k];
        if (side_end(a) != side_start(b)) {
          error("face-chain", where + " face " + face.id,
                "side " + std::to_string(j) + " does not end where side " + std::to_string((j + 1) % k) + " starts");
        }
        cf.corners.push_back(side_end(a));
        uses[a.edge].push_back({static_cast<int>(f), j, a.reversed});
      }
      cs.faces.push_back(std::move(cf));
    }
    if (report_.findings.size() != errors_before) return;

    for (size_t e = 0; e < cs.edges.size(); ++e) {
      const std::string at = where + " edge " + s.edges[e].id;
      if (uses[e].empty()) {
        error("edge-unused", at, "local edge borders no face");
      } else if (uses[e].size() > 2) {
        error("edge-overused", at, "local edge borders " + std::to_string(uses[e].size()) + " face sides");
      } else if (uses[e].size() == 2 && uses[e][0].reversed == uses[e][1].reversed) {
        error("disk-orientation", at, "the two faces traverse the edge in the same direction");
      }
    }
    if (report_.findings.size() != errors_before) return;

    // Boundary: edges used once, traversed as their face traverses them.
    std::multimap<std::pair<int, int>, int> boundary_by_ends;
    for (size_t e = 0; e < cs.edges.size(); ++e) {
      if (uses[e].size() != 1) {
        cs.interior_edges.push_back(static_cast<int>(e));
        continue;
      }
      bool rev = uses[e][0].reversed;
      const auto& ce = cs.edges[e];
      boundary_by_ends.emplace(std::make_pair(rev ? ce.head : ce.tail, rev ? ce.tail : ce.head), static_cast<int>(e));
    }
    std::vector<bool> matched(cs.edges.size(), false);
    cs.boundary_chain.assign(n, {});
    for (int i = 0; i < n; ++i) {
      const SignedEdge se = tile.boundary[i].edge;
      const EdgeType& et = spec_.edges[se.edge];
      const int m = et.subedge_count();
      for (int j = 0; j < m; ++j) {
        const std::string at = where + " slot " + std::to_string(i) + " position " + std::to_string(j);
        auto range = boundary_by_ends.equal_range({cs.point(i, j), cs.point(i, j + 1)});
        std::vector<int> cands;
        for (auto it = range.first; it != range.second; ++it) {
          if (!matched[it->second]) cands.push_back(it->second);
        }
        if (cands.empty()) {
          error("boundary-missing", at, "no boundary edge realizes this subedge of " + ename(se));
          cs.boundary_chain[i].push_back(-1);
          continue;
        }
        if (cands.size() > 1) {
          error("boundary-ambiguous", at, "several boundary edges join the same boundary points");
        }
        int e = cands.front();
        matched[e] = true;
        bool rev = uses[e][0].reversed;
        SignedEdge traversed = rev ? cs.edges[e].image.flipped() : cs.edges[e].image;
        SignedEdge expected = se.reversed ? et.images[m - 1 - j].flipped() : et.images[j];
        if (traversed != expected) {
          error("boundary-image", at,
                "boundary edge " + s.edges[e].id + " maps to " + ename(traversed) + ", edge word requires " +
                    ename(expected));
        }
        auto& ce = cs.edges[e];
        ce.boundary = true;
        ce.slot = i;
        ce.position = j;
        ce.against_slot = rev;
        cs.boundary_chain[i].push_back(e);
      }
    }
    for (size_t e = 0; e < cs.edges.size(); ++e) {
      if (uses[e].size() == 1 && !matched[e]) {
        error("boundary-extra", where + " edge " + s.edges[e].id,
              "edge borders one face but is not part of the tile boundary");
      }
    }
    if (report_.findings.size() != errors_before) return;

    const int chi = cs.vertex_count - static_cast<int>(cs.edges.size()) + static_cast<int>(cs.faces.size());
    if (chi != 1) {
      error("disk-euler", where, "V - E + F = " + std::to_string(chi) + " (a disk needs 1)");
      return;
    }
    check_links(cs, uses, where, s);
    if (report_.findings.size() != errors_before) return;

    for (size_t f = 0; f < cs.faces.size(); ++f) check_face_image(cs, s, static_cast<int>(f), where);
    schemes_[s.tile] = std::move(cs);
  }

  template <class Uses>
  void check_links(const CompiledScheme& cs, const Uses& uses, const std::string& where, const SubdivisionScheme& s) {
    // Face corners around each vertex must form a single fan.
    std::vector<int> base;
    int total = 0;
    for (const auto& f : cs.faces) {
      base.push_back(total);
      total += static_cast<int>(f.sides.size());
    }
    UnionFind uf(total);
    auto corner = [&](int f, int j) {
      int k = static_cast<int>(cs.faces[f].sides.size());
      return base[f] + ((j % k) + k) % k;
    };
    for (const auto& u : uses) {
      if (u.size() != 2) continue;
      // Corner at the end of side j sits at the side's head; the other face
      // meets that point at the start of its side.
      uf.unite(corner(u[0].face, u[0].side), corner(u[1].face, u[1].side - 1));
      uf.unite(corner(u[0].face, u[0].side - 1), corner(u[1].face, u[1].side));
    }
    std::vector<std::set<int>> classes(cs.vertex_count);
    for (size_t f = 0; f < cs.faces.size(); ++f) {
      for (size_t j = 0; j < cs.faces[f].corners.size(); ++j) {
        classes[cs.faces[f].corners[j]].insert(uf.find(corner(static_cast<int>(f), static_cast<int>(j))));
      }
    }
    for (int v = 0; v < cs.vertex_count; ++v) {
      if (classes[v].size() != 1) {
        std::string name = v < cs.corner_count ? "corner " + std::to_string(v)
                           : v < cs.interior_begin ? "boundary point " + std::to_string(v)
                                                   : "interior " + s.interior[v - cs.interior_begin].id;
        error("disk-link", where + " " + name,
              classes[v].empty() ? "vertex lies on no face" : "faces around the vertex do not form a single fan");
      }
    }
  }

  bool face_matches(const CompiledScheme& cs, const std::vector<SignedEdge>& imgs, const std::vector<int>& ends,
                    const TileType& target, int r) const {
    const int k = static_cast<int>(imgs.size());
    for (int j = 0; j < k; ++j) {
      const Slot& slot = target.boundary[(j + r) % k];
      if (imgs[j] != slot.edge) return false;
      if (cs.vertex_image[ends[j]] != slot.corner) return false;
    }
    return true;
  }

  void check_face_image(const CompiledScheme& cs, const SubdivisionScheme& s, int f, const std::string& where) {
    const auto& face = cs.faces[f];
    const std::string at = where + " face " + s.faces[f].id;
    const TileType& target = spec_.tiles[face.image];
    const int k = static_cast<int>(face.sides.size());
    if (k != target.size()) {
      error("face-size", at,
            "face has " + std::to_string(k) + " sides but image tile " + target.id + " has " +
                std::to_string(target.size()));
      return;
    }
    if (face.rotation < 0 || face.rotation >= k) {
      error("face-rotation", at, "rotation offset out of range");
      return;
    }
    std::vector<SignedEdge> imgs;
    for (const auto& side : face.sides) {
      SignedEdge img = cs.edges[side.edge].image;
      imgs.push_back(side.reversed ? img.flipped() : img);
    }
    if (face_matches(cs, imgs, face.corners, target, face.rotation)) return;
    for (int r = 0; r < k; ++r) {
      if (face_matches(cs, imgs, face.corners, target, r)) {
        error("face-image", at, "rotation " + std::to_string(face.rotation) + " does not align with " + target.id +
                                    "; rotation " + std::to_string(r) + " would");
        return;
      }
    }
    // Read the face clockwise: reversed sides, corners shifted accordingly.
    std::vector<SignedEdge> mirrored;
    std::vector<int> mirrored_ends;
    for (int j = k - 1; j >= 0; --j) {
      mirrored.push_back(imgs[j].flipped());
      mirrored_ends.push_back(face.corners[(j - 1 + k) % k]);
    }
    for (int r = 0; r < k; ++r) {
      if (face_matches(cs, mirrored, mirrored_ends, target, r)) {
        error("orientation-reversed", at, "orientation reversed: face matches " + target.id + " only by a reflection");
        return;
      }
    }
    error("face-image", at, "face boundary does not match any rotation of tile " + target.id);
  }

  void check_local_degrees() {
    const int V = static_cast<int>(spec_.vertices.size());
    std::vector<int> val0(V, 0), val1(V, 0);
    for (const auto& t : spec_.tiles) {
      for (const auto& slot : t.boundary) {
        ++val0[slot.corner];
        ++val1[slot.corner];
      }
    }
    for (const auto& cs : schemes_) {
      const TileType& t = spec_.tiles[cs.tile];
      for (int e : cs.interior_edges) {
        for (int end : {cs.edges[e].tail, cs.edges[e].head}) {
          if (end < cs.corner_count) ++val1[t.boundary[end].corner];
        }
      }
    }
    for (int v = 0; v < V; ++v) {
      int denom = val0[vmap_[v]];
      if (denom == 0 || val1[v] % denom != 0) {
        error("local-degree", "vertex " + vname(v),
              "valence " + std::to_string(val1[v]) + " in R(S) is not a multiple of valence " + std::to_string(denom) +
                  " of its image " + vname(vmap_[v]) + " (not a branched covering)");
      }
    }
    if (rule_ != nullptr && report_.ok) {
      rule_->valence0_ = val0;
      rule_->valence1_ = val1;
      rule_->vertex_map_ = vmap_;
      rule_->schemes_ = std::move(schemes_);
      rule_->incidence_ = std::move(incidence_);
    }
  }
};

ValidationReport validate_fsr(const FsrSpec& spec) {
  RuleBuilder builder(spec);
  return builder.run(nullptr);
}

std::shared_ptr<const Rule> Rule::compile(FsrSpec spec) {
  auto rule = std::shared_ptr<Rule>(new Rule());
  rule->spec_ = std::move(spec);
  RuleBuilder builder(rule->spec_);
  ValidationReport report = builder.run(rule.get());
  if (!report.ok) throw InvalidSpec(std::move(report));
  return rule;
}

}  // namespace fsrlab
