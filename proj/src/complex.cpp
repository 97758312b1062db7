#include "fsrlab/complex.hpp"

#include "fsrlab/digraph.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace fsrlab {

Counts LevelComplex::counts() const {
  return {static_cast<long long>(vertices.size()), static_cast<long long>(edges.size()),
          static_cast<long long>(faces.size())};
}

std::vector<int> LevelComplex::valences() const {
  std::vector<int> val(vertices.size(), 0);
  for (const auto& e : edges) {
    ++val[e.tail];
    ++val[e.head];
  }
  return val;
}

std::vector<int> LevelComplex::face_corners(int face) const {
  std::vector<int> out;
  for (const auto& d : faces[face].slots) out.push_back(edge_end(d));
  return out;
}

int LevelComplex::child_count(const Rule& rule, int face) const {
  return static_cast<int>(rule.scheme(faces[face].type).faces.size());
}

BudgetExceeded::BudgetExceeded(int level_reached, long long projected, long long budget)
    : std::runtime_error("cell budget exceeded: reached level " + std::to_string(level_reached) +
                         ", next level needs " + std::to_string(projected) + " cells, budget " +
                         std::to_string(budget)),
      level_reached_(level_reached),
      projected_(projected) {}

long long default_cell_budget() {
  if (const char* env = std::getenv("FSRLAB_CELL_BUDGET")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 5'000'000;
}

LevelComplex base_sphere(const Rule& rule) {
  const FsrSpec& spec = rule.spec();
  LevelComplex c;
  c.kind = LevelComplex::Kind::Sphere;
  c.level = 0;
  for (int v = 0; v < rule.vertex_count(); ++v) {
    c.vertices.push_back({v, 0, {Dim::Face, 0}, -1, {Dim::Vertex, v}});
  }
  for (int e = 0; e < rule.edge_count(); ++e) {
    c.edges.push_back({spec.edges[e].tail, spec.edges[e].head, e, {Dim::Face, 0}, -1, {Dim::Edge, e}});
  }
  for (int t = 0; t < rule.tile_count(); ++t) {
    ComplexFace f;
    f.type = t;
    f.parent = 0;
    f.origin = t;
    for (const auto& slot : spec.tiles[t].boundary) f.slots.push_back({slot.edge.edge, slot.edge.reversed});
    c.faces.push_back(std::move(f));
  }
  return c;
}

LevelComplex base_tile(const Rule& rule, int tile_type) {
  const TileType& t = rule.spec().tiles.at(tile_type);
  const int n = t.size();
  LevelComplex c;
  c.kind = LevelComplex::Kind::Tile;
  c.base_tile = tile_type;
  c.level = 0;
  for (int i = 0; i < n; ++i) {
    c.vertices.push_back({t.boundary[i].corner, 0, {Dim::Face, 0}, -1, {Dim::Vertex, i}});
  }
  ComplexFace face;
  face.type = tile_type;
  face.parent = 0;
  face.origin = 0;
  for (int i = 0; i < n; ++i) {
    const SignedEdge se = t.boundary[i].edge;
    int from = (i + n - 1) % n;
    int to = i;
    if (se.reversed) std::swap(from, to);
    c.edges.push_back({from, to, se.edge, {Dim::Face, 0}, -1, {Dim::Edge, i}});
    face.slots.push_back({i, se.reversed});
    c.boundary.push_back({{i, se.reversed}});
  }
  c.faces.push_back(std::move(face));
  return c;
}

Counts projected_counts(const Rule& rule, const LevelComplex& cur) {
  Counts out;
  out.vertices = static_cast<long long>(cur.vertices.size());
  for (const auto& e : cur.edges) {
    int m = rule.spec().edges[e.type].subedge_count();
    out.vertices += m - 1;
    out.edges += m;
  }
  for (const auto& f : cur.faces) {
    const CompiledScheme& cs = rule.scheme(f.type);
    out.vertices += cs.vertex_count - cs.interior_begin;
    out.edges += static_cast<long long>(cs.interior_edges.size());
    out.faces += static_cast<long long>(cs.faces.size());
  }
  return out;
}

LevelComplex refine(const Rule& rule, const LevelComplex& cur, const LevelComplex* image_level) {
  const FsrSpec& spec = rule.spec();
  const bool first = cur.level == 0;
  const ChildTable* img = image_level != nullptr ? &image_level->children : nullptr;

  LevelComplex next;
  next.kind = cur.kind;
  next.base_tile = cur.base_tile;
  next.level = cur.level + 1;
  const Counts projected = projected_counts(rule, cur);
  next.vertices.reserve(projected.vertices);
  next.edges.reserve(projected.edges);
  next.faces.reserve(projected.faces);

  for (size_t v = 0; v < cur.vertices.size(); ++v) {
    const ComplexVertex& old = cur.vertices[v];
    ComplexVertex nv = old;
    nv.type = rule.vertex_map(old.type);
    nv.parent = {Dim::Vertex, static_cast<int>(v)};
    nv.image = first ? rule.vertex_map(old.type) : old.image;
    next.vertices.push_back(nv);
  }

  auto& ch = next.children;
  // Edge children: points first, so boundary chains can refer to them.
  for (size_t i = 0; i < cur.edges.size(); ++i) {
    const ComplexEdge& E = cur.edges[i];
    const EdgeType& et = spec.edges[E.type];
    const int m = et.subedge_count();
    ch.edge_vertex_begin.push_back(static_cast<int>(next.vertices.size()));
    for (int k = 1; k < m; ++k) {
      ComplexVertex nv;
      nv.type = et.points[k - 1];
      nv.birth_level = next.level;
      nv.parent = {Dim::Edge, static_cast<int>(i)};
      nv.image = first ? et.points[k - 1] : img->edge_vertex_begin[E.image] + k - 1;
      nv.origin = E.origin;
      next.vertices.push_back(nv);
    }
  }
  for (size_t i = 0; i < cur.edges.size(); ++i) {
    const ComplexEdge& E = cur.edges[i];
    const EdgeType& et = spec.edges[E.type];
    const int m = et.subedge_count();
    const int pb = ch.edge_vertex_begin[i];
    auto point = [&](int k) { return k == 0 ? E.tail : k == m ? E.head : pb + k - 1; };
    ch.edge_edge_begin.push_back(static_cast<int>(next.edges.size()));
    for (int j = 0; j < m; ++j) {
      const SignedEdge w = et.images[j];
      ComplexEdge ne;
      ne.tail = w.reversed ? point(j + 1) : point(j);
      ne.head = w.reversed ? point(j) : point(j + 1);
      ne.type = w.edge;
      ne.parent = {Dim::Edge, static_cast<int>(i)};
      ne.image = first ? w.edge : img->edge_edge_begin[E.image] + j;
      ne.origin = E.origin;
      next.edges.push_back(ne);
    }
  }

  std::vector<int> local_vertex;
  std::vector<DirectedEdge> local_edge;
  for (size_t i = 0; i < cur.faces.size(); ++i) {
    const ComplexFace& F = cur.faces[i];
    const CompiledScheme& cs = rule.scheme(F.type);
    const int n = cs.corner_count;
    const CellRef face_origin{Dim::Face, F.origin};

    local_vertex.assign(cs.vertex_count, -1);
    for (int c = 0; c < n; ++c) local_vertex[c] = cur.edge_end(F.slots[c]);
    for (int s = 0; s < n; ++s) {
      const DirectedEdge d = F.slots[s];
      const int m = cs.slot_subedges[s];
      for (int k = 1; k < m; ++k) {
        int along = d.reversed ? m - k : k;
        local_vertex[cs.point(s, k)] = ch.edge_vertex_begin[d.edge] + along - 1;
      }
    }
    ch.face_vertex_begin.push_back(static_cast<int>(next.vertices.size()));
    for (int v = cs.interior_begin; v < cs.vertex_count; ++v) {
      ComplexVertex nv;
      nv.type = cs.vertex_image[v];
      nv.birth_level = next.level;
      nv.parent = {Dim::Face, static_cast<int>(i)};
      nv.image = first ? cs.vertex_image[v] : img->face_vertex_begin[F.image] + (v - cs.interior_begin);
      nv.origin = face_origin;
      local_vertex[v] = static_cast<int>(next.vertices.size());
      next.vertices.push_back(nv);
    }

    local_edge.assign(cs.edges.size(), {});
    for (size_t e = 0; e < cs.edges.size(); ++e) {
      const auto& le = cs.edges[e];
      if (!le.boundary) continue;
      const DirectedEdge d = F.slots[le.slot];
      const int m = cs.slot_subedges[le.slot];
      const int child = d.reversed ? m - 1 - le.position : le.position;
      const bool child_forward = !spec.edges[cur.edges[d.edge].type].images[child].reversed;
      const bool child_ccw = child_forward != d.reversed;
      const bool local_ccw = !le.against_slot;
      local_edge[e] = {ch.edge_edge_begin[d.edge] + child, child_ccw != local_ccw};
    }
    ch.face_edge_begin.push_back(static_cast<int>(next.edges.size()));
    for (size_t k = 0; k < cs.interior_edges.size(); ++k) {
      const int e = cs.interior_edges[k];
      const auto& le = cs.edges[e];
      ComplexEdge ne;
      ne.tail = local_vertex[le.image.reversed ? le.head : le.tail];
      ne.head = local_vertex[le.image.reversed ? le.tail : le.head];
      ne.type = le.image.edge;
      ne.parent = {Dim::Face, static_cast<int>(i)};
      ne.image = first ? le.image.edge : img->face_edge_begin[F.image] + static_cast<int>(k);
      ne.origin = face_origin;
      local_edge[e] = {static_cast<int>(next.edges.size()), le.image.reversed};
      next.edges.push_back(ne);
    }

    ch.face_face_begin.push_back(static_cast<int>(next.faces.size()));
    for (size_t q = 0; q < cs.faces.size(); ++q) {
      const auto& sf = cs.faces[q];
      const int k = static_cast<int>(sf.sides.size());
      ComplexFace nf;
      nf.type = sf.image;
      nf.parent = static_cast<int>(i);
      nf.image = first ? sf.image : img->face_face_begin[F.image] + static_cast<int>(q);
      nf.origin = F.origin;
      nf.slots.resize(k);
      for (int slot = 0; slot < k; ++slot) {
        const LocalSide& side = sf.sides[((slot - sf.rotation) % k + k) % k];
        const DirectedEdge le = local_edge[side.edge];
        nf.slots[slot] = {le.edge, le.reversed != side.reversed};
      }
      next.faces.push_back(std::move(nf));
    }
  }

  for (const auto& chain : cur.boundary) {
    std::vector<DirectedEdge> out;
    for (const DirectedEdge& d : chain) {
      const EdgeType& et = spec.edges[cur.edges[d.edge].type];
      const int m = et.subedge_count();
      for (int j = 0; j < m; ++j) {
        const int child = d.reversed ? m - 1 - j : j;
        out.push_back({ch.edge_edge_begin[d.edge] + child, et.images[child].reversed != d.reversed});
      }
    }
    next.boundary.push_back(std::move(out));
  }
  return next;
}

SubdivisionEngine::SubdivisionEngine(RulePtr rule, long long cell_budget)
    : rule_(std::move(rule)), budget_(cell_budget) {}

void SubdivisionEngine::extend(std::vector<std::unique_ptr<LevelComplex>>& levels, int n) {
  while (static_cast<int>(levels.size()) <= n) {
    const LevelComplex& cur = *levels.back();
    const long long need = projected_counts(*rule_, cur).total();
    if (cells_ + need > budget_) throw BudgetExceeded(cur.level, need, budget_);
    const LevelComplex* image_level = nullptr;
    if (cur.level >= 1) image_level = &sphere(cur.level);
    auto next = std::make_unique<LevelComplex>(refine(*rule_, cur, image_level));
    cells_ += next->counts().total();
    levels.push_back(std::move(next));
  }
}

const LevelComplex& SubdivisionEngine::sphere(int n) {
  if (n < 0) throw std::invalid_argument("level must be non-negative");
  if (sphere_levels_.empty()) {
    sphere_levels_.push_back(std::make_unique<LevelComplex>(base_sphere(*rule_)));
    cells_ += sphere_levels_.back()->counts().total();
  }
  extend(sphere_levels_, n);
  return *sphere_levels_[n];
}

const LevelComplex& SubdivisionEngine::tile(int tile_type, int n) {
  if (n < 0) throw std::invalid_argument("level must be non-negative");
  if (tile_type < 0 || tile_type >= rule_->tile_count()) throw std::out_of_range("unknown tile type");
  auto& levels = tile_levels_[tile_type];
  if (levels.empty()) {
    levels.push_back(std::make_unique<LevelComplex>(base_tile(*rule_, tile_type)));
    cells_ += levels.back()->counts().total();
  }
  extend(levels, n);
  return *levels[n];
}

int SubdivisionEngine::iterate_face_image(int n, int face, int k) {
  for (int step = 0; step < k; ++step) {
    face = sphere(n - step).faces.at(face).image;
  }
  return face;
}

Census census(const Rule& rule, const std::vector<const LevelComplex*>& levels) {
  Census out;
  for (const LevelComplex* c : levels) {
    Census::Level l;
    l.level = c->level;
    l.counts = c->counts();
    l.faces_by_type.assign(rule.tile_count(), 0);
    for (const auto& f : c->faces) ++l.faces_by_type[f.type];
    out.levels.push_back(std::move(l));
  }
  return out;
}

int local_degree(SubdivisionEngine& engine, int vertex) {
  const Rule& rule = engine.rule();
  if (vertex < 0 || vertex >= rule.vertex_count()) throw std::out_of_range("not a base vertex");
  const int val1 = engine.sphere(1).valences()[vertex];
  const int image = rule.vertex_map(vertex);
  const int val0 = engine.sphere(0).valences()[image];
  if (val0 == 0 || val1 % val0 != 0) {
    throw std::domain_error("valence " + std::to_string(val1) + " is not a multiple of " + std::to_string(val0));
  }
  return val1 / val0;
}

ReturningTile find_returning_tile(SubdivisionEngine& engine) {
  const Rule& rule = engine.rule();
  const int k = rule.tile_count();
  std::vector<std::vector<int>> succ(k);
  for (int t = 0; t < k; ++t) {
    std::vector<bool> seen(k, false);
    for (const auto& f : rule.scheme(t).faces) {
      if (!seen[f.image]) {
        seen[f.image] = true;
        succ[t].push_back(f.image);
      }
    }
  }
  const std::vector<int> best = shortest_cycle(succ);
  ReturningTile out;
  out.cycle = best;
  out.n = static_cast<int>(best.size());
  // Follow the cycle down: at each level take the first child whose type is
  // the next tile of the cycle.
  int face = best.front();
  for (int step = 1; step <= out.n; ++step) {
    const LevelComplex& cur = engine.sphere(step - 1);
    const LevelComplex& nxt = engine.sphere(step);
    const int want = best[step % out.n];
    const int begin = nxt.children.face_face_begin[face];
    const int count = cur.child_count(rule, face);
    int chosen = -1;
    for (int c = begin; c < begin + count; ++c) {
      if (nxt.faces[c].type == want) {
        chosen = c;
        break;
      }
    }
    face = chosen;
  }
  out.witness = {out.n, Dim::Face, face};
  return out;
}

GrowthConstants growth_constants(SubdivisionEngine& engine) {
  GrowthConstants g;
  g.a = engine.rule().tile_count();
  g.returning = find_returning_tile(engine);
  g.b_zero_possible = g.returning.n == 1;
  return g;
}

}  // namespace fsrlab
