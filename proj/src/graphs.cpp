#include "fsrlab/graphs.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace fsrlab {

namespace {

void to_csr(std::vector<std::vector<int>>& adj, SubdivisionGraph::Level& level) {
  level.offsets.assign(adj.size() + 1, 0);
  for (size_t v = 0; v < adj.size(); ++v) {
    auto& list = adj[v];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    level.offsets[v + 1] = level.offsets[v] + static_cast<int>(list.size());
  }
  level.targets.reserve(level.offsets.back());
  for (const auto& list : adj) level.targets.insert(level.targets.end(), list.begin(), list.end());
}

void link_all(const std::vector<int>& faces, std::vector<std::vector<int>>& adj) {
  for (size_t i = 0; i < faces.size(); ++i) {
    for (size_t j = 0; j < faces.size(); ++j) {
      if (faces[i] != faces[j]) adj[faces[i]].push_back(faces[j]);
    }
  }
}

}  // namespace

const char* to_string(Flavor flavor) { return flavor == Flavor::Fat ? "fat" : "skinny"; }

SubdivisionGraph build_subdivision_graph(SubdivisionEngine& engine, int max_level, Flavor flavor) {
  if (max_level < 0) throw std::invalid_argument("level must be non-negative");
  SubdivisionGraph g;
  g.flavor = flavor;
  g.max_level = max_level;

  SubdivisionGraph::Level top;
  top.level = -1;
  top.size = 1;
  top.offsets = {0, 0};
  top.child_offsets = {0, static_cast<int>(engine.sphere(0).faces.size())};
  g.levels.push_back(std::move(top));

  for (int n = 0; n <= max_level; ++n) {
    const LevelComplex& c = engine.sphere(n);
    SubdivisionGraph::Level lv;
    lv.level = n;
    lv.size = static_cast<int>(c.faces.size());
    lv.parent.reserve(lv.size);
    for (const auto& f : c.faces) lv.parent.push_back(f.parent);

    std::vector<std::vector<int>> adj(lv.size);
    if (flavor == Flavor::Fat) {
      std::vector<std::vector<int>> sides(c.edges.size());
      for (int f = 0; f < lv.size; ++f) {
        for (const auto& d : c.faces[f].slots) sides[d.edge].push_back(f);
      }
      for (const auto& s : sides) link_all(s, adj);
    } else {
      std::vector<std::vector<int>> around(c.vertices.size());
      for (int f = 0; f < lv.size; ++f) {
        for (const auto& d : c.faces[f].slots) around[c.edge_end(d)].push_back(f);
      }
      for (auto& s : around) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        link_all(s, adj);
      }
    }
    to_csr(adj, lv);

    if (n < max_level) {
      const LevelComplex& next = engine.sphere(n + 1);
      lv.child_offsets = next.children.face_face_begin;
      lv.child_offsets.push_back(static_cast<int>(next.faces.size()));
    }
    g.levels.push_back(std::move(lv));
  }
  return g;
}

std::vector<int> bfs_distances(const SubdivisionGraph& graph, int m, int source) {
  const auto& lv = graph.at(m);
  std::vector<int> dist(lv.size, -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int w : lv.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::optional<int> level_distance(const SubdivisionGraph& graph, int m, int u, int v) {
  if (u == v) return 0;
  int d = bfs_distances(graph, m, u)[v];
  if (d < 0) return std::nullopt;
  return d;
}

int project_vertex(const SubdivisionGraph& graph, int m, int n, int u) {
  if (n < m) throw std::invalid_argument("projection goes from a finer level to a coarser one");
  for (int level = n; level > m; --level) u = level == 0 ? 0 : graph.at(level).parent[u];
  return u;
}

std::vector<int> lifts(const SubdivisionGraph& graph, int m, int n, int u) {
  // Children of consecutive tiles are consecutive, so descendants form a range.
  int lo = u, hi = u + 1;
  for (int level = m; level < m + n; ++level) {
    const auto& off = graph.at(level).child_offsets;
    if (off.empty()) throw std::out_of_range("lift beyond the deepest computed level");
    lo = off[lo];
    hi = off[hi];
  }
  std::vector<int> out(hi - lo);
  for (int i = 0; i < hi - lo; ++i) out[i] = lo + i;
  return out;
}

const char* to_string(ProbeKind kind) { return kind == ProbeKind::Rushton ? "rushton" : "contraction"; }

const char* to_string(ProbeStatus status) {
  switch (status) {
    case ProbeStatus::PassAtDepth:
      return "PASS_AT_DEPTH";
    case ProbeStatus::Violation:
      return "VIOLATION";
    case ProbeStatus::Certified:
      return "CERTIFIED";
    case ProbeStatus::Witness:
      return "WITNESS";
    case ProbeStatus::Unknown:
      return "UNKNOWN";
  }
  return "?";
}

ProbeReport rushton_probe(SubdivisionEngine& engine, int M, int n, int depth) {
  if (M < 1 || n < 1 || depth < n) throw std::invalid_argument("rushton probe needs M >= 1, n >= 1 and L >= n");
  constexpr size_t kKeep = 16;
  ProbeReport r;
  r.probe = ProbeKind::Rushton;
  r.M = M;
  r.n = n;
  r.depth = depth;
  const SubdivisionGraph g = build_subdivision_graph(engine, depth, Flavor::Fat);
  for (int m = 0; m + n <= depth; ++m) {
    for (int u = 0; u < g.size(m); ++u) {
      const std::vector<int> dm = bfs_distances(g, m, u);
      std::vector<int> far;
      for (int v = 0; v < g.size(m); ++v) {
        if (dm[v] >= M) far.push_back(v);
      }
      if (far.empty()) continue;
      std::vector<std::vector<int>> far_lifts;
      for (int v : far) far_lifts.push_back(lifts(g, m, n, v));
      for (int ul : lifts(g, m, n, u)) {
        const std::vector<int> dl = bfs_distances(g, m + n, ul);
        for (size_t i = 0; i < far.size(); ++i) {
          for (int vl : far_lifts[i]) {
            ++r.pairs_checked;
            // Unreachable lifts are infinitely far, which passes.
            if (dl[vl] >= 0 && dl[vl] <= dm[far[i]]) {
              ++r.violations_found;
              if (r.violations.size() < kKeep) r.violations.push_back({m, n, u, far[i], ul, vl, dm[far[i]], dl[vl]});
            }
          }
        }
      }
    }
  }
  if (r.violations_found > 0) {
    r.status = ProbeStatus::Violation;
    const auto& v = r.violations.front();
    r.summary = std::to_string(r.violations_found) + " lifted pairs fail to move apart; first at level " +
                std::to_string(v.m) + ": distance " + std::to_string(v.delta_m) + " becomes " +
                std::to_string(v.delta_lift);
  } else {
    r.status = ProbeStatus::PassAtDepth;
    r.summary = "no violation among " + std::to_string(r.pairs_checked) + " lifted pairs up to level " +
                std::to_string(depth);
  }
  return r;
}

bool replay_rushton(SubdivisionEngine& engine, const RushtonViolation& v) {
  const SubdivisionGraph g = build_subdivision_graph(engine, v.m + v.n, Flavor::Fat);
  if (project_vertex(g, v.m, v.m + v.n, v.u_lift) != v.u || project_vertex(g, v.m, v.m + v.n, v.v_lift) != v.v) {
    return false;
  }
  auto dm = level_distance(g, v.m, v.u, v.v);
  auto dl = level_distance(g, v.m + v.n, v.u_lift, v.v_lift);
  return dm && dl && *dm == v.delta_m && *dl == v.delta_lift && *dl <= *dm;
}

int PortWalkGraph::find(Port p) const {
  auto it = std::lower_bound(ports.begin(), ports.end(), p);
  if (it == ports.end() || !(*it == p)) return -1;
  return static_cast<int>(it - ports.begin());
}

bool classify_winding(const FsrSpec& spec, PortCycle& cycle) {
  std::vector<int> common;
  for (size_t i = 0; i < cycle.crossed.size(); ++i) {
    const EdgeType& e = spec.edges[cycle.crossed[i]];
    std::vector<int> ends{std::min(e.tail, e.head), std::max(e.tail, e.head)};
    if (i == 0) {
      common = ends;
      continue;
    }
    std::vector<int> keep;
    std::set_intersection(common.begin(), common.end(), ends.begin(), ends.end(), std::back_inserter(keep));
    common = std::move(keep);
  }
  cycle.winding = !common.empty();
  cycle.center = cycle.winding ? common.front() : -1;
  return cycle.winding;
}

namespace {

// The side of an edge other than (face, slot).
Port other_side(const std::vector<std::vector<Port>>& sides, int edge, Port here) {
  for (const Port& p : sides[edge]) {
    if (!(p == here)) return p;
  }
  return here;
}

class CycleSearch {
 public:
  // out[u] lists the arc indices leaving port u.
  CycleSearch(const FsrSpec& spec, PortWalkGraph& g, const PortCycleOptions& opt, std::vector<std::vector<int>> out)
      : spec_(spec), g_(g), opt_(opt), out_(std::move(out)), on_path_(g.ports.size(), 0) {}

  void run() {
    const int P = static_cast<int>(g_.ports.size());
    for (int len = 1; len <= g_.length_cap && !done_; ++len) {
      for (int s = 0; s < P && !done_; ++s) {
        start_ = s;
        target_len_ = len;
        path_.assign(1, s);
        arcs_.clear();
        on_path_[s] = 1;
        extend(s);
        on_path_[s] = 0;
      }
    }
  }

 private:
  const FsrSpec& spec_;
  PortWalkGraph& g_;
  const PortCycleOptions& opt_;
  std::vector<std::vector<int>> out_;
  std::vector<char> on_path_;
  std::vector<int> path_;
  std::vector<int> arcs_;
  int start_ = 0;
  int target_len_ = 0;
  long long steps_ = 0;
  bool done_ = false;

  void extend(int u) {
    if (done_) return;
    if (++steps_ > opt_.step_budget) {
      g_.complete = false;
      done_ = true;
      return;
    }
    const int depth = static_cast<int>(arcs_.size());
    for (int a : out_[u]) {
      const int w = g_.arcs[a].to;
      if (depth + 1 == target_len_) {
        if (w == start_) record(a);
        if (done_) return;
        continue;
      }
      if (w <= start_ || on_path_[w]) continue;
      on_path_[w] = 1;
      path_.push_back(w);
      arcs_.push_back(a);
      extend(w);
      arcs_.pop_back();
      path_.pop_back();
      on_path_[w] = 0;
      if (done_) return;
    }
  }

  void record(int closing_arc) {
    PortCycle c;
    c.ports = path_;
    for (int i : path_) c.sides.push_back(g_.ports[i]);
    for (int a : arcs_) c.crossed.push_back(g_.arcs[a].crossed);
    c.crossed.push_back(g_.arcs[closing_arc].crossed);
    classify_winding(spec_, c);
    ++g_.cycles_found;
    if (!c.winding && !g_.shortest_non_winding) {
      g_.shortest_non_winding = c;
      if (opt_.stop_at_non_winding) done_ = true;
    }
    if (static_cast<int>(g_.cycles.size()) < opt_.max_stored) g_.cycles.push_back(std::move(c));
  }
};

}  // namespace

PortWalkGraph port_walk_graph(SubdivisionEngine& engine, int n, const PortCycleOptions& options) {
  const Rule& rule = engine.rule();
  const LevelComplex& c = engine.sphere(n);
  PortWalkGraph g;
  g.level = n;

  std::vector<std::vector<Port>> sides(c.edges.size());
  for (int f = 0; f < static_cast<int>(c.faces.size()); ++f) {
    const auto& slots = c.faces[f].slots;
    for (int s = 0; s < static_cast<int>(slots.size()); ++s) {
      sides[slots[s].edge].push_back({f, s});
      if (c.edges[slots[s].edge].origin.dim == Dim::Edge) g.ports.push_back({f, s});
    }
  }
  g.successors.assign(g.ports.size(), {});
  std::vector<std::vector<int>> out(g.ports.size());
  for (int i = 0; i < static_cast<int>(g.ports.size()); ++i) {
    const Port in = g.ports[i];
    const auto& slots = c.faces[in.face].slots;
    for (int s = 0; s < static_cast<int>(slots.size()); ++s) {
      if (s == in.slot) continue;
      const ComplexEdge& e = c.edges[slots[s].edge];
      if (e.origin.dim != Dim::Edge) continue;
      const int to = g.find(other_side(sides, slots[s].edge, {in.face, s}));
      out[i].push_back(static_cast<int>(g.arcs.size()));
      g.arcs.push_back({i, to, s, e.origin.index});
      g.successors[i].push_back(to);
    }
  }
  g.length_cap = options.length_cap > 0 ? options.length_cap : 2 * static_cast<int>(c.faces.size());
  CycleSearch(rule.spec(), g, options, std::move(out)).run();
  return g;
}

bool port_arc_is_sound(const LevelComplex& complex, const PortWalkGraph& graph, const PortArc& arc) {
  const Port from = graph.ports.at(arc.from);
  const Port to = graph.ports.at(arc.to);
  const auto& slots = complex.faces.at(from.face).slots;
  if (arc.exit == from.slot || arc.exit < 0 || arc.exit >= static_cast<int>(slots.size())) return false;
  const int edge = slots[arc.exit].edge;
  if (complex.edges[edge].origin != CellRef{Dim::Edge, arc.crossed}) return false;
  const DirectedEdge back = complex.faces.at(to.face).slots.at(to.slot);
  // The entry side is the same edge traversed the other way.
  return back.edge == edge && back.reversed != slots[arc.exit].reversed;
}

ProbeReport contraction_report(SubdivisionEngine& engine, int n_max, const PortCycleOptions& options) {
  const Rule& rule = engine.rule();
  ProbeReport r;
  r.probe = ProbeKind::Contraction;
  r.n_max = n_max;
  r.certificates.push_back(check_separation(rule, SeparationKind::EE));
  r.certificates.push_back(check_separation(rule, SeparationKind::VV));
  if (r.certificates[0].holds && r.certificates[1].holds) {
    r.status = ProbeStatus::Certified;
    r.summary = "edge and vertex separating: G_EE and G_VV are acyclic";
    return r;
  }
  PortCycleOptions opt = options;
  opt.stop_at_non_winding = true;
  for (int n = 1; n <= n_max; ++n) {
    PortWalkGraph g = port_walk_graph(engine, n, opt);
    if (!g.shortest_non_winding) {
      r.status = ProbeStatus::Unknown;
      r.summary = g.complete ? "no non-winding port cycle at level " + std::to_string(n)
                             : "port cycle search ran out of steps at level " + std::to_string(n);
      return r;
    }
    r.cycles.emplace_back(n, *g.shortest_non_winding);
  }
  r.status = ProbeStatus::Witness;
  r.summary = "non-winding port cycles at every level up to " + std::to_string(n_max) +
              " (candidate obstruction; geodesy in the cover is not checked)";
  return r;
}

std::vector<CellRef> level0_cells_met(const Rule& rule, const LevelComplex& complex, int face) {
  const FsrSpec& spec = rule.spec();
  std::vector<CellRef> out;
  for (const auto& d : complex.faces[face].slots) {
    const CellRef& eo = complex.edges[d.edge].origin;
    if (eo.dim == Dim::Edge) out.push_back(eo);
    const CellRef& vo = complex.vertices[complex.edge_end(d)].origin;
    if (vo.dim == Dim::Edge) out.push_back(vo);
    if (vo.dim == Dim::Vertex) {
      out.push_back(vo);
      for (int e = 0; e < rule.edge_count(); ++e) {
        if (spec.edges[e].tail == vo.index || spec.edges[e].head == vo.index) out.push_back({Dim::Edge, e});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BoundaryPairReport boundary_pair_report(SubdivisionEngine& engine, int level) {
  const Rule& rule = engine.rule();
  const FsrSpec& spec = rule.spec();
  const LevelComplex& c = engine.sphere(level);
  auto ends = [&](const CellRef& x) {
    if (x.dim == Dim::Vertex) return std::vector<int>{x.index};
    return std::vector<int>{spec.edges[x.index].tail, spec.edges[x.index].head};
  };
  auto disjoint = [&](const CellRef& x, const CellRef& y) {
    if (x == y) return false;
    for (int a : ends(x)) {
      for (int b : ends(y)) {
        if (a == b) return false;
      }
    }
    return true;
  };
  std::map<std::pair<CellRef, CellRef>, int> found;
  for (int f = 0; f < static_cast<int>(c.faces.size()); ++f) {
    const std::vector<CellRef> met = level0_cells_met(rule, c, f);
    for (size_t i = 0; i < met.size(); ++i) {
      for (size_t j = i + 1; j < met.size(); ++j) {
        if (disjoint(met[i], met[j])) found.emplace(std::make_pair(met[i], met[j]), f);
      }
    }
  }
  BoundaryPairReport r;
  r.level = level;
  for (const auto& [pair, f] : found) r.pairs.push_back({pair.first, pair.second, f});
  r.ideal_vertices = check_bounded_valence(rule).ideal;
  return r;
}

}  // namespace fsrlab
