#include "fsrlab/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "fsrlab/report.hpp"

namespace fsrlab {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // Avoid "-0.000" so output is stable under rounding noise.
  if (std::string(buf) == "-0.000") return "0.000";
  return buf;
}

std::string node_name(int level, int v) { return "t" + (level < 0 ? std::string("m1") : std::to_string(level)) + "_" + std::to_string(v); }

const char* kPalette[] = {"#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#e9c46a", "#84a59d", "#f4a261"};

}  // namespace

std::string separation_dot(const Rule& rule, const SeparationGraph& g, const std::vector<int>& cycle) {
  const FsrSpec& spec = rule.spec();
  std::set<std::pair<int, int>> hot;
  for (size_t i = 0; i < cycle.size(); ++i) hot.insert({cycle[i], cycle[(i + 1) % cycle.size()]});
  std::ostringstream out;
  out << "digraph G_" << to_string(g.kind) << " {\n";
  for (size_t i = 0; i < g.nodes.size(); ++i) out << "  n" << i << " [label=" << quote(g.label(spec, static_cast<int>(i))) << "];\n";
  for (const auto& a : g.arcs) {
    const SubdivisionScheme* scheme = spec.scheme_for(g.nodes[a.from].tile);
    out << "  n" << a.from << " -> n" << a.to << " [label=" << quote(scheme->faces[a.face].id);
    if (hot.count({a.from, a.to})) out << ", color=red, penwidth=2";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string subdivision_graph_dot(const Rule& rule, const SubdivisionGraph& g) {
  std::ostringstream out;
  out << "graph Gamma_" << to_string(g.flavor) << " {\n  label=" << quote(rule.spec().name) << ";\n  rankdir=TB;\n";
  for (int n = -1; n <= g.max_level; ++n) {
    out << "  { rank=same;";
    for (int v = 0; v < g.size(n); ++v) out << ' ' << node_name(n, v);
    out << " }\n";
  }
  out << "  " << node_name(-1, 0) << " [label=\"S2\"];\n";
  for (int n = 0; n <= g.max_level; ++n) {
    for (int v = 0; v < g.size(n); ++v) out << "  " << node_name(n, v) << " [label=\"" << n << ":" << v << "\"];\n";
  }
  for (int n = 0; n <= g.max_level; ++n) {
    const auto& lv = g.at(n);
    for (int v = 0; v < lv.size; ++v) {
      out << "  " << node_name(n - 1, n == 0 ? 0 : lv.parent[v]) << " -- " << node_name(n, v) << " [style=dashed];\n";
    }
    for (int v = 0; v < lv.size; ++v) {
      for (int w : lv.neighbors(v)) {
        if (v < w) out << "  " << node_name(n, v) << " -- " << node_name(n, w) << ";\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

std::string port_walk_dot(const Rule& rule, const PortWalkGraph& g) {
  const FsrSpec& spec = rule.spec();
  std::set<std::pair<int, int>> hot;
  if (g.shortest_non_winding) {
    const auto& p = g.shortest_non_winding->ports;
    for (size_t i = 0; i < p.size(); ++i) hot.insert({p[i], p[(i + 1) % p.size()]});
  }
  std::ostringstream out;
  out << "digraph ports_" << g.level << " {\n";
  for (size_t i = 0; i < g.ports.size(); ++i) {
    out << "  p" << i << " [label=\"" << g.ports[i].face << ":" << g.ports[i].slot << "\"];\n";
  }
  for (const auto& a : g.arcs) {
    out << "  p" << a.from << " -> p" << a.to << " [label=" << quote(spec.edges[a.crossed].id);
    if (hot.count({a.from, a.to})) out << ", color=red, penwidth=2";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string complex_dot(const Rule& rule, const LevelComplex& c) {
  const FsrSpec& spec = rule.spec();
  std::ostringstream out;
  out << "digraph level_" << c.level << " {\n";
  for (size_t v = 0; v < c.vertices.size(); ++v) {
    out << "  v" << v << " [label=" << quote(std::to_string(v) + ":" + spec.vertices[c.vertices[v].type].id) << "];\n";
  }
  for (const auto& e : c.edges) out << "  v" << e.tail << " -> v" << e.head << " [label=" << quote(spec.edges[e.type].id) << "];\n";
  out << "}\n";
  return out.str();
}

LayoutResult disk_layout(const LevelComplex& c, Layout layout, double tolerance, int max_sweeps) {
  if (c.kind != LevelComplex::Kind::Tile) throw UnsupportedRender("disk layout needs a tile complex (pass a tile)");
  const int V = static_cast<int>(c.vertices.size());
  const int n = static_cast<int>(c.boundary.size());
  LayoutResult r;
  r.positions.assign(V, Point{});
  std::vector<char> pinned(V, 0);

  // Boundary vertices counterclockwise, grouped by slot; slot s ends at corner s.
  std::vector<std::vector<int>> runs(n);
  for (int s = 0; s < n; ++s) {
    for (const auto& d : c.boundary[s]) runs[s].push_back(c.edge_end(d));
  }
  int total = 0;
  for (const auto& run : runs) total += static_cast<int>(run.size());
  const double tau = 2 * std::numbers::pi;
  auto on_circle = [&](double t) { return Point{std::cos(tau * t + tau / 4), std::sin(tau * t + tau / 4)}; };
  int k = 0;
  for (int s = 0; s < n; ++s) {
    const int m = static_cast<int>(runs[s].size());
    for (int j = 0; j < m; ++j, ++k) {
      const int v = runs[s][j];
      pinned[v] = 1;
      if (layout == Layout::Radial) {
        r.positions[v] = on_circle(static_cast<double>(k + 1) / total);
      } else {
        const Point a = on_circle(static_cast<double>(s) / n);
        const Point b = on_circle(static_cast<double>(s + 1) / n);
        const double t = static_cast<double>(j + 1) / m;
        r.positions[v] = {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
      }
    }
  }

  std::vector<std::vector<int>> nb(V);
  for (const auto& e : c.edges) {
    nb[e.tail].push_back(e.head);
    nb[e.head].push_back(e.tail);
  }
  for (auto& list : nb) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  for (r.sweeps = 0; r.sweeps < max_sweeps; ++r.sweeps) {
    double moved = 0;
    for (int v = 0; v < V; ++v) {
      if (pinned[v] || nb[v].empty()) continue;
      Point avg;
      for (int w : nb[v]) {
        avg.x += r.positions[w].x;
        avg.y += r.positions[w].y;
      }
      avg.x /= static_cast<double>(nb[v].size());
      avg.y /= static_cast<double>(nb[v].size());
      moved = std::max(moved, std::hypot(avg.x - r.positions[v].x, avg.y - r.positions[v].y));
      r.positions[v] = avg;
    }
    r.residual = moved;
    if (moved < tolerance) {
      ++r.sweeps;
      break;
    }
  }
  return r;
}

std::string complex_svg(const Rule& rule, const LevelComplex& c, Layout layout) {
  const FsrSpec& spec = rule.spec();
  const LayoutResult lay = disk_layout(c, layout);
  constexpr double kSize = 800, kMargin = 40;
  auto px = [&](const Point& p) { return kMargin + (p.x + 1) / 2 * (kSize - 2 * kMargin); };
  auto py = [&](const Point& p) { return kMargin + (1 - p.y) / 2 * (kSize - 2 * kMargin); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize << "\" viewBox=\"0 0 "
      << kSize << ' ' << kSize << "\">\n";
  out << "  <title>" << spec.name << ' ' << spec.tiles[c.base_tile].id << " level " << c.level << "</title>\n";
  out << "  <g class=\"faces\" stroke=\"none\">\n";
  for (size_t f = 0; f < c.faces.size(); ++f) {
    out << "    <polygon data-face=\"" << f << "\" data-type=\"" << spec.tiles[c.faces[f].type].id << "\" fill=\""
        << kPalette[c.faces[f].type % std::size(kPalette)] << "\" points=\"";
    bool first = true;
    for (int v : c.face_corners(static_cast<int>(f))) {
      out << (first ? "" : " ") << fixed(px(lay.positions[v])) << ',' << fixed(py(lay.positions[v]));
      first = false;
    }
    out << "\"/>\n";
  }
  out << "  </g>\n  <g class=\"edges\" stroke=\"#222\" stroke-width=\"1\">\n";
  for (const auto& e : c.edges) {
    const Point& a = lay.positions[e.tail];
    const Point& b = lay.positions[e.head];
    out << "    <line x1=\"" << fixed(px(a)) << "\" y1=\"" << fixed(py(a)) << "\" x2=\"" << fixed(px(b)) << "\" y2=\""
        << fixed(py(b)) << "\"/>\n";
  }
  out << "  </g>\n</svg>\n";
  return out.str();
}

std::string emit_render(const Rule& rule, const LevelComplex& c, const RenderOptions& options) {
  switch (options.format) {
    case RenderFormat::Dot:
      return complex_dot(rule, c);
    case RenderFormat::Json:
      return complex_report(rule, c).dump(2) + "\n";
    case RenderFormat::Svg:
      if (c.kind != LevelComplex::Kind::Tile) {
        throw UnsupportedRender("svg renders disk complexes only; choose a tile with --tile");
      }
      return complex_svg(rule, c, options.layout);
  }
  throw UnsupportedRender("unknown render format");
}

}  // namespace fsrlab
