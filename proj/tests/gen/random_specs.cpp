#include "random_specs.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>

namespace testgen {

namespace {

struct SignedEdge {
  int edge = -1;
  bool reversed = false;

  bool operator==(const SignedEdge&) const = default;
};

SignedEdge flip(SignedEdge s) { return {s.edge, !s.reversed}; }

// The sphere: vertex, edge and tile types plus how edges are subdivided.
struct Base {
  std::string name;
  std::vector<std::string> vertices;
  struct Edge {
    std::string id;
    int tail;
    int head;
  };
  std::vector<Edge> edges;
  struct Tile {
    std::string id;
    std::vector<SignedEdge> slots;
  };
  std::vector<Tile> tiles;
  std::vector<std::string> sphere_sides;  // one line per edge type
  std::vector<int> pieces;                // subedges per edge type

  int end(SignedEdge s) const { return s.reversed ? edges[s.edge].tail : edges[s.edge].head; }
};

// A subdivided polygon shared by every tile of a base.
struct Template {
  struct Vertex {
    enum Kind { Corner, Boundary, Interior } kind;
    int slot = -1;  // corner index for corners
    int k = 0;      // ccw position along the slot for boundary points
  };
  struct Edge {
    int tail;
    int head;
    int slot = -1;  // boundary edges: slot, ccw position, direction
    int pos = -1;
    bool along = true;
  };
  struct Side {
    int edge;
    bool forward;
  };
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<std::vector<Side>> faces;
};

Base pillow(int w, int h) {
  Base b;
  b.name = "grid" + std::to_string(w) + "x" + std::to_string(h);
  b.vertices = {"A", "B", "C", "D"};
  b.edges = {{"a", 2, 3}, {"b", 1, 2}, {"c", 0, 1}, {"d", 3, 0}};
  b.tiles = {{"P", {{2, false}, {1, false}, {0, false}, {3, false}}},
             {"Q", {{2, true}, {3, true}, {0, true}, {1, true}}}};
  b.sphere_sides = {"side a = (P, slot 2) , (Q, slot 2)", "side b = (P, slot 1) , (Q, slot 3)",
                    "side c = (P, slot 0) , (Q, slot 0)", "side d = (P, slot 3) , (Q, slot 1)"};
  b.pieces = {w, h, w, h};
  return b;
}

Base triangle_pillow(const std::string& name) {
  Base b;
  b.name = name;
  b.vertices = {"X", "Y", "Z"};
  b.edges = {{"p", 0, 1}, {"q", 1, 2}, {"r", 2, 0}};
  b.tiles = {{"T1", {{0, false}, {1, false}, {2, false}}}, {"T2", {{2, true}, {1, true}, {0, true}}}};
  b.sphere_sides = {"side p = (T1, slot 0) , (T2, slot 2)", "side q = (T1, slot 1) , (T2, slot 1)",
                    "side r = (T1, slot 2) , (T2, slot 0)"};
  b.pieces = {2, 2, 2};
  return b;
}

// Slots: 0 bottom (left to right), 1 right (upwards), 2 top (right to left),
// 3 left (downwards). Corner i ends slot i.
Template grid(int w, int h) {
  Template t;
  auto id = [&](int x, int y) { return y * (w + 1) + x; };
  for (int y = 0; y <= h; ++y) {
    for (int x = 0; x <= w; ++x) {
      Template::Vertex v{Template::Vertex::Interior};
      if (x == w && y == 0) v = {Template::Vertex::Corner, 0};
      else if (x == w && y == h) v = {Template::Vertex::Corner, 1};
      else if (x == 0 && y == h) v = {Template::Vertex::Corner, 2};
      else if (x == 0 && y == 0) v = {Template::Vertex::Corner, 3};
      else if (y == 0) v = {Template::Vertex::Boundary, 0, x};
      else if (x == w) v = {Template::Vertex::Boundary, 1, y};
      else if (y == h) v = {Template::Vertex::Boundary, 2, w - x};
      else if (x == 0) v = {Template::Vertex::Boundary, 3, h - y};
      t.vertices.push_back(v);
    }
  }
  std::vector<int> horizontal((w + 1) * (h + 1), -1), vertical((w + 1) * (h + 1), -1);
  for (int y = 0; y <= h; ++y) {
    for (int x = 0; x < w; ++x) {
      Template::Edge e{id(x, y), id(x + 1, y)};
      if (y == 0) e.slot = 0, e.pos = x, e.along = true;
      if (y == h) e.slot = 2, e.pos = w - 1 - x, e.along = false;
      horizontal[id(x, y)] = static_cast<int>(t.edges.size());
      t.edges.push_back(e);
    }
  }
  for (int x = 0; x <= w; ++x) {
    for (int y = 0; y < h; ++y) {
      Template::Edge e{id(x, y), id(x, y + 1)};
      if (x == w) e.slot = 1, e.pos = y, e.along = true;
      if (x == 0) e.slot = 3, e.pos = h - 1 - y, e.along = false;
      vertical[id(x, y)] = static_cast<int>(t.edges.size());
      t.edges.push_back(e);
    }
  }
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      t.faces.push_back({{horizontal[id(i, j)], true},
                         {vertical[id(i + 1, j)], true},
                         {horizontal[id(i, j + 1)], false},
                         {vertical[id(i, j)], false}});
    }
  }
  return t;
}

// Corners 0..2, midpoint of slot s is vertex 3 + s. Slot s runs from corner
// s-1 to corner s.
Template bisected_triangle() {
  Template t;
  for (int c = 0; c < 3; ++c) t.vertices.push_back({Template::Vertex::Corner, c});
  for (int s = 0; s < 3; ++s) t.vertices.push_back({Template::Vertex::Boundary, s, 1});
  for (int s = 0; s < 3; ++s) {
    t.edges.push_back({(s + 2) % 3, 3 + s, s, 0, true});
    t.edges.push_back({3 + s, s, s, 1, true});
  }
  return t;
}

int first_half(int s) { return 2 * s; }
int second_half(int s) { return 2 * s + 1; }

Template medial() {
  Template t = bisected_triangle();
  for (int s = 0; s < 3; ++s) t.edges.push_back({3 + s, 3 + (s + 1) % 3});
  for (int s = 0; s < 3; ++s) {
    t.faces.push_back({{second_half(s), true}, {first_half((s + 1) % 3), true}, {6 + s, false}});
  }
  t.faces.push_back({{6, true}, {7, true}, {8, true}});
  return t;
}

Template barycentric() {
  Template t = bisected_triangle();
  const int center = static_cast<int>(t.vertices.size());
  t.vertices.push_back({Template::Vertex::Interior});
  const int spokes = static_cast<int>(t.edges.size());
  for (int v = 0; v < 6; ++v) t.edges.push_back({center, v});
  for (int e = 0; e < 6; ++e) {
    const auto& half = t.edges[e];
    t.faces.push_back({{e, true}, {spokes + half.head, false}, {spokes + half.tail, true}});
  }
  return t;
}

// Partial subdivision map; every setter fails on a conflicting value.
struct State {
  std::vector<std::vector<std::optional<SignedEdge>>> edge_image;  // [tile][local edge]
  std::vector<std::vector<int>> vertex_image;                       // [tile][local vertex]
  std::vector<std::vector<std::optional<SignedEdge>>> word;          // [edge][subedge]
  std::vector<std::vector<int>> point;                              // [edge][0..m]; ends are f(tail), f(head)
  std::vector<int> vertex_map;
  std::vector<std::pair<int, int>> choice;  // per face: image tile, rotation
};

class Search {
 public:
  Search(const Base& base, const Template& tmpl, std::mt19937_64& rng) : base_(base), tmpl_(tmpl), rng_(rng) {
    for (size_t t = 0; t < base.tiles.size(); ++t) {
      for (size_t f = 0; f < tmpl.faces.size(); ++f) order_.emplace_back(static_cast<int>(t), static_cast<int>(f));
    }
  }

  std::optional<State> run() {
    State s;
    const size_t tiles = base_.tiles.size();
    s.edge_image.assign(tiles, std::vector<std::optional<SignedEdge>>(tmpl_.edges.size()));
    s.vertex_image.assign(tiles, std::vector<int>(tmpl_.vertices.size(), -1));
    for (size_t e = 0; e < base_.edges.size(); ++e) {
      s.word.emplace_back(base_.pieces[e]);
      s.point.emplace_back(base_.pieces[e] + 1, -1);
    }
    s.vertex_map.assign(base_.vertices.size(), -1);
    s.choice.assign(order_.size(), {-1, -1});
    if (!dfs(s, 0)) return std::nullopt;
    return result_;
  }

 private:
  static constexpr long kNodeBudget = 200'000;

  const Base& base_;
  const Template& tmpl_;
  std::mt19937_64& rng_;
  std::vector<std::pair<int, int>> order_;
  long nodes_ = 0;
  std::optional<State> result_;

  static bool set(int& slot, int value) {
    if (slot == -1) slot = value;
    return slot == value;
  }
  static bool set(std::optional<SignedEdge>& slot, SignedEdge value) {
    if (!slot) slot = value;
    return *slot == value;
  }

  // Point k (0..m) of an edge type, counted from its tail.
  bool set_point(State& s, int edge, int k, int image) {
    const int m = base_.pieces[edge];
    if (!set(s.point[edge][k], image)) return false;
    if (k == 0) return set(s.vertex_map[base_.edges[edge].tail], image);
    if (k == m) return set(s.vertex_map[base_.edges[edge].head], image);
    return true;
  }

  bool set_vertex(State& s, int tile, int v, int image) {
    if (!set(s.vertex_image[tile][v], image)) return false;
    const auto& lv = tmpl_.vertices[v];
    if (lv.kind == Template::Vertex::Interior) return true;
    const int slot = lv.slot;
    const SignedEdge e = base_.tiles[tile].slots[slot];
    const int m = base_.pieces[e.edge];
    const int k = lv.kind == Template::Vertex::Corner ? m : lv.k;
    return set_point(s, e.edge, e.reversed ? m - k : k, image);
  }

  bool set_edge(State& s, int tile, int le, SignedEdge image) {
    if (!set(s.edge_image[tile][le], image)) return false;
    const auto& l = tmpl_.edges[le];
    if (l.slot < 0) return true;
    const SignedEdge ccw = l.along ? image : flip(image);
    const SignedEdge e = base_.tiles[tile].slots[l.slot];
    const int m = base_.pieces[e.edge];
    if (!e.reversed) return set(s.word[e.edge][l.pos], ccw);
    return set(s.word[e.edge][m - 1 - l.pos], flip(ccw));
  }

  bool place(State& s, int tile, int face, int image, int rotation) {
    const auto& sides = tmpl_.faces[face];
    const auto& target = base_.tiles[image].slots;
    const int k = static_cast<int>(sides.size());
    for (int j = 0; j < k; ++j) {
      const SignedEdge slot = target[(j + rotation) % k];
      const auto& side = sides[j];
      if (!set_edge(s, tile, side.edge, side.forward ? slot : flip(slot))) return false;
      const auto& le = tmpl_.edges[side.edge];
      const int end = side.forward ? le.head : le.tail;
      if (!set_vertex(s, tile, end, base_.end(slot))) return false;
    }
    return true;
  }

  bool dfs(const State& s, size_t at) {
    if (at == order_.size()) {
      result_ = s;
      return true;
    }
    if (++nodes_ > kNodeBudget) return false;
    const auto [tile, face] = order_[at];
    const int k = static_cast<int>(tmpl_.faces[face].size());
    std::vector<std::pair<int, int>> options;
    for (size_t t = 0; t < base_.tiles.size(); ++t) {
      if (static_cast<int>(base_.tiles[t].slots.size()) != k) continue;
      for (int r = 0; r < k; ++r) options.emplace_back(static_cast<int>(t), r);
    }
    std::shuffle(options.begin(), options.end(), rng_);
    for (const auto& [image, rotation] : options) {
      State next = s;
      next.choice[at] = {image, rotation};
      if (place(next, tile, face, image, rotation) && dfs(next, at + 1)) return true;
      if (nodes_ > kNodeBudget) return false;
    }
    return false;
  }
};

std::string signed_name(const Base& b, SignedEdge e) { return (e.reversed ? "-" : "+") + b.edges[e.edge].id; }

std::string endpoint(const Base& b, const Template& t, int tile, int v) {
  const auto& lv = t.vertices[v];
  switch (lv.kind) {
    case Template::Vertex::Corner:
      return "corner " + std::to_string(lv.slot);
    case Template::Vertex::Boundary:
      return "bp " + std::to_string(lv.slot) + "." + std::to_string(lv.k);
    case Template::Vertex::Interior:
      break;
  }
  return "interior o" + b.tiles[tile].id + "_" + std::to_string(v);
}

std::string render(const Base& b, const Template& t, const State& s) {
  std::ostringstream out;
  out << "fsr " << b.name << "\n\nvertex";
  for (const auto& v : b.vertices) out << ' ' << v;
  out << "\n\n";
  for (const auto& e : b.edges) out << "edge " << e.id << " : " << b.vertices[e.tail] << " -> " << b.vertices[e.head] << '\n';
  out << '\n';
  for (size_t e = 0; e < b.edges.size(); ++e) {
    out << "edge " << b.edges[e].id << " subdivides [";
    for (size_t q = 0; q < s.word[e].size(); ++q) {
      if (q > 0) out << ' ' << b.vertices[s.point[e][q]];
      out << ' ' << signed_name(b, *s.word[e][q]);
    }
    out << " ]\n";
  }
  out << '\n';
  for (const auto& tile : b.tiles) {
    out << "tile " << tile.id << " : [";
    for (const auto& slot : tile.slots) out << ' ' << signed_name(b, slot) << ' ' << b.vertices[b.end(slot)];
    out << " ]\n";
  }
  for (size_t tile = 0; tile < b.tiles.size(); ++tile) {
    const int ti = static_cast<int>(tile);
    out << "\nsubdivision " << b.tiles[tile].id << " {\n";
    for (size_t v = 0; v < t.vertices.size(); ++v) {
      if (t.vertices[v].kind == Template::Vertex::Interior) {
        out << "  interior o" << b.tiles[tile].id << '_' << v << " : " << b.vertices[s.vertex_image[tile][v]] << '\n';
      }
    }
    for (size_t e = 0; e < t.edges.size(); ++e) {
      out << "  edge e" << e << " : " << endpoint(b, t, ti, t.edges[e].tail) << " -> " << endpoint(b, t, ti, t.edges[e].head)
          << " image " << signed_name(b, *s.edge_image[tile][e]) << '\n';
    }
    for (size_t f = 0; f < t.faces.size(); ++f) {
      const auto [image, rotation] = s.choice[tile * t.faces.size() + f];
      out << "  face " << b.tiles[tile].id << 'f' << f << " : [";
      for (const auto& side : t.faces[f]) out << ' ' << (side.forward ? '+' : '-') << 'e' << side.edge;
      out << " ] image " << b.tiles[image].id << " rot " << rotation << '\n';
    }
    out << "}\n";
  }
  out << "\nsphere {\n";
  for (const auto& line : b.sphere_sides) out << "  " << line << '\n';
  out << "}\n";
  return out.str();
}

}  // namespace

bool generate(std::uint64_t seed, GeneratedSpec& out) {
  std::mt19937_64 rng(seed);
  out = GeneratedSpec{};
  out.seed = seed;
  out.shape = static_cast<Shape>(std::uniform_int_distribution<int>(0, 2)(rng));
  Base base;
  Template tmpl;
  switch (out.shape) {
    case Shape::Grid: {
      std::uniform_int_distribution<int> side(1, 3);
      do {
        out.width = side(rng);
        out.height = side(rng);
      } while (out.width * out.height < 2);
      base = pillow(out.width, out.height);
      tmpl = grid(out.width, out.height);
      break;
    }
    case Shape::Medial:
      base = triangle_pillow("medial");
      tmpl = medial();
      break;
    case Shape::Barycentric:
      base = triangle_pillow("barycentric");
      tmpl = barycentric();
      break;
  }
  base.name += "_s" + std::to_string(seed);
  Search search(base, tmpl, rng);
  const auto state = search.run();
  if (!state) return false;
  out.text = render(base, tmpl, *state);
  return true;
}

std::vector<GeneratedSpec> generate_many(std::uint64_t first_seed, int count) {
  std::vector<GeneratedSpec> out;
  for (std::uint64_t seed = first_seed; static_cast<int>(out.size()) < count; ++seed) {
    GeneratedSpec g;
    if (generate(seed, g)) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace testgen
