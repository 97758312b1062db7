#include "fsrlab/format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace fsrlab {

ParseError::ParseError(Kind kind, int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

const char* to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::Syntax: return "syntax";
    case ParseError::Kind::UnknownIdentifier: return "unknown-identifier";
    case ParseError::Kind::DuplicateIdentifier: return "duplicate-identifier";
  }
  return "?";
}

int FsrSpec::vertex_index(const std::string& id) const {
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int FsrSpec::edge_index(const std::string& id) const {
  for (size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int FsrSpec::tile_index(const std::string& id) const {
  for (size_t i = 0; i < tiles.size(); ++i) {
    if (tiles[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

const SubdivisionScheme* FsrSpec::scheme_for(int tile) const {
  for (const auto& s : schemes) {
    if (s.tile == tile) return &s;
  }
  return nullptr;
}

int FsrSpec::max_tile_size() const {
  int l = 0;
  for (const auto& t : tiles) l = std::max(l, t.size());
  return l;
}

std::string signed_edge_name(const FsrSpec& spec, SignedEdge e) {
  return std::string(e.reversed ? "-" : "+") + spec.edges.at(e.edge).id;
}

namespace {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
  bool punct = false;
};

bool is_punct(char c) {
  return c == '[' || c == ']' || c == '{' || c == '}' || c == '(' || c == ')' || c == ':' ||
         c == ',' || c == '=';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({"->", line, col, true});
      advance(2);
      continue;
    }
    if (is_punct(c)) {
      out.push_back({std::string(1, c), line, col, true});
      advance(1);
      continue;
    }
    Token tok{"", line, col, false};
    while (i < text.size()) {
      char d = text[i];
      if (std::isspace(static_cast<unsigned char>(d)) || is_punct(d) || d == '#') break;
      if (d == '-' && i + 1 < text.size() && text[i + 1] == '>') break;
      tok.text.push_back(d);
      advance(1);
    }
    out.push_back(std::move(tok));
  }
  return out;
}

// Raw declarations keep names and source positions until resolution.
struct NameRef {
  std::string name;
  int line = 0;
  int column = 0;
};

struct RawSigned {
  NameRef ref;
  bool reversed = false;
};

struct RawEdge {
  NameRef id;
  NameRef tail, head;
  bool has_endpoints = false;
  bool has_word = false;
  std::vector<RawSigned> images;
  std::vector<NameRef> points;
};

struct RawTile {
  NameRef id;
  std::vector<std::pair<RawSigned, NameRef>> slots;
};

struct RawEndpoint {
  EndpointKind kind = EndpointKind::Corner;
  int a = 0;
  int b = 0;
  NameRef interior;
  int line = 0;
  int column = 0;
};

struct RawLocalEdge {
  NameRef id;
  RawEndpoint tail, head;
  RawSigned image;
};

struct RawFace {
  NameRef id;
  std::vector<RawSigned> sides;
  NameRef image;
  int rotation = 0;
};

struct RawScheme {
  NameRef tile;
  std::vector<std::pair<NameRef, NameRef>> interior;
  std::vector<RawLocalEdge> edges;
  std::vector<RawFace> faces;
};

struct RawSide {
  NameRef tile;
  int slot = 0;
  int line = 0;
  int column = 0;
};

struct RawIncidence {
  NameRef edge;
  RawSide first, second;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  FsrSpec run() {
    while (!at_end()) declaration();
    return resolve();
  }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;

  std::optional<NameRef> name_;
  std::vector<std::pair<NameRef, WeightHint>> vertices_;
  std::vector<RawEdge> edges_;
  std::vector<RawTile> tiles_;
  std::vector<RawScheme> schemes_;
  std::vector<RawIncidence> incidences_;
  bool has_sphere_ = false;

  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    static const Token eof{"<end of input>", 0, 0, true};
    if (at_end()) return tokens_.empty() ? eof : eof;
    return tokens_[pos_];
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    int line = at.line;
    int col = at.column;
    if (line == 0 && !tokens_.empty()) {
      line = tokens_.back().line;
      col = tokens_.back().column;
    }
    throw ParseError(ParseError::Kind::Syntax, line, col, message);
  }

  const Token& next() {
    if (at_end()) fail(peek(), "unexpected end of input");
    return tokens_[pos_++];
  }

  void expect(const char* punct) {
    const Token& t = next();
    if (t.text != punct) fail(t, std::string("expected '") + punct + "', found '" + t.text + "'");
  }

  bool accept(const char* text) {
    if (!at_end() && peek().text == text) {
      ++pos_;
      return true;
    }
    return false;
  }

  NameRef name() {
    const Token& t = next();
    if (t.punct) fail(t, "expected identifier, found '" + t.text + "'");
    char c = t.text.front();
    if (c == '+' || c == '-') fail(t, "identifier may not start with a sign: '" + t.text + "'");
    return {t.text, t.line, t.column};
  }

  void keyword(const char* kw) {
    const Token& t = next();
    if (t.text != kw) fail(t, std::string("expected '") + kw + "', found '" + t.text + "'");
  }

  int integer() {
    const Token& t = next();
    int value = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || p != t.text.data() + t.text.size() || value < 0) {
      fail(t, "expected non-negative integer, found '" + t.text + "'");
    }
    return value;
  }

  RawSigned signed_ref() {
    const Token& t = next();
    if (t.punct || t.text.size() < 2 || (t.text[0] != '+' && t.text[0] != '-')) {
      fail(t, "expected signed reference like +e or -e, found '" + t.text + "'");
    }
    return {{t.text.substr(1), t.line, t.column + 1}, t.text[0] == '-'};
  }

  void declaration() {
    const Token& t = next();
    if (t.punct) fail(t, "expected a declaration keyword, found '" + t.text + "'");
    if (t.text == "fsr") {
      if (name_) fail(t, "duplicate 'fsr' header");
      name_ = name();
    } else if (t.text == "vertex") {
      vertex_line(t.line);
    } else if (t.text == "edge") {
      edge_decl();
    } else if (t.text == "tile") {
      tile_decl();
    } else if (t.text == "subdivision") {
      scheme_decl();
    } else if (t.text == "sphere") {
      sphere_decl(t);
    } else {
      fail(t, "unknown keyword '" + t.text + "'");
    }
  }

  void vertex_line(int line) {
    bool any = false;
    while (!at_end() && peek().line == line) {
      NameRef n = name();
      WeightHint hint = WeightHint::None;
      if (accept("=")) {
        const Token& h = next();
        if (h.text == "finite") {
          hint = WeightHint::Finite;
        } else if (h.text == "infinite") {
          hint = WeightHint::Infinite;
        } else if (h.text == "none") {
          hint = WeightHint::None;
        } else {
          fail(h, "unknown weight hint '" + h.text + "'");
        }
      }
      vertices_.emplace_back(n, hint);
      any = true;
    }
    if (!any) fail(peek(), "'vertex' needs at least one identifier on the same line");
  }

  RawEdge& edge_entry(const NameRef& id) {
    for (auto& e : edges_) {
      if (e.id.name == id.name) return e;
    }
    edges_.push_back({});
    edges_.back().id = id;
    return edges_.back();
  }

  void edge_decl() {
    NameRef id = name();
    if (accept(":")) {
      RawEdge& e = edge_entry(id);
      if (e.has_endpoints) throw ParseError(ParseError::Kind::DuplicateIdentifier, id.line, id.column, "edge '" + id.name + "' endpoints declared twice");
      e.tail = name();
      expect("->");
      e.head = name();
      e.has_endpoints = true;
      return;
    }
    keyword("subdivides");
    RawEdge& e = edge_entry(id);
    if (e.has_word) throw ParseError(ParseError::Kind::DuplicateIdentifier, id.line, id.column, "edge '" + id.name + "' subdivision declared twice");
    expect("[");
    e.images.push_back(signed_ref());
    while (!accept("]")) {
      e.points.push_back(name());
      e.images.push_back(signed_ref());
    }
    e.has_word = true;
  }

  void tile_decl() {
    RawTile tile;
    tile.id = name();
    expect(":");
    expect("[");
    while (!accept("]")) {
      RawSigned edge = signed_ref();
      NameRef corner = name();
      tile.slots.emplace_back(edge, corner);
    }
    tiles_.push_back(std::move(tile));
  }

  RawEndpoint endpoint() {
    const Token& t = next();
    RawEndpoint ep;
    ep.line = t.line;
    ep.column = t.column;
    if (t.text == "corner") {
      ep.kind = EndpointKind::Corner;
      ep.a = integer();
    } else if (t.text == "bp") {
      ep.kind = EndpointKind::BoundaryPoint;
      const Token& v = next();
      auto dot = v.text.find('.');
      int slot = -1;
      int k = -1;
      if (dot != std::string::npos) {
        auto r1 = std::from_chars(v.text.data(), v.text.data() + dot, slot);
        auto r2 = std::from_chars(v.text.data() + dot + 1, v.text.data() + v.text.size(), k);
        if (r1.ec != std::errc() || r1.ptr != v.text.data() + dot || r2.ec != std::errc() ||
            r2.ptr != v.text.data() + v.text.size()) {
          slot = -1;
        }
      }
      if (slot < 0 || k < 1) fail(v, "expected <slot>.<k> after 'bp', found '" + v.text + "'");
      ep.a = slot;
      ep.b = k;
    } else if (t.text == "interior") {
      ep.kind = EndpointKind::Interior;
      ep.interior = name();
    } else {
      fail(t, "expected 'corner', 'bp' or 'interior', found '" + t.text + "'");
    }
    return ep;
  }

  void scheme_decl() {
    RawScheme s;
    s.tile = name();
    expect("{");
    while (!accept("}")) {
      const Token& t = next();
      if (t.text == "interior") {
        NameRef id = name();
        expect(":");
        NameRef type = name();
        s.interior.emplace_back(id, type);
      } else if (t.text == "edge") {
        RawLocalEdge e;
        e.id = name();
        expect(":");
        e.tail = endpoint();
        expect("->");
        e.head = endpoint();
        keyword("image");
        e.image = signed_ref();
        s.edges.push_back(std::move(e));
      } else if (t.text == "face") {
        RawFace f;
        f.id = name();
        expect(":");
        expect("[");
        while (!accept("]")) f.sides.push_back(signed_ref());
        keyword("image");
        f.image = name();
        keyword("rot");
        f.rotation = integer();
        s.faces.push_back(std::move(f));
      } else {
        fail(t, "unknown subdivision statement '" + t.text + "'");
      }
    }
    schemes_.push_back(std::move(s));
  }

  RawSide side() {
    const Token& open = peek();
    expect("(");
    RawSide s;
    s.line = open.line;
    s.column = open.column;
    s.tile = name();
    expect(",");
    keyword("slot");
    s.slot = integer();
    expect(")");
    return s;
  }

  void sphere_decl(const Token& at) {
    if (has_sphere_) fail(at, "duplicate 'sphere' block");
    has_sphere_ = true;
    expect("{");
    while (!accept("}")) {
      keyword("side");
      RawIncidence inc;
      inc.edge = name();
      expect("=");
      inc.first = side();
      expect(",");
      inc.second = side();
      incidences_.push_back(std::move(inc));
    }
  }

  // --- resolution ---------------------------------------------------------

  [[noreturn]] static void unknown(const NameRef& r, const std::string& what) {
    throw ParseError(ParseError::Kind::UnknownIdentifier, r.line, r.column, "unknown " + what + " '" + r.name + "'");
  }

  [[noreturn]] static void duplicate(const NameRef& r, const std::string& what) {
    throw ParseError(ParseError::Kind::DuplicateIdentifier, r.line, r.column, "duplicate " + what + " '" + r.name + "'");
  }

  FsrSpec resolve() {
    FsrSpec spec;
    if (!name_) throw ParseError(ParseError::Kind::Syntax, 1, 1, "missing 'fsr <name>' header");
    spec.name = name_->name;

    std::unordered_map<std::string, int> vidx, eidx, tidx;
    for (const auto& [n, hint] : vertices_) {
      if (!vidx.emplace(n.name, static_cast<int>(spec.vertices.size())).second) duplicate(n, "vertex");
      spec.vertices.push_back({n.name, hint});
    }
    for (const auto& e : edges_) {
      eidx.emplace(e.id.name, static_cast<int>(eidx.size()));
    }
    for (const auto& t : tiles_) {
      if (!tidx.emplace(t.id.name, static_cast<int>(tidx.size())).second) duplicate(t.id, "tile");
    }
    auto vertex = [&](const NameRef& r) {
      auto it = vidx.find(r.name);
      if (it == vidx.end()) unknown(r, "vertex");
      return it->second;
    };
    auto edge = [&](const RawSigned& r) {
      auto it = eidx.find(r.ref.name);
      if (it == eidx.end()) unknown(r.ref, "edge");
      return SignedEdge{it->second, r.reversed};
    };
    auto tile = [&](const NameRef& r) {
      auto it = tidx.find(r.name);
      if (it == tidx.end()) unknown(r, "tile");
      return it->second;
    };

    for (const auto& e : edges_) {
      if (!e.has_endpoints) unknown(e.id, "edge (no endpoint declaration for)");
      EdgeType et;
      et.id = e.id.name;
      et.tail = vertex(e.tail);
      et.head = vertex(e.head);
      if (e.has_word) {
        for (const auto& img : e.images) et.images.push_back(edge(img));
        for (const auto& p : e.points) et.points.push_back(vertex(p));
      }
      spec.edges.push_back(std::move(et));
    }
    for (const auto& t : tiles_) {
      TileType tt;
      tt.id = t.id.name;
      for (const auto& [e, c] : t.slots) tt.boundary.push_back({edge(e), vertex(c)});
      spec.tiles.push_back(std::move(tt));
    }
    std::vector<bool> seen_scheme(spec.tiles.size(), false);
    for (const auto& s : schemes_) {
      SubdivisionScheme scheme;
      scheme.tile = tile(s.tile);
      if (seen_scheme[scheme.tile]) duplicate(s.tile, "subdivision for tile");
      seen_scheme[scheme.tile] = true;
      const TileType& tt = spec.tiles[scheme.tile];

      std::unordered_map<std::string, int> ividx, leidx;
      for (const auto& [id, type] : s.interior) {
        if (!ividx.emplace(id.name, static_cast<int>(scheme.interior.size())).second) duplicate(id, "interior vertex");
        scheme.interior.push_back({id.name, vertex(type)});
      }
      auto endpoint_of = [&](const RawEndpoint& ep) {
        LocalEndpoint out;
        out.kind = ep.kind;
        out.a = ep.a;
        out.b = ep.b;
        if (ep.kind == EndpointKind::Interior) {
          auto it = ividx.find(ep.interior.name);
          if (it == ividx.end()) unknown(ep.interior, "interior vertex");
          out.a = it->second;
        } else if (ep.kind == EndpointKind::Corner) {
          if (ep.a >= tt.size()) {
            throw ParseError(ParseError::Kind::UnknownIdentifier, ep.line, ep.column,
                             "no corner " + std::to_string(ep.a) + " on tile '" + tt.id + "'");
          }
        } else {
          if (ep.a >= tt.size()) {
            throw ParseError(ParseError::Kind::UnknownIdentifier, ep.line, ep.column,
                             "no slot " + std::to_string(ep.a) + " on tile '" + tt.id + "'");
          }
        }
        return out;
      };
      for (const auto& e : s.edges) {
        if (!leidx.emplace(e.id.name, static_cast<int>(scheme.edges.size())).second) duplicate(e.id, "local edge");
        scheme.edges.push_back({e.id.name, endpoint_of(e.tail), endpoint_of(e.head), edge(e.image)});
      }
      std::unordered_map<std::string, int> fidx;
      for (const auto& f : s.faces) {
        if (!fidx.emplace(f.id.name, static_cast<int>(scheme.faces.size())).second) duplicate(f.id, "face");
        LocalFace face;
        face.id = f.id.name;
        for (const auto& side : f.sides) {
          auto it = leidx.find(side.ref.name);
          if (it == leidx.end()) unknown(side.ref, "local edge");
          face.sides.push_back({it->second, side.reversed});
        }
        face.image = tile(f.image);
        face.rotation = f.rotation;
        scheme.faces.push_back(std::move(face));
      }
      spec.schemes.push_back(std::move(scheme));
    }
    for (const auto& inc : incidences_) {
      EdgeIncidence out;
      auto it = eidx.find(inc.edge.name);
      if (it == eidx.end()) unknown(inc.edge, "edge");
      out.edge = it->second;
      auto side_of = [&](const RawSide& s) {
        GluingSide g{tile(s.tile), s.slot};
        if (s.slot >= spec.tiles[g.tile].size()) {
          throw ParseError(ParseError::Kind::UnknownIdentifier, s.line, s.column,
                           "no slot " + std::to_string(s.slot) + " on tile '" + s.tile.name + "'");
        }
        return g;
      };
      out.first = side_of(inc.first);
      out.second = side_of(inc.second);
      spec.gluing.incidences.push_back(out);
    }
    return spec;
  }
};

const char* hint_suffix(WeightHint h) {
  switch (h) {
    case WeightHint::Finite: return "=finite";
    case WeightHint::Infinite: return "=infinite";
    case WeightHint::None: break;
  }
  return "";
}

std::string endpoint_text(const FsrSpec&, const SubdivisionScheme& s, const LocalEndpoint& ep) {
  switch (ep.kind) {
    case EndpointKind::Corner: return "corner " + std::to_string(ep.a);
    case EndpointKind::BoundaryPoint: return "bp " + std::to_string(ep.a) + "." + std::to_string(ep.b);
    case EndpointKind::Interior: return "interior " + s.interior.at(ep.a).id;
  }
  return "";
}

}  // namespace

FsrSpec parse_fsr(std::string_view text) {
  Parser p(tokenize(text));
  return p.run();
}

std::string serialize_fsr(const FsrSpec& spec) {
  std::ostringstream out;
  out << "fsr " << spec.name << "\n\n";
  if (!spec.vertices.empty()) {
    out << "vertex";
    for (const auto& v : spec.vertices) out << ' ' << v.id << hint_suffix(v.weight_hint);
    out << "\n\n";
  }
  for (const auto& e : spec.edges) {
    out << "edge " << e.id << " : " << spec.vertices.at(e.tail).id << " -> " << spec.vertices.at(e.head).id << "\n";
  }
  out << "\n";
  for (const auto& e : spec.edges) {
    if (e.images.empty()) continue;
    out << "edge " << e.id << " subdivides [";
    for (size_t j = 0; j < e.images.size(); ++j) {
      if (j > 0) out << ' ' << spec.vertices.at(e.points.at(j - 1)).id;
      out << ' ' << signed_edge_name(spec, e.images[j]);
    }
    out << " ]\n";
  }
  out << "\n";
  for (const auto& t : spec.tiles) {
    out << "tile " << t.id << " : [";
    for (const auto& slot : t.boundary) {
      out << ' ' << signed_edge_name(spec, slot.edge) << ' ' << spec.vertices.at(slot.corner).id;
    }
    out << " ]\n";
  }
  for (const auto& s : spec.schemes) {
    out << "\nsubdivision " << spec.tiles.at(s.tile).id << " {\n";
    for (const auto& v : s.interior) out << "  interior " << v.id << " : " << spec.vertices.at(v.image).id << "\n";
    for (const auto& e : s.edges) {
      out << "  edge " << e.id << " : " << endpoint_text(spec, s, e.tail) << " -> " << endpoint_text(spec, s, e.head)
          << " image " << signed_edge_name(spec, e.image) << "\n";
    }
    for (const auto& f : s.faces) {
      out << "  face " << f.id << " : [";
      for (const auto& side : f.sides) out << ' ' << (side.reversed ? '-' : '+') << s.edges.at(side.edge).id;
      out << " ] image " << spec.tiles.at(f.image).id << " rot " << f.rotation << "\n";
    }
    out << "}\n";
  }
  out << "\nsphere {\n";
  for (const auto& inc : spec.gluing.incidences) {
    out << "  side " << spec.edges.at(inc.edge).id << " = (" << spec.tiles.at(inc.first.tile).id << ", slot "
        << inc.first.slot << ") , (" << spec.tiles.at(inc.second.tile).id << ", slot " << inc.second.slot << ")\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace fsrlab
