#include "fsrlab/report.hpp"

#include <map>
#include <stdexcept>

namespace fsrlab {

namespace {

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::Vertex:
      return "vertex";
    case Dim::Edge:
      return "edge";
    case Dim::Face:
      return "face";
  }
  return "?";
}

Json cell_ref(const CellRef& c) { return Json{{"dim", dim_name(c.dim)}, {"index", c.index}}; }

Json nullable(int v) { return v < 0 ? Json(nullptr) : Json(v); }

Json model_cell(const FsrSpec& spec, int tile, ModelCell c) {
  const Slot& slot = spec.tiles[tile].boundary[c.index];
  if (c.dim == Dim::Vertex) return Json{{"corner", c.index}, {"vertex", spec.vertices[slot.corner].id}};
  return Json{{"slot", c.index}, {"edge", spec.edges[slot.edge.edge].id}};
}

Json level0_cell(const FsrSpec& spec, const CellRef& c) {
  const std::string& name = c.dim == Dim::Vertex ? spec.vertices[c.index].id : spec.edges[c.index].id;
  return Json{{"dim", dim_name(c.dim)}, {"name", name}};
}

Json counts_json(const Counts& c) {
  return Json{{"vertices", c.vertices}, {"edges", c.edges}, {"faces", c.faces}, {"euler", c.euler()}};
}

const char* mode_name(DisjointMode m) { return m == DisjointMode::ModelDisk ? "model-disk" : "glued"; }

// Schemas use a subset of JSON Schema: type, required, properties, items,
// enum, additionalProperties (a schema or false).
const char* kComplexSchema = R"({
  "$id": "complex.v1",
  "type": "object",
  "required": ["schema", "rule", "kind", "tile", "level", "counts", "faces_by_type"],
  "additionalProperties": false,
  "properties": {
    "schema": {"enum": ["complex.v1"]},
    "rule": {"type": "string"},
    "kind": {"enum": ["sphere", "tile"]},
    "tile": {"type": ["string", "null"]},
    "level": {"type": "integer"},
    "counts": {"$ref": "#/$defs/counts"},
    "faces_by_type": {"type": "object", "additionalProperties": {"type": "integer"}},
    "vertices": {"type": "array", "items": {
      "type": "object",
      "required": ["type", "birth_level", "parent", "image", "origin"],
      "properties": {
        "type": {"type": "string"}, "birth_level": {"type": "integer"},
        "parent": {"$ref": "#/$defs/cell"}, "image": {"type": ["integer", "null"]},
        "origin": {"$ref": "#/$defs/cell"}}}},
    "edges": {"type": "array", "items": {
      "type": "object",
      "required": ["tail", "head", "type", "parent", "image", "origin"],
      "properties": {
        "tail": {"type": "integer"}, "head": {"type": "integer"}, "type": {"type": "string"},
        "parent": {"$ref": "#/$defs/cell"}, "image": {"type": ["integer", "null"]},
        "origin": {"$ref": "#/$defs/cell"}}}},
    "faces": {"type": "array", "items": {
      "type": "object",
      "required": ["type", "slots", "parent", "image"],
      "properties": {
        "type": {"type": "string"},
        "slots": {"type": "array", "items": {"$ref": "#/$defs/directed"}},
        "parent": {"type": "integer"}, "image": {"type": ["integer", "null"]}}}},
    "boundary": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/directed"}}}
  },
  "$defs": {
    "counts": {"type": "object", "required": ["vertices", "edges", "faces", "euler"],
               "properties": {"vertices": {"type": "integer"}, "edges": {"type": "integer"},
                              "faces": {"type": "integer"}, "euler": {"type": "integer"}}},
    "cell": {"type": "object", "required": ["dim", "index"],
             "properties": {"dim": {"enum": ["vertex", "edge", "face"]}, "index": {"type": "integer"}}},
    "directed": {"type": "object", "required": ["edge", "reversed"],
                 "properties": {"edge": {"type": "integer"}, "reversed": {"type": "boolean"}}}
  }
})";

const char* kVerdictSchema = R"({
  "$id": "verdict.v1",
  "type": "object",
  "required": ["schema", "rule", "mode", "verdicts"],
  "additionalProperties": false,
  "properties": {
    "schema": {"enum": ["verdict.v1"]},
    "rule": {"type": "string"},
    "mode": {"enum": ["model-disk", "glued"]},
    "verdicts": {"type": "array", "items": {"$ref": "#/$defs/verdict"}},
    "ideal_vertices": {"type": "array", "items": {"type": "string"}},
    "local_degrees": {"type": "object", "additionalProperties": {"type": "integer"}},
    "growth": {"type": "object", "required": ["a", "b_zero_possible", "returning"],
      "properties": {
        "a": {"type": "integer"}, "b_zero_possible": {"type": "boolean"},
        "returning": {"type": "object", "required": ["n", "cycle", "witness"],
          "properties": {"n": {"type": "integer"}, "cycle": {"type": "array", "items": {"type": "string"}},
                         "witness": {"type": "object", "required": ["level", "face"],
                                     "properties": {"level": {"type": "integer"}, "face": {"type": "integer"}}}}}}},
    "graphs": {"type": "array", "items": {"type": "object", "required": ["kind", "nodes", "arcs", "bound"],
      "properties": {"kind": {"enum": ["EE", "VV", "VE"]}, "nodes": {"type": "integer"},
                     "arcs": {"type": "integer"}, "bound": {"type": "integer"}}}},
    "crosscheck": {"type": "array", "items": {"type": "object",
      "required": ["property", "agrees", "partial", "bound", "level_cap", "level_checked", "violation", "detail"],
      "properties": {
        "property": {"$ref": "#/$defs/property"}, "agrees": {"type": "boolean"}, "partial": {"type": "boolean"},
        "bound": {"type": "integer"}, "level_cap": {"type": "integer"}, "level_checked": {"type": "integer"},
        "violation": {"type": ["object", "null"]}, "detail": {"type": "string"}}}},
    "boundary_pairs": {"type": "object", "required": ["level", "pairs", "ideal_vertices"],
      "properties": {
        "level": {"type": "integer"},
        "pairs": {"type": "array", "items": {"type": "object", "required": ["first", "second", "face"],
          "properties": {"first": {"$ref": "#/$defs/cell"}, "second": {"$ref": "#/$defs/cell"},
                         "face": {"type": "integer"}}}},
        "ideal_vertices": {"type": "array", "items": {"type": "string"}}}}
  },
  "$defs": {
    "property": {"enum": ["Esub", "Esep", "Vsep", "VEsep", "M0comb", "CombExp", "BoundedValence"]},
    "verdict": {"type": "object", "required": ["property", "holds", "certified_level", "witness", "basis"],
      "properties": {
        "property": {"$ref": "#/$defs/property"}, "holds": {"type": "boolean"},
        "certified_level": {"type": ["integer", "null"]},
        "witness": {"type": "array", "items": {"type": "string"}},
        "witness_indices": {"type": "array", "items": {"type": "integer"}},
        "basis": {"type": "string"}}},
    "cell": {"type": "object", "required": ["dim", "name"],
             "properties": {"dim": {"enum": ["vertex", "edge"]}, "name": {"type": "string"}}}
  }
})";

const char* kProbeSchema = R"({
  "$id": "probe.v1",
  "type": "object",
  "required": ["schema", "rule", "probe", "status", "parameters", "evidence", "summary"],
  "additionalProperties": false,
  "properties": {
    "schema": {"enum": ["probe.v1"]},
    "rule": {"type": "string"},
    "probe": {"enum": ["rushton", "contraction"]},
    "status": {"enum": ["PASS_AT_DEPTH", "VIOLATION", "CERTIFIED", "WITNESS", "UNKNOWN"]},
    "parameters": {"type": "object", "additionalProperties": {"type": "integer"}},
    "pairs_checked": {"type": "integer"},
    "violations_found": {"type": "integer"},
    "evidence": {"type": "object", "properties": {
      "violations": {"type": "array", "items": {"type": "object",
        "required": ["m", "n", "u", "v", "u_lift", "v_lift", "delta_m", "delta_lift"],
        "properties": {"m": {"type": "integer"}, "n": {"type": "integer"}, "u": {"type": "integer"},
                       "v": {"type": "integer"}, "u_lift": {"type": "integer"}, "v_lift": {"type": "integer"},
                       "delta_m": {"type": "integer"}, "delta_lift": {"type": "integer"}}}},
      "certificates": {"type": "array", "items": {"type": "object", "required": ["property", "holds"]}},
      "cycles": {"type": "array", "items": {"type": "object", "required": ["level", "ports", "crossed", "winding"],
        "properties": {
          "level": {"type": "integer"},
          "ports": {"type": "array", "items": {"type": "object", "required": ["face", "slot"],
                    "properties": {"face": {"type": "integer"}, "slot": {"type": "integer"}}}},
          "crossed": {"type": "array", "items": {"type": "string"}},
          "winding": {"type": "boolean"}}}}}},
    "summary": {"type": "string"}
  }
})";

const char* kGraphSchema = R"({
  "$id": "graph.v1",
  "type": "object",
  "required": ["schema", "rule", "flavor", "levels"],
  "additionalProperties": false,
  "properties": {
    "schema": {"enum": ["graph.v1"]},
    "rule": {"type": "string"},
    "flavor": {"enum": ["fat", "skinny"]},
    "levels": {"type": "array", "items": {"type": "object",
      "required": ["level", "vertices", "horizontal_edges", "vertical_edges", "parent", "adjacency"],
      "properties": {
        "level": {"type": "integer"}, "vertices": {"type": "integer"},
        "horizontal_edges": {"type": "integer"}, "vertical_edges": {"type": "integer"},
        "parent": {"type": "array", "items": {"type": "integer"}},
        "adjacency": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}}}}
  }
})";

const std::map<std::string, Json>& schemas() {
  static const std::map<std::string, Json> table = {
      {"complex.v1", Json::parse(kComplexSchema)},
      {"verdict.v1", Json::parse(kVerdictSchema)},
      {"probe.v1", Json::parse(kProbeSchema)},
      {"graph.v1", Json::parse(kGraphSchema)},
  };
  return table;
}

bool type_matches(const Json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

void check(const Json& root, const Json& schema, const Json& value, const std::string& path,
           std::vector<std::string>& errors) {
  if (schema.contains("$ref")) {
    const std::string ref = schema["$ref"];
    const std::string prefix = "#/$defs/";
    check(root, root["$defs"][ref.substr(prefix.size())], value, path, errors);
    return;
  }
  if (schema.contains("type")) {
    const Json& t = schema["type"];
    bool ok = false;
    if (t.is_array()) {
      for (const auto& alt : t) ok = ok || type_matches(value, alt.get<std::string>());
    } else {
      ok = type_matches(value, t.get<std::string>());
    }
    if (!ok) {
      errors.push_back(path + ": expected " + t.dump() + ", got " + value.type_name());
      return;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& option : schema["enum"]) found = found || option == value;
    if (!found) errors.push_back(path + ": " + value.dump() + " not in " + schema["enum"].dump());
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) errors.push_back(path + ": missing \"" + key.get<std::string>() + "\"");
      }
    }
    for (const auto& [key, sub] : value.items()) {
      if (schema.contains("properties") && schema["properties"].contains(key)) {
        check(root, schema["properties"][key], sub, path + "/" + key, errors);
      } else if (schema.contains("additionalProperties")) {
        const Json& extra = schema["additionalProperties"];
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) errors.push_back(path + ": unexpected \"" + key + "\"");
        } else {
          check(root, extra, sub, path + "/" + key, errors);
        }
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (size_t i = 0; i < value.size(); ++i) check(root, schema["items"], value[i], path + "/" + std::to_string(i), errors);
  }
}

}  // namespace

Json complex_report(const Rule& rule, const LevelComplex& c, bool cells) {
  const FsrSpec& spec = rule.spec();
  Json out;
  out["schema"] = "complex.v1";
  out["rule"] = spec.name;
  out["kind"] = c.kind == LevelComplex::Kind::Sphere ? "sphere" : "tile";
  out["tile"] = c.kind == LevelComplex::Kind::Tile ? Json(spec.tiles[c.base_tile].id) : Json(nullptr);
  out["level"] = c.level;
  out["counts"] = counts_json(c.counts());
  Json by_type = Json::object();
  for (const auto& t : spec.tiles) by_type[t.id] = 0;
  for (const auto& f : c.faces) by_type[spec.tiles[f.type].id] = by_type[spec.tiles[f.type].id].get<long long>() + 1;
  out["faces_by_type"] = by_type;
  if (!cells) return out;

  Json vs = Json::array();
  for (const auto& v : c.vertices) {
    vs.push_back({{"type", spec.vertices[v.type].id},
                  {"birth_level", v.birth_level},
                  {"parent", cell_ref(v.parent)},
                  {"image", nullable(v.image)},
                  {"origin", cell_ref(v.origin)}});
  }
  Json es = Json::array();
  for (const auto& e : c.edges) {
    es.push_back({{"tail", e.tail},
                  {"head", e.head},
                  {"type", spec.edges[e.type].id},
                  {"parent", cell_ref(e.parent)},
                  {"image", nullable(e.image)},
                  {"origin", cell_ref(e.origin)}});
  }
  auto directed = [](const std::vector<DirectedEdge>& chain) {
    Json a = Json::array();
    for (const auto& d : chain) a.push_back({{"edge", d.edge}, {"reversed", d.reversed}});
    return a;
  };
  Json fs = Json::array();
  for (const auto& f : c.faces) {
    fs.push_back({{"type", spec.tiles[f.type].id},
                  {"slots", directed(f.slots)},
                  {"parent", f.parent},
                  {"image", nullable(f.image)}});
  }
  out["vertices"] = vs;
  out["edges"] = es;
  out["faces"] = fs;
  if (c.kind == LevelComplex::Kind::Tile) {
    Json b = Json::array();
    for (const auto& chain : c.boundary) b.push_back(directed(chain));
    out["boundary"] = b;
  }
  return out;
}

Json verdict_json(const PropertyVerdict& v) {
  Json j;
  j["property"] = to_string(v.property);
  j["holds"] = v.holds;
  j["certified_level"] = v.certified_level ? Json(*v.certified_level) : Json(nullptr);
  j["witness"] = v.witness_labels;
  j["witness_indices"] = v.witness;
  j["basis"] = v.basis;
  return j;
}

Json verdict_report(const Rule& rule, const AnalysisInputs& in) {
  const FsrSpec& spec = rule.spec();
  Json out;
  out["schema"] = "verdict.v1";
  out["rule"] = spec.name;
  out["mode"] = mode_name(in.mode);
  Json vs = Json::array();
  for (const auto& v : in.verdicts) vs.push_back(verdict_json(v));
  if (in.valence) vs.push_back(verdict_json(in.valence->verdict));
  out["verdicts"] = vs;
  if (in.valence) {
    Json ideal = Json::array();
    for (int v : in.valence->ideal) ideal.push_back(spec.vertices[v].id);
    out["ideal_vertices"] = ideal;
    Json degrees = Json::object();
    for (size_t v = 0; v < in.valence->graph.weight.size(); ++v) degrees[spec.vertices[v].id] = in.valence->graph.weight[v];
    out["local_degrees"] = degrees;
  }
  if (in.growth) {
    Json cycle = Json::array();
    for (int t : in.growth->returning.cycle) cycle.push_back(spec.tiles[t].id);
    out["growth"] = {{"a", in.growth->a},
                     {"b_zero_possible", in.growth->b_zero_possible},
                     {"returning",
                      {{"n", in.growth->returning.n},
                       {"cycle", cycle},
                       {"witness", {{"level", in.growth->returning.witness.level},
                                    {"face", in.growth->returning.witness.index}}}}}};
  }
  if (!in.graphs.empty()) {
    const int l = rule.max_tile_size();
    Json gs = Json::array();
    for (const auto& g : in.graphs) {
      gs.push_back({{"kind", to_string(g.kind)},
                    {"nodes", g.nodes.size()},
                    {"arcs", g.arcs.size()},
                    {"bound", rule.tile_count() * l * l}});
    }
    out["graphs"] = gs;
  }
  if (!in.crosschecks.empty()) {
    Json cs = Json::array();
    for (const auto& c : in.crosschecks) {
      Json violation = nullptr;
      if (c.violation) {
        violation = {{"tile", spec.tiles[c.violation->tile].id},
                     {"level", c.violation->level},
                     {"face", c.violation->face},
                     {"a1", model_cell(spec, c.violation->tile, c.violation->a1)},
                     {"a2", model_cell(spec, c.violation->tile, c.violation->a2)}};
      }
      cs.push_back({{"property", to_string(c.property)},
                    {"agrees", c.agrees},
                    {"partial", c.partial},
                    {"bound", c.bound},
                    {"level_cap", c.level_cap},
                    {"level_checked", c.level_checked},
                    {"violation", violation},
                    {"detail", c.detail}});
    }
    out["crosscheck"] = cs;
  }
  if (in.boundary_pairs) {
    Json pairs = Json::array();
    for (const auto& p : in.boundary_pairs->pairs) {
      pairs.push_back({{"first", level0_cell(spec, p.first)}, {"second", level0_cell(spec, p.second)}, {"face", p.face}});
    }
    Json ideal = Json::array();
    for (int v : in.boundary_pairs->ideal_vertices) ideal.push_back(spec.vertices[v].id);
    out["boundary_pairs"] = {{"level", in.boundary_pairs->level}, {"pairs", pairs}, {"ideal_vertices", ideal}};
  }
  return out;
}

Json probe_report(const Rule& rule, const ProbeReport& r) {
  const FsrSpec& spec = rule.spec();
  Json out;
  out["schema"] = "probe.v1";
  out["rule"] = spec.name;
  out["probe"] = to_string(r.probe);
  out["status"] = to_string(r.status);
  Json evidence = Json::object();
  if (r.probe == ProbeKind::Rushton) {
    out["parameters"] = {{"M", r.M}, {"n", r.n}, {"depth", r.depth}};
    out["pairs_checked"] = r.pairs_checked;
    out["violations_found"] = r.violations_found;
    Json vs = Json::array();
    for (const auto& v : r.violations) {
      vs.push_back({{"m", v.m},
                    {"n", v.n},
                    {"u", v.u},
                    {"v", v.v},
                    {"u_lift", v.u_lift},
                    {"v_lift", v.v_lift},
                    {"delta_m", v.delta_m},
                    {"delta_lift", v.delta_lift}});
    }
    evidence["violations"] = vs;
  } else {
    out["parameters"] = {{"n_max", r.n_max}};
    Json certs = Json::array();
    for (const auto& v : r.certificates) certs.push_back(verdict_json(v));
    evidence["certificates"] = certs;
    Json cycles = Json::array();
    for (const auto& [level, c] : r.cycles) {
      Json ports = Json::array();
      for (const auto& p : c.sides) ports.push_back({{"face", p.face}, {"slot", p.slot}});
      Json crossed = Json::array();
      for (int e : c.crossed) crossed.push_back(spec.edges[e].id);
      cycles.push_back({{"level", level}, {"ports", ports}, {"crossed", crossed}, {"winding", c.winding}});
    }
    evidence["cycles"] = cycles;
  }
  out["evidence"] = evidence;
  out["summary"] = r.summary;
  return out;
}

Json graph_report(const Rule& rule, const SubdivisionGraph& g) {
  Json out;
  out["schema"] = "graph.v1";
  out["rule"] = rule.spec().name;
  out["flavor"] = to_string(g.flavor);
  Json levels = Json::array();
  for (int n = -1; n <= g.max_level; ++n) {
    const auto& lv = g.at(n);
    Json adj = Json::array();
    for (int v = 0; v < lv.size; ++v) {
      auto nb = lv.neighbors(v);
      adj.push_back(std::vector<int>(nb.begin(), nb.end()));
    }
    levels.push_back({{"level", n},
                      {"vertices", lv.size},
                      {"horizontal_edges", lv.horizontal_edges()},
                      {"vertical_edges", g.vertical_edges(n)},
                      {"parent", lv.parent},
                      {"adjacency", adj}});
  }
  out["levels"] = levels;
  return out;
}

const Json& report_schema(const std::string& name) {
  auto it = schemas().find(name);
  if (it == schemas().end()) throw std::out_of_range("unknown report schema '" + name + "'");
  return it->second;
}

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (const auto& [name, schema] : schemas()) out.push_back(name);
  return out;
}

std::vector<std::string> schema_errors(const Json& document) {
  if (!document.is_object() || !document.contains("schema") || !document["schema"].is_string()) {
    return {"document has no \"schema\" key"};
  }
  auto it = schemas().find(document["schema"].get<std::string>());
  if (it == schemas().end()) return {"unknown schema " + document["schema"].dump()};
  std::vector<std::string> errors;
  check(it->second, it->second, document, "", errors);
  return errors;
}

}  // namespace fsrlab
