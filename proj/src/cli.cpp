#include "fsrlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "fsrlab/analyze.hpp"
#include "fsrlab/complex.hpp"
#include "fsrlab/fixtures.hpp"
#include "fsrlab/format.hpp"
#include "fsrlab/graphs.hpp"
#include "fsrlab/render.hpp"
#include "fsrlab/report.hpp"

namespace fsrlab {

namespace {

// Raised for bad input after the command line itself parsed fine.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Loaded {
  std::string source;
  std::optional<FsrSpec> spec;
  ValidationReport report;
};

// A path that does not exist but names a bundled fixture (with or without a
// .fsr suffix) loads the fixture.
std::string read_input(const std::string& path, std::string& source) {
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    source = path;
    return buf.str();
  }
  std::string stem = std::filesystem::path(path).filename().string();
  if (stem.size() > 4 && stem.ends_with(".fsr")) stem.resize(stem.size() - 4);
  const auto names = fixture_names();
  if (std::find(names.begin(), names.end(), stem) != names.end()) {
    source = "fixture:" + stem;
    return std::string(fixture_text(stem));
  }
  throw InputError("no such file: " + path);
}

Loaded load(const std::string& path) {
  Loaded l;
  const std::string text = read_input(path, l.source);
  try {
    l.spec = parse_fsr(text);
  } catch (const ParseError& e) {
    std::ostringstream msg;
    msg << l.source << ':' << e.line() << ':' << e.column() << ": " << to_string(e.kind()) << ": " << e.what();
    throw InputError(msg.str());
  }
  l.report = validate_fsr(*l.spec);
  return l;
}

void print_findings(std::ostream& os, const std::string& source, const ValidationReport& r) {
  for (const auto& f : r.findings) {
    os << source << ": " << (f.severity == Severity::Error ? "error" : "warning") << " [" << f.code << "] ";
    if (!f.location.empty()) os << f.location << ": ";
    os << f.message << '\n';
  }
}

RulePtr load_rule(const std::string& path, std::ostream& err) {
  Loaded l = load(path);
  if (!l.report.ok) {
    print_findings(err, l.source, l.report);
    throw InputError(l.source + ": specification is invalid");
  }
  return Rule::compile(std::move(*l.spec));
}

int tile_index(const FsrSpec& spec, const std::string& id) {
  for (size_t t = 0; t < spec.tiles.size(); ++t) {
    if (spec.tiles[t].id == id) return static_cast<int>(t);
  }
  throw InputError("unknown tile type '" + id + "'");
}

void write_document(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(output, std::ios::binary);
  if (!file) throw InputError("cannot write " + output);
  file << text;
}

std::string witness_text(const PropertyVerdict& v) {
  std::string s;
  for (size_t i = 0; i < v.witness_labels.size(); ++i) s += (i ? " -> " : "") + v.witness_labels[i];
  if (!v.witness_labels.empty()) s += " -> " + v.witness_labels.front();  // witnesses are cycles
  return s;
}

void print_verdict(std::ostream& os, const PropertyVerdict& v) {
  os << std::left << std::setw(16) << to_string(v.property) << (v.holds ? "holds" : "FAILS");
  if (v.certified_level) os << "  certified at level " << *v.certified_level;
  if (!v.holds && !v.witness_labels.empty()) os << "  witness: " << witness_text(v);
  os << '\n';
  if (!v.basis.empty()) os << "                  " << v.basis << '\n';
}

// ---------------------------------------------------------------------------

struct Options {
  bool json = false;
  std::string file;
  std::string output;

  // subdivide
  int level = 0;
  std::string tile;
  std::string emit = "census";
  std::string layout = "tutte";

  // analyze
  std::string property;
  int crosscheck = -1;
  bool glued = false;
  int pairs = -1;
  std::string dot;

  // graph
  int levels = 1;
  std::string flavor = "fat";
  std::string graph_emit = "summary";
  int ports = -1;

  // probe
  int M = 3;
  int n = 1;
  int depth = 3;
  int max_n = 3;
  long long step_budget = PortCycleOptions{}.step_budget;

  // fixtures / schema
  std::string name;
};

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load(o.file);
  if (o.json) {
    Json doc = {{"source", l.source}, {"ok", l.report.ok}, {"findings", Json::array()}};
    for (const auto& f : l.report.findings) {
      doc["findings"].push_back({{"severity", f.severity == Severity::Error ? "error" : "warning"},
                                 {"code", f.code},
                                 {"location", f.location},
                                 {"message", f.message}});
    }
    out << doc.dump(2) << '\n';
  } else {
    print_findings(l.report.ok ? out : err, l.source, l.report);
    if (l.report.ok) {
      const FsrSpec& s = *l.spec;
      out << l.source << ": ok (" << s.vertices.size() << " vertex types, " << s.edges.size() << " edge types, "
          << s.tiles.size() << " tile types)\n";
    }
  }
  return l.report.ok ? kExitOk : kExitInput;
}

int cmd_subdivide(const Options& o, std::ostream& out, std::ostream& err) {
  RulePtr rule = load_rule(o.file, err);
  SubdivisionEngine engine(rule);
  const std::optional<int> tile = o.tile.empty() ? std::nullopt : std::optional<int>(tile_index(rule->spec(), o.tile));
  auto level = [&](int n) -> const LevelComplex& { return tile ? engine.tile(*tile, n) : engine.sphere(n); };
  const LevelComplex& top = level(o.level);

  if (o.emit == "census") {
    if (o.json) {
      out << complex_report(*rule, top, false).dump(2) << '\n';
      return kExitOk;
    }
    std::vector<const LevelComplex*> ls;
    for (int n = 0; n <= o.level; ++n) ls.push_back(&level(n));
    const Census c = census(*rule, ls);
    out << rule->spec().name << (tile ? " tile " + o.tile : std::string(" sphere")) << '\n';
    out << "level  vertices  edges  faces  euler  faces by type\n";
    for (const auto& l : c.levels) {
      out << std::right << std::setw(5) << l.level << std::setw(10) << l.counts.vertices << std::setw(7)
          << l.counts.edges << std::setw(7) << l.counts.faces << std::setw(7) << l.counts.euler() << " ";
      for (size_t t = 0; t < l.faces_by_type.size(); ++t) {
        out << ' ' << rule->spec().tiles[t].id << '=' << l.faces_by_type[t];
      }
      out << '\n';
    }
    return kExitOk;
  }
  RenderOptions ro;
  ro.level = o.level;
  ro.tile = tile;
  ro.layout = o.layout == "radial" ? Layout::Radial : Layout::Tutte;
  ro.format = o.emit == "json" ? RenderFormat::Json : o.emit == "svg" ? RenderFormat::Svg : RenderFormat::Dot;
  write_document(emit_render(*rule, top, ro), o.output, out);
  return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  RulePtr rule = load_rule(o.file, err);
  const FsrSpec& spec = rule->spec();
  SubdivisionEngine engine(rule);
  const DisjointMode mode = o.glued ? DisjointMode::Glued : DisjointMode::ModelDisk;

  std::optional<Property> only;
  if (!o.property.empty()) {
    only = property_from_string(o.property);
    if (!only) throw InputError("unknown property '" + o.property + "'");
  }

  AnalysisInputs in;
  in.mode = mode;
  for (const auto& v : classify_properties(*rule, mode)) {
    if (!only || *only == v.property) in.verdicts.push_back(v);
  }
  if (!only || *only == Property::BoundedValence) in.valence = check_bounded_valence(*rule);

  bool failing = false;
  for (const auto& v : in.verdicts) failing |= !v.holds;
  if (in.valence) failing |= !in.valence->verdict.holds;

  if (o.crosscheck >= 0) {
    for (const auto& v : in.verdicts) in.crosschecks.push_back(crosscheck_at_bound(engine, v.property, o.crosscheck, mode));
    for (const auto& c : in.crosschecks) failing |= !c.agrees;
  }
  if (o.pairs >= 0) in.boundary_pairs = boundary_pair_report(engine, o.pairs);

  if (!o.dot.empty()) {
    const auto kind_property = property_from_string(o.dot == "EE" || o.dot == "ee"   ? "Esep"
                                                    : o.dot == "VV" || o.dot == "vv" ? "Vsep"
                                                    : o.dot == "VE" || o.dot == "ve" ? "VEsep"
                                                                                     : o.dot);
    const auto kind = kind_property ? separation_kind_of(*kind_property) : std::nullopt;
    if (!kind) throw InputError("--dot expects EE, VV or VE");
    const SeparationGraph g = build_separation_graph(*rule, *kind, mode);
    const PropertyVerdict v = check_separation(*rule, g);
    write_document(separation_dot(*rule, g, v.witness), o.output, out);
    return failing ? kExitFinding : kExitOk;
  }

  if (!only) {
    in.growth = growth_constants(engine);
    for (SeparationKind k : {SeparationKind::EE, SeparationKind::VV, SeparationKind::VE}) {
      in.graphs.push_back(build_separation_graph(*rule, k, mode));
    }
  }

  if (o.json) {
    out << verdict_report(*rule, in).dump(2) << '\n';
    return failing ? kExitFinding : kExitOk;
  }

  out << spec.name << " (" << (mode == DisjointMode::Glued ? "glued" : "model-disk") << " disjointness)\n";
  for (const auto& v : in.verdicts) print_verdict(out, v);
  if (in.valence) {
    print_verdict(out, in.valence->verdict);
    if (!in.valence->ideal.empty()) {
      out << "                  ideal vertices:";
      for (int v : in.valence->ideal) out << ' ' << spec.vertices[v].id;
      out << '\n';
    }
  }
  for (const auto& g : in.graphs) {
    out << "graph " << to_string(g.kind) << ": " << g.nodes.size() << " nodes, " << g.arcs.size() << " arcs\n";
  }
  if (in.growth) out << "growth: a = " << in.growth->a << ", returning tile after n = " << in.growth->returning.n << '\n';
  for (const auto& c : in.crosschecks) {
    out << "crosscheck " << to_string(c.property) << ": " << (c.agrees ? "agrees" : "DISAGREES") << " (checked to level "
        << c.level_checked << ", bound " << c.bound << (c.partial ? ", partial" : "") << ")";
    if (!c.detail.empty()) out << "; " << c.detail;
    out << '\n';
  }
  if (in.boundary_pairs) {
    out << "boundary pairs at level " << in.boundary_pairs->level << ": " << in.boundary_pairs->pairs.size() << '\n';
  }
  return failing ? kExitFinding : kExitOk;
}

int cmd_graph(const Options& o, std::ostream& out, std::ostream& err) {
  RulePtr rule = load_rule(o.file, err);
  SubdivisionEngine engine(rule);
  if (o.ports >= 0) {
    PortCycleOptions po;
    po.step_budget = o.step_budget;
    const PortWalkGraph g = port_walk_graph(engine, o.ports, po);
    if (o.graph_emit == "dot") {
      write_document(port_walk_dot(*rule, g), o.output, out);
    } else {
      out << "port-walk graph at level " << g.level << ": " << g.ports.size() << " ports, " << g.arcs.size() << " arcs, "
          << g.cycles_found << " cycles" << (g.complete ? "" : " (search incomplete)") << ", "
          << (g.shortest_non_winding ? "non-winding cycle of length " + std::to_string(g.shortest_non_winding->ports.size())
                                     : std::string("no non-winding cycle"))
          << '\n';
    }
    return kExitOk;
  }
  const Flavor flavor = o.flavor == "skinny" ? Flavor::Skinny : Flavor::Fat;
  const SubdivisionGraph g = build_subdivision_graph(engine, o.levels, flavor);
  if (o.graph_emit == "dot") {
    write_document(subdivision_graph_dot(*rule, g), o.output, out);
  } else if (o.graph_emit == "json" || o.json) {
    write_document(graph_report(*rule, g).dump(2) + "\n", o.output, out);
  } else {
    out << rule->spec().name << ' ' << to_string(flavor) << " subdivision graph\n";
    out << "level  vertices  horizontal  vertical\n";
    for (int n = -1; n <= g.max_level; ++n) {
      out << std::setw(5) << n << std::setw(10) << g.size(n) << std::setw(12) << g.at(n).horizontal_edges()
          << std::setw(10) << g.vertical_edges(n) << '\n';
    }
  }
  return kExitOk;
}

int probe_exit(const ProbeReport& r) {
  return r.status == ProbeStatus::Violation || r.status == ProbeStatus::Witness ? kExitFinding : kExitOk;
}

void print_probe(std::ostream& out, const Rule& rule, const ProbeReport& r) {
  out << to_string(r.probe) << ": " << to_string(r.status) << '\n' << r.summary << '\n';
  for (const auto& v : r.violations) {
    out << "  m=" << v.m << " u=" << v.u << " v=" << v.v << " delta=" << v.delta_m << "  lifts " << v.u_lift << ','
        << v.v_lift << " delta'=" << v.delta_lift << '\n';
  }
  for (const auto& [level, c] : r.cycles) {
    out << "  level " << level << ": " << (c.winding ? "winding" : "non-winding") << " cycle of " << c.sides.size()
        << " ports crossing";
    for (int e : c.crossed) out << ' ' << rule.spec().edges[e].id;
    out << '\n';
  }
}

int cmd_probe_rushton(const Options& o, std::ostream& out, std::ostream& err) {
  RulePtr rule = load_rule(o.file, err);
  SubdivisionEngine engine(rule);
  const ProbeReport r = rushton_probe(engine, o.M, o.n, o.depth);
  if (o.json) {
    out << probe_report(*rule, r).dump(2) << '\n';
  } else {
    print_probe(out, *rule, r);
  }
  return probe_exit(r);
}

int cmd_probe_contraction(const Options& o, std::ostream& out, std::ostream& err) {
  RulePtr rule = load_rule(o.file, err);
  SubdivisionEngine engine(rule);
  PortCycleOptions po;
  po.step_budget = o.step_budget;
  const ProbeReport r = contraction_report(engine, o.max_n, po);
  if (o.json) {
    out << probe_report(*rule, r).dump(2) << '\n';
  } else {
    print_probe(out, *rule, r);
  }
  return probe_exit(r);
}

int cmd_fixtures_list(const Options& o, std::ostream& out) {
  if (o.json) {
    Json doc = Json::array();
    for (const auto& f : fixture_table()) {
      Json expected = Json::object();
      for (const auto& [p, v] : f.expected) expected[p] = v;
      doc.push_back({{"name", f.name}, {"file", f.file}, {"expected", expected}});
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  for (const auto& f : fixture_table()) {
    out << f.name;
    for (const auto& [p, v] : f.expected) out << ' ' << p << '=' << (v ? "true" : "false");
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite subdivision rule toolkit", "fsrlab"};
  app.require_subcommand(1);
  Options o;
  int (*action)(const Options&, std::ostream&, std::ostream&) = nullptr;

  auto input = [&](CLI::App* sub) {
    sub->add_option("file", o.file, ".fsr file or bundled fixture name")->required();
    sub->add_flag("--json", o.json, "Machine-readable report on stdout");
  };
  auto output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Write the document to a file"); };

  auto* validate = app.add_subcommand("validate", "Parse and check a specification");
  input(validate);
  validate->callback([&] { action = cmd_validate; });

  auto* subdivide = app.add_subcommand("subdivide", "Subdivide the sphere or a tile");
  input(subdivide);
  output(subdivide);
  subdivide->add_option("--level", o.level, "Subdivision level")->required()->check(CLI::NonNegativeNumber);
  subdivide->add_option("--tile", o.tile, "Subdivide this tile type instead of the sphere");
  subdivide->add_option("--emit", o.emit, "census, json, svg or dot")
      ->check(CLI::IsMember({"census", "json", "svg", "dot"}));
  subdivide->add_option("--layout", o.layout, "SVG layout: tutte or radial")->check(CLI::IsMember({"tutte", "radial"}));
  subdivide->callback([&] { action = cmd_subdivide; });

  auto* analyze = app.add_subcommand("analyze", "Decide the expansion properties");
  input(analyze);
  output(analyze);
  analyze->add_option("--property", o.property, "Report a single property");
  analyze->add_option("--crosscheck", o.crosscheck, "Brute-force verdicts up to this level")
      ->check(CLI::NonNegativeNumber);
  analyze->add_flag("--glued", o.glued, "Disjointness in the glued sphere instead of the model disk");
  analyze->add_option("--pairs", o.pairs, "Report level-0 cell pairs met by one level-L tile")
      ->check(CLI::NonNegativeNumber);
  analyze->add_option("--dot", o.dot, "Emit the separation graph EE, VV or VE as DOT");
  analyze->callback([&] { action = cmd_analyze; });

  auto* graph = app.add_subcommand("graph", "Build the subdivision graph");
  input(graph);
  output(graph);
  graph->add_option("--levels", o.levels, "Deepest level")->check(CLI::NonNegativeNumber);
  graph->add_option("--flavor", o.flavor, "fat or skinny")->check(CLI::IsMember({"fat", "skinny"}));
  graph->add_option("--emit", o.graph_emit, "summary, dot or json")->check(CLI::IsMember({"summary", "dot", "json"}));
  graph->add_option("--ports", o.ports, "Port-walk graph at this level instead")->check(CLI::NonNegativeNumber);
  graph->add_option("--step-budget", o.step_budget, "Cycle search step budget");
  graph->callback([&] { action = cmd_graph; });

  auto* probe = app.add_subcommand("probe", "Contraction and hyperbolicity probes");
  probe->require_subcommand(1);
  auto* rushton = probe->add_subcommand("rushton", "Check the level-distance condition on the subdivision graph");
  rushton->add_option("file", o.file, ".fsr file or bundled fixture name")->required();
  probe->add_flag("--json", o.json, "Machine-readable report on stdout");
  rushton->add_flag("--json", o.json, "Machine-readable report on stdout");
  rushton->add_option("--M", o.M, "Distance threshold")->required()->check(CLI::NonNegativeNumber);
  rushton->add_option("--n", o.n, "Level shift")->required()->check(CLI::PositiveNumber);
  rushton->add_option("--depth", o.depth, "Deepest level")->required()->check(CLI::NonNegativeNumber);
  rushton->callback([&] { action = cmd_probe_rushton; });
  auto* contraction = probe->add_subcommand("contraction", "Certify contraction or search for obstructions");
  contraction->add_option("file", o.file, ".fsr file or bundled fixture name")->required();
  contraction->add_flag("--json", o.json, "Machine-readable report on stdout");
  contraction->add_option("--max-n", o.max_n, "Deepest level searched")->required()->check(CLI::PositiveNumber);
  contraction->add_option("--step-budget", o.step_budget, "Cycle search step budget per level");
  contraction->callback([&] { action = cmd_probe_contraction; });

  auto* fixtures = app.add_subcommand("fixtures", "Bundled rules");
  fixtures->require_subcommand(1);
  auto* list = fixtures->add_subcommand("list", "Names and expected verdicts");
  list->add_flag("--json", o.json, "Machine-readable list");
  list->callback([&] { action = [](const Options& opt, std::ostream& os, std::ostream&) { return cmd_fixtures_list(opt, os); }; });
  auto* emit = fixtures->add_subcommand("emit", "Print a bundled rule");
  emit->add_option("name", o.name, "Fixture name")->required();
  emit->callback([&] {
    action = [](const Options& opt, std::ostream& os, std::ostream&) {
      try {
        os << fixture_text(opt.name);
      } catch (const UnknownFixture& e) {
        throw InputError(e.what());
      }
      return static_cast<int>(kExitOk);
    };
  });

  auto* schema = app.add_subcommand("schema", "Print a report schema");
  schema->add_option("name", o.name, "complex.v1, verdict.v1, probe.v1 or graph.v1; omit to list");
  schema->callback([&] {
    action = [](const Options& opt, std::ostream& os, std::ostream&) {
      if (opt.name.empty()) {
        for (const auto& n : schema_names()) os << n << '\n';
        return static_cast<int>(kExitOk);
      }
      try {
        os << report_schema(opt.name).dump(2) << '\n';
      } catch (const std::out_of_range&) {
        throw InputError("unknown schema '" + opt.name + "'");
      } catch (const std::invalid_argument&) {
        throw InputError("unknown schema '" + opt.name + "'");
      }
      return static_cast<int>(kExitOk);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }
  if (!action) {
    err << app.help();
    return kExitInput;
  }

  try {
    return action(o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const InvalidSpec& e) {
    print_findings(err, o.file, e.report());
    err << "error: specification is invalid\n";
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << " (raise FSRLAB_CELL_BUDGET to allow more)\n";
  } catch (const UnsupportedRender& e) {
    err << "error: unsupported combination: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInput;
}

}  // namespace fsrlab
