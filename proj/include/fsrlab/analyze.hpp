#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsrlab/complex.hpp"
#include "fsrlab/digraph.hpp"
#include "fsrlab/rule.hpp"

namespace fsrlab {

enum class SeparationKind { EE, VV, VE };

// Disjointness of cells of a tile type: in the model disk (corner indices) or
// after the sphere gluing (vertex types).
enum class DisjointMode { ModelDisk, Glued };

const char* to_string(SeparationKind kind);

// A closed cell of a tile type: corner i (Dim::Vertex) or slot i (Dim::Edge).
struct ModelCell {
  Dim dim = Dim::Vertex;
  int index = -1;

  bool operator==(const ModelCell&) const = default;
  auto operator<=>(const ModelCell&) const = default;
};

struct SeparationNode {
  int tile = -1;
  ModelCell a1;
  ModelCell a2;

  bool operator==(const SeparationNode&) const = default;
  auto operator<=>(const SeparationNode&) const = default;
};

// Subtile `face` of the scheme of the source tile has type target.tile; its
// cells target.a1 / target.a2 are the local cells sub1 / sub2 (local vertex
// or local edge indices), which lie in source a1 / a2.
struct SeparationArc {
  int from = -1;
  int to = -1;
  int face = -1;
  int sub1 = -1;
  int sub2 = -1;
};

struct SeparationGraph {
  SeparationKind kind = SeparationKind::EE;
  DisjointMode mode = DisjointMode::ModelDisk;
  std::vector<SeparationNode> nodes;  // sorted
  std::vector<SeparationArc> arcs;
  Adjacency successors;

  int find(const SeparationNode& node) const;
  std::string label(const FsrSpec& spec, int node) const;
};

// Whether the two cells of a tile type are disjoint in the given mode.
bool cells_disjoint(const FsrSpec& spec, int tile, ModelCell x, ModelCell y, DisjointMode mode);

SeparationGraph build_separation_graph(const Rule& rule, SeparationKind kind,
                                       DisjointMode mode = DisjointMode::ModelDisk);

// Replays the arc on the level-1 tile complex R(t): the subtile has the target
// type and its cells named by the target node lie in the source cells.
bool arc_is_sound(SubdivisionEngine& engine, const SeparationGraph& graph, const SeparationArc& arc);

enum class Property { Esub, Esep, Vsep, VEsep, M0comb, CombExp, BoundedValence };

const char* to_string(Property p);
std::optional<Property> property_from_string(std::string_view name);
std::optional<SeparationKind> separation_kind_of(Property p);

struct PropertyVerdict {
  Property property = Property::Esub;
  bool holds = false;
  std::optional<int> certified_level;
  // Separation: node indices of the witness cycle. Esub: edge types.
  // BoundedValence: the vertex cycle with degree product > 1.
  std::vector<int> witness;
  std::vector<std::string> witness_labels;
  std::string basis;  // how the verdict was reached
};

PropertyVerdict check_separation(const Rule& rule, SeparationKind kind, DisjointMode mode = DisjointMode::ModelDisk);
PropertyVerdict check_separation(const Rule& rule, const SeparationGraph& graph);
PropertyVerdict check_esub(const Rule& rule);

// Esub, Esep, Vsep, VEsep, M0comb, CombExp in that order.
std::vector<PropertyVerdict> classify_properties(const Rule& rule, DisjointMode mode = DisjointMode::ModelDisk);

struct ValenceOrbitGraph {
  std::vector<int> successor;  // f on base vertices
  std::vector<int> weight;     // local degree d_v
};

struct BoundedValenceReport {
  PropertyVerdict verdict;
  ValenceOrbitGraph graph;
  std::vector<int> ideal;  // base vertices with unbounded valence, ascending
};

BoundedValenceReport check_bounded_valence(const Rule& rule);

// A tile of R^n(t) meeting both cells of an excluded pair.
struct Violation {
  int tile = -1;
  int level = 0;
  int face = -1;  // index in the level-n tile complex
  ModelCell a1;
  ModelCell a2;
};

// All violating (face, ordered pair) incidences of R^n(t) for one kind.
std::vector<Violation> scan_violations(SubdivisionEngine& engine, SeparationKind kind, int tile, int level,
                                       DisjointMode mode = DisjointMode::ModelDisk);

struct CrosscheckReport {
  Property property = Property::Esep;
  PropertyVerdict verdict;
  int bound = 0;        // k*l^2
  int level_cap = 0;    // min(n_max, k*l^2)
  int level_checked = 0;
  bool agrees = false;
  bool partial = false;  // budget stopped the scan early
  std::optional<Violation> violation;  // replayed witness for false verdicts
  std::string detail;
};

// Brute-force confirmation of a verdict on subdivided tile types (or, for
// Esub, on subdivided sphere edges). Composite properties check each part.
CrosscheckReport crosscheck_at_bound(SubdivisionEngine& engine, Property property, int n_max,
                                     DisjointMode mode = DisjointMode::ModelDisk);

}  // namespace fsrlab
