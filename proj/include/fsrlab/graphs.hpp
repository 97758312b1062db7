#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsrlab/analyze.hpp"
#include "fsrlab/complex.hpp"

namespace fsrlab {

// fat: tiles sharing an edge are adjacent; skinny: tiles that intersect.
enum class Flavor { Fat, Skinny };

const char* to_string(Flavor flavor);

// The leveled tile graph for levels -1..L. Level -1 is the single tile S^2.
// Vertex i of level n is face i of R^n(S^2).
class SubdivisionGraph {
 public:
  struct Level {
    int level = 0;
    int size = 0;
    std::vector<int> parent;   // vertex of level n-1 (0 for level 0); empty at level -1
    std::vector<int> offsets;  // CSR horizontal adjacency, size + 1 entries
    std::vector<int> targets;
    // Children of vertex v are child_offsets[v] .. child_offsets[v+1]-1 at the
    // next level; empty at the deepest level.
    std::vector<int> child_offsets;

    std::span<const int> neighbors(int v) const {
      return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
    }
    long long horizontal_edges() const { return static_cast<long long>(targets.size()) / 2; }
  };

  Flavor flavor = Flavor::Fat;
  int max_level = 0;
  std::vector<Level> levels;  // levels[n + 1] holds level n

  const Level& at(int level) const { return levels.at(level + 1); }
  int size(int level) const { return at(level).size; }
  // Vertical edges joining level n to level n-1: one per level-n vertex.
  long long vertical_edges(int level) const { return level >= 0 ? at(level).size : 0; }
};

SubdivisionGraph build_subdivision_graph(SubdivisionEngine& engine, int max_level, Flavor flavor);

// Distances from `source` within level m; -1 marks unreachable vertices.
std::vector<int> bfs_distances(const SubdivisionGraph& graph, int m, int source);

// delta_m(u, v); nullopt is infinity.
std::optional<int> level_distance(const SubdivisionGraph& graph, int m, int u, int v);

// The level-m tile containing level-n tile u (n >= m).
int project_vertex(const SubdivisionGraph& graph, int m, int n, int u);

// Level-(m+n) vertices projecting to level-m vertex u, ascending.
std::vector<int> lifts(const SubdivisionGraph& graph, int m, int n, int u);

enum class ProbeKind { Rushton, Contraction };
enum class ProbeStatus { PassAtDepth, Violation, Certified, Witness, Unknown };

const char* to_string(ProbeKind kind);
const char* to_string(ProbeStatus status);

struct RushtonViolation {
  int m = 0;
  int n = 0;
  int u = -1;
  int v = -1;
  int u_lift = -1;
  int v_lift = -1;
  int delta_m = 0;
  int delta_lift = 0;
};

// A port is a side of a level-n tile lying in the level-0 1-skeleton.
struct Port {
  int face = -1;
  int slot = -1;

  bool operator==(const Port&) const = default;
  auto operator<=>(const Port&) const = default;
};

// Entering `from` and leaving through slot `exit` into the port `to`.
struct PortArc {
  int from = -1;
  int to = -1;
  int exit = -1;
  int crossed = -1;  // level-0 edge containing the exit side
};

struct PortCycle {
  std::vector<int> ports;    // indices into PortWalkGraph::ports
  std::vector<Port> sides;   // the same ports as tile sides
  std::vector<int> crossed;  // level-0 edges crossed, in order
  bool winding = false;
  int center = -1;  // common level-0 vertex of a winding cycle
};

struct PortCycleOptions {
  int length_cap = 0;  // 0: twice the number of level-n tiles
  long long step_budget = 20'000'000;
  int max_stored = 1000;
  bool stop_at_non_winding = false;  // end the search at the first non-winding cycle
};

struct PortWalkGraph {
  int level = 0;
  std::vector<Port> ports;  // sorted
  std::vector<PortArc> arcs;
  Adjacency successors;
  // Simple cycles in order of length, then least port, up to the cap.
  std::vector<PortCycle> cycles;
  long long cycles_found = 0;
  int length_cap = 0;
  bool complete = true;  // false when the step budget ran out
  std::optional<PortCycle> shortest_non_winding;

  int find(Port p) const;
};

PortWalkGraph port_walk_graph(SubdivisionEngine& engine, int n, const PortCycleOptions& options = {});

// Replays an arc on the level-n complex.
bool port_arc_is_sound(const LevelComplex& complex, const PortWalkGraph& graph, const PortArc& arc);

// Whether the crossed level-0 edges share a common vertex; fills `center`.
bool classify_winding(const FsrSpec& spec, PortCycle& cycle);

struct ProbeReport {
  ProbeKind probe = ProbeKind::Rushton;
  ProbeStatus status = ProbeStatus::Unknown;
  // Rushton: M, n, L. Contraction: n_max.
  int M = 0;
  int n = 0;
  int depth = 0;
  int n_max = 0;
  long long pairs_checked = 0;
  long long violations_found = 0;
  std::vector<RushtonViolation> violations;      // first few, in scan order
  std::vector<PropertyVerdict> certificates;     // Esep and Vsep for contraction
  std::vector<std::pair<int, PortCycle>> cycles;  // (level, non-winding cycle)
  std::string summary;
};

ProbeReport rushton_probe(SubdivisionEngine& engine, int M, int n, int depth);

// Re-measures the distances of a violation on freshly built graphs.
bool replay_rushton(SubdivisionEngine& engine, const RushtonViolation& violation);

ProbeReport contraction_report(SubdivisionEngine& engine, int n_max, const PortCycleOptions& options = {});

struct CellPair {
  CellRef first;
  CellRef second;
  int face = -1;  // a level-L tile meeting both

  bool operator==(const CellPair& o) const { return first == o.first && second == o.second; }
};

struct BoundaryPairReport {
  int level = 0;
  std::vector<CellPair> pairs;  // disjoint closed level-0 cells met by one tile
  std::vector<int> ideal_vertices;
};

BoundaryPairReport boundary_pair_report(SubdivisionEngine& engine, int level);

// Closed level-0 cells met by a tile of R^n(S^2), sorted by (dim, index).
std::vector<CellRef> level0_cells_met(const Rule& rule, const LevelComplex& complex, int face);

}  // namespace fsrlab
