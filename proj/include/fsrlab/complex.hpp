#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fsrlab/rule.hpp"

namespace fsrlab {

enum class Dim : std::uint8_t { Vertex = 0, Edge = 1, Face = 2 };

struct CellId {
  int level = 0;
  Dim dim = Dim::Vertex;
  int index = -1;

  bool operator==(const CellId&) const = default;
};

// A level-n edge traversed along (reversed = false) or against its own
// orientation. Edges are always oriented so that their type reads +e.
struct DirectedEdge {
  int edge = -1;
  bool reversed = false;

  bool operator==(const DirectedEdge&) const = default;
};

// Reference to a cell one level up (parent) or at level 0 (origin).
struct CellRef {
  Dim dim = Dim::Face;
  int index = -1;

  bool operator==(const CellRef&) const = default;
  auto operator<=>(const CellRef&) const = default;
};

struct ComplexVertex {
  int type = -1;  // f^n image: a vertex type of the base complex
  int birth_level = 0;
  CellRef parent;
  int image = -1;  // vertex of the level below under f; -1 at level 0
  CellRef origin;  // open level-0 cell containing the vertex
};

struct ComplexEdge {
  int tail = -1;
  int head = -1;
  int type = -1;
  CellRef parent;
  int image = -1;
  CellRef origin;
};

struct ComplexFace {
  int type = -1;
  std::vector<DirectedEdge> slots;  // slot s realizes slot s of the tile type
  int parent = -1;
  int image = -1;
  int origin = -1;
};

// Where the children of level n-1 cells start in the level-n tables. Counts
// follow from the cell types, so only offsets are stored.
struct ChildTable {
  std::vector<int> edge_vertex_begin;
  std::vector<int> edge_edge_begin;
  std::vector<int> face_vertex_begin;
  std::vector<int> face_edge_begin;
  std::vector<int> face_face_begin;
};

struct Counts {
  long long vertices = 0;
  long long edges = 0;
  long long faces = 0;

  long long total() const { return vertices + edges + faces; }
  long long euler() const { return vertices - edges + faces; }
  bool operator==(const Counts&) const = default;
};

class LevelComplex {
 public:
  enum class Kind { Sphere, Tile };

  Kind kind = Kind::Sphere;
  int base_tile = -1;  // tile kind only
  int level = 0;
  std::vector<ComplexVertex> vertices;
  std::vector<ComplexEdge> edges;
  std::vector<ComplexFace> faces;
  ChildTable children;
  // Tile kind: chain of level-n edges realizing each slot of the base tile.
  std::vector<std::vector<DirectedEdge>> boundary;

  Counts counts() const;
  std::vector<int> valences() const;

  int edge_start(DirectedEdge d) const { return d.reversed ? edges[d.edge].head : edges[d.edge].tail; }
  int edge_end(DirectedEdge d) const { return d.reversed ? edges[d.edge].tail : edges[d.edge].head; }
  // Vertices of a face in slot order: corner i is the end of slot i.
  std::vector<int> face_corners(int face) const;
  int child_count(const Rule& rule, int face) const;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(int level_reached, long long projected, long long budget);
  int level_reached() const { return level_reached_; }
  long long projected() const { return projected_; }

 private:
  int level_reached_;
  long long projected_;
};

// Default total-cell budget; FSRLAB_CELL_BUDGET overrides it.
long long default_cell_budget();

struct Census {
  struct Level {
    int level = 0;
    Counts counts;
    std::vector<long long> faces_by_type;
  };
  std::vector<Level> levels;
};

struct ReturningTile {
  int n = 0;
  std::vector<int> cycle;  // level-0 tile types t_0 -> t_1 -> ... -> t_0
  CellId witness;          // level-n tile s inside t_0 with f^n(s) = t_0
};

struct GrowthConstants {
  int a = 0;
  bool b_zero_possible = false;
  ReturningTile returning;
};

// Memoizing engine for R^n(S^2) and R^n(t). Levels are computed on demand and
// never recomputed; returned references stay valid for the engine's lifetime.
class SubdivisionEngine {
 public:
  explicit SubdivisionEngine(RulePtr rule, long long cell_budget = default_cell_budget());

  const Rule& rule() const { return *rule_; }
  const RulePtr& rule_ptr() const { return rule_; }

  const LevelComplex& sphere(int n);
  const LevelComplex& tile(int tile_type, int n);

  long long cells_in_use() const { return cells_; }
  long long budget() const { return budget_; }

  // Image of a level-n cell under f^k (k <= n), as a cell of sphere level n-k.
  int iterate_face_image(int n, int face, int k);

 private:
  RulePtr rule_;
  long long budget_;
  long long cells_ = 0;
  std::vector<std::unique_ptr<LevelComplex>> sphere_levels_;
  std::map<int, std::vector<std::unique_ptr<LevelComplex>>> tile_levels_;

  void extend(std::vector<std::unique_ptr<LevelComplex>>& levels, int n);
};

LevelComplex base_sphere(const Rule& rule);
LevelComplex base_tile(const Rule& rule, int tile_type);
// One subdivision step. `image_level` is sphere level n (the level whose
// children table locates children of sphere level n-1); null when n = 0.
LevelComplex refine(const Rule& rule, const LevelComplex& current, const LevelComplex* image_level);
Counts projected_counts(const Rule& rule, const LevelComplex& current);

Census census(const Rule& rule, const std::vector<const LevelComplex*>& levels);

// d_v = val_1(v) / val_0(f(v)); throws std::domain_error if not integral.
int local_degree(SubdivisionEngine& engine, int vertex);
ReturningTile find_returning_tile(SubdivisionEngine& engine);
GrowthConstants growth_constants(SubdivisionEngine& engine);

}  // namespace fsrlab
