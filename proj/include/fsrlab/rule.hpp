#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsrlab/model.hpp"

namespace fsrlab {

enum class Severity { Warning, Error };

struct Finding {
  Severity severity = Severity::Error;
  std::string code;
  std::string location;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Finding> findings;

  bool has_code(const std::string& code) const;
};

ValidationReport validate_fsr(const FsrSpec& spec);

class InvalidSpec : public std::runtime_error {
 public:
  explicit InvalidSpec(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// A subdivision scheme flattened to index tables. Local vertices are numbered
// corners first, then the boundary points of each slot in slot order, then
// interior vertices.
struct CompiledScheme {
  struct Edge {
    int tail = -1;
    int head = -1;
    SignedEdge image;
    bool boundary = false;
    int slot = -1;              // boundary edges: slot they subdivide
    int position = -1;          // counterclockwise position along the slot
    bool against_slot = false;  // tail->head runs clockwise along the slot
  };
  struct Face {
    std::vector<LocalSide> sides;
    std::vector<int> corners;  // corners[j] = local vertex at the end of side j
    int image = -1;
    int rotation = 0;
  };

  int tile = -1;
  int corner_count = 0;
  std::vector<int> slot_subedges;     // m_s for each slot
  std::vector<int> slot_point_begin;  // local index of the point k=1 of each slot
  int interior_begin = 0;
  int vertex_count = 0;
  std::vector<int> vertex_image;  // image vertex type of each local vertex
  std::vector<Edge> edges;
  std::vector<int> interior_edges;               // indices into edges
  std::vector<std::vector<int>> boundary_chain;  // per slot, edge index at each ccw position
  std::vector<Face> faces;

  // Local vertex at counterclockwise position k (0..m_s) of slot s.
  int point(int slot, int k) const;
};

// Validated, immutable rule plus derived tables shared by all algorithms.
class Rule {
 public:
  // Throws InvalidSpec when validation reports errors.
  static std::shared_ptr<const Rule> compile(FsrSpec spec);

  const FsrSpec& spec() const { return spec_; }
  int tile_count() const { return static_cast<int>(spec_.tiles.size()); }
  int edge_count() const { return static_cast<int>(spec_.edges.size()); }
  int vertex_count() const { return static_cast<int>(spec_.vertices.size()); }
  int max_tile_size() const { return spec_.max_tile_size(); }

  // Image of a vertex of the base complex under the subdivision map.
  int vertex_map(int v) const { return vertex_map_[v]; }
  const CompiledScheme& scheme(int tile) const { return schemes_[tile]; }

  // Valences of base vertices in R^0 and R^1, counted from the schemes.
  int base_valence(int v) const { return valence0_[v]; }
  int level1_valence(int v) const { return valence1_[v]; }

  // The other side of a base edge: (tile, slot) for each of its two sides.
  const EdgeIncidence& incidence(int edge) const { return incidence_[edge]; }

 private:
  friend class RuleBuilder;
  FsrSpec spec_;
  std::vector<int> vertex_map_;
  std::vector<CompiledScheme> schemes_;
  std::vector<int> valence0_;
  std::vector<int> valence1_;
  std::vector<EdgeIncidence> incidence_;
};

using RulePtr = std::shared_ptr<const Rule>;

}  // namespace fsrlab
