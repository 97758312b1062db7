#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fsrlab {

// Advisory tag carried through parse/serialize; analyzers recompute weights.
enum class WeightHint { None, Finite, Infinite };

struct VertexType {
  std::string id;
  WeightHint weight_hint = WeightHint::None;

  bool operator==(const VertexType&) const = default;
};

// An edge type traversed forwards (tail -> head) or backwards.
struct SignedEdge {
  int edge = -1;
  bool reversed = false;

  SignedEdge flipped() const { return {edge, !reversed}; }
  bool operator==(const SignedEdge&) const = default;
  auto operator<=>(const SignedEdge&) const = default;
};

struct EdgeType {
  std::string id;
  int tail = -1;
  int head = -1;
  // Subdivision word: images[j] is the image of the j-th subedge, points[j]
  // the image vertex type of the point between subedges j and j+1.
  std::vector<SignedEdge> images;
  std::vector<int> points;

  int subedge_count() const { return static_cast<int>(images.size()); }
  bool operator==(const EdgeType&) const = default;
};

// Boundary slot i runs from corner i-1 to corner i (counterclockwise).
struct Slot {
  SignedEdge edge;
  int corner = -1;

  bool operator==(const Slot&) const = default;
};

struct TileType {
  std::string id;
  std::vector<Slot> boundary;

  int size() const { return static_cast<int>(boundary.size()); }
  bool operator==(const TileType&) const = default;
};

enum class EndpointKind { Corner, BoundaryPoint, Interior };

// corner: a = corner index; boundary point: a = slot, b = k (1-based along
// the slot, counterclockwise); interior: a = interior vertex index.
struct LocalEndpoint {
  EndpointKind kind = EndpointKind::Corner;
  int a = 0;
  int b = 0;

  bool operator==(const LocalEndpoint&) const = default;
};

struct LocalVertex {
  std::string id;
  int image = -1;

  bool operator==(const LocalVertex&) const = default;
};

struct LocalEdge {
  std::string id;
  LocalEndpoint tail;
  LocalEndpoint head;
  SignedEdge image;

  bool operator==(const LocalEdge&) const = default;
};

struct LocalSide {
  int edge = -1;
  bool reversed = false;

  bool operator==(const LocalSide&) const = default;
};

struct LocalFace {
  std::string id;
  std::vector<LocalSide> sides;
  int image = -1;
  int rotation = 0;

  bool operator==(const LocalFace&) const = default;
};

struct SubdivisionScheme {
  int tile = -1;
  std::vector<LocalVertex> interior;
  std::vector<LocalEdge> edges;
  std::vector<LocalFace> faces;

  bool operator==(const SubdivisionScheme&) const = default;
};

struct GluingSide {
  int tile = -1;
  int slot = -1;

  bool operator==(const GluingSide&) const = default;
};

struct EdgeIncidence {
  int edge = -1;
  GluingSide first;
  GluingSide second;

  bool operator==(const EdgeIncidence&) const = default;
};

struct SphereGluing {
  std::vector<EdgeIncidence> incidences;

  bool operator==(const SphereGluing&) const = default;
};

struct FsrSpec {
  std::string name;
  std::vector<VertexType> vertices;
  std::vector<EdgeType> edges;
  std::vector<TileType> tiles;
  std::vector<SubdivisionScheme> schemes;
  SphereGluing gluing;

  int vertex_index(const std::string& id) const;
  int edge_index(const std::string& id) const;
  int tile_index(const std::string& id) const;
  const SubdivisionScheme* scheme_for(int tile) const;

  int edge_start(SignedEdge e) const { return e.reversed ? edges[e.edge].head : edges[e.edge].tail; }
  int edge_end(SignedEdge e) const { return e.reversed ? edges[e.edge].tail : edges[e.edge].head; }
  int max_tile_size() const;

  bool operator==(const FsrSpec&) const = default;
};

}  // namespace fsrlab
