#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsrlab/analyze.hpp"
#include "fsrlab/complex.hpp"
#include "fsrlab/graphs.hpp"

namespace fsrlab {

enum class RenderFormat { Dot, Svg, Json };
enum class Layout { Tutte, Radial };

struct RenderOptions {
  RenderFormat format = RenderFormat::Dot;
  Layout layout = Layout::Tutte;
  int level = 0;
  std::optional<int> tile;  // render R^n(t) instead of R^n(S^2)
};

class UnsupportedRender : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string separation_dot(const Rule& rule, const SeparationGraph& graph, const std::vector<int>& highlight_cycle = {});
// Levels stacked top to bottom; vertical edges dashed.
std::string subdivision_graph_dot(const Rule& rule, const SubdivisionGraph& graph);
// Arcs of the shortest non-winding cycle are drawn red.
std::string port_walk_dot(const Rule& rule, const PortWalkGraph& graph);
// 1-skeleton of a level complex.
std::string complex_dot(const Rule& rule, const LevelComplex& complex);

struct Point {
  double x = 0;
  double y = 0;
};

struct LayoutResult {
  std::vector<Point> positions;
  int sweeps = 0;
  double residual = 0;  // largest move in the final sweep
};

// Barycentric layout of a disk complex: boundary pinned to a convex polygon
// (tutte: tile corners on a regular polygon; radial: every boundary vertex
// evenly on a circle), interior vertices iterated to neighbor averages.
LayoutResult disk_layout(const LevelComplex& tile_complex, Layout layout, double tolerance = 1e-9,
                         int max_sweeps = 10'000);

std::string complex_svg(const Rule& rule, const LevelComplex& tile_complex, Layout layout);

// Dispatches on the options; JSON output is complex.v1.
std::string emit_render(const Rule& rule, const LevelComplex& complex, const RenderOptions& options);

}  // namespace fsrlab
