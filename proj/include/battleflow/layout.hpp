#pragma once

#include <optional>
#include <span>
#include <vector>

#include "battleflow/flowgraph.hpp"
#include "battleflow/hermite.hpp"

namespace battleflow {

/// Principal movement direction at a node and its left-hand normal.
struct NodeFrame {
  LandmarkId landmark = 0;
  Vec2 position;
  Vec2 tangent;  // unit length
  Vec2 normal;   // tangent rotated +90 degrees
};

struct SplineBand {
  LandmarkId from = 0;
  LandmarkId to = 0;
  Vec2 p0, p1;  // offset endpoints
  Vec2 m0, m1;  // tangent vectors
  double width = 0.0;
  int weight = 0;
  std::optional<int> label;
  Vec2 label_anchor;

  HermiteSegment curve() const { return {p0, m0, p1, m1}; }
};

struct FlowLayout {
  FlowGraph graph;
  std::vector<NodeFrame> frames;  // one per node, in graph.nodes order
  std::vector<SplineBand> bands;  // sources in topological order, then clockwise

  const NodeFrame& frame(LandmarkId v) const;
  const SplineBand* band(LandmarkId from, LandmarkId to) const;
};

struct StackEntry {
  LandmarkId other = 0;  // landmark at the far end of the edge
  double width = 0.0;
};

/// Weight-averaged direction of all incoming and outgoing movement at `v`.
/// When the contributions cancel (|sum| < 1e-9) the heaviest outgoing edge's
/// direction is used, then the heaviest incoming one. Throws IsolatedNode.
NodeFrame node_frame(const FlowGraph& graph, LandmarkId v, std::span<const Vec2> positions);

/// Width proportional to weight, reaching w_max at max_troop.
double band_width(int weight, int max_troop, double w_max);

/// Orders the edges on one side of a node (all outgoing or all incoming)
/// clockwise around it, starting from its tangent, and stacks them edge to
/// edge along the normal, centred on the node. Returns
/// the signed offset of each input entry (input order preserved).
std::vector<double> stack_offsets(const NodeFrame& node, std::span<const StackEntry> entries,
                                  std::span<const Vec2> positions);

/// Clockwise angle in [0, 2*pi) from `from` to `to` (y-up frame).
double clockwise_angle(Vec2 from, Vec2 to);

/// Builds one spline band per edge. Tangent magnitude is the chord length
/// |p1 - p0|.
FlowLayout layout_graph(const FlowGraph& graph, std::span<const Vec2> positions, double w_max, int max_troop);

/// Labels edges whose source has out-degree > 1 or is the root. The anchor
/// sits at the curve midpoint, pushed (width / 2 + 2) along the curve normal.
FlowLayout place_labels(FlowLayout layout);

inline constexpr int kRibbonSegments = 32;

/// Left and right ribbon edge points at parameter s: curve point +/- width/2
/// along the unit curve normal.
std::pair<Vec2, Vec2> ribbon_edges_at(const SplineBand& band, double s);

/// Closed ribbon outline: left side forward then right side backward,
/// sampled at `segments` intervals.
Polygon ribbon_polygon(const SplineBand& band, int segments = kRibbonSegments);

}  // namespace battleflow
