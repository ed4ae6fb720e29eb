#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "battleflow/semantics.hpp"

namespace battleflow {

struct FlowEdge {
  LandmarkId from = 0;
  LandmarkId to = 0;
  int weight = 0;

  friend bool operator==(const FlowEdge&, const FlowEdge&) = default;
};

/// Weighted DAG merging the representative routes of one team that leave the
/// same root landmark. Edges are sorted by (from, to).
struct FlowGraph {
  TeamId team = 0;
  LandmarkId root = 0;
  std::vector<LandmarkId> nodes;  // sorted
  std::vector<FlowEdge> edges;    // sorted by (from, to)
  std::map<LandmarkId, int> termination;
  TimeSpan time_span;
  /// Units whose representative route genuinely starts at `root`, as opposed
  /// to continuation pieces of routes that revisited a landmark.
  int origin_units = 0;
  std::vector<std::string> member_ids;  // sorted

  int in_weight(LandmarkId v) const;
  int out_weight(LandmarkId v) const;
  int out_degree(LandmarkId v) const;
  int in_degree(LandmarkId v) const;
  int termination_at(LandmarkId v) const;
  const FlowEdge* find_edge(LandmarkId from, LandmarkId to) const;
  /// Kahn order; ties resolved by lower landmark id. Throws CycleError.
  std::vector<LandmarkId> topological_order() const;

  friend bool operator==(const FlowGraph&, const FlowGraph&) = default;
};

/// Enclosures are closed polygons. Removes every non-final landmark whose
/// location lies inside the first enclosure containing the destination, then
/// collapses repeats. The origin is always kept. A route that would shrink
/// below two landmarks is returned unchanged.
RepresentativeTrajectory trim_destination_enclosure(const RepresentativeTrajectory& rep,
                                                    std::span<const Polygon> enclosures,
                                                    std::span<const Vec2> positions);

/// Cuts a route wherever it revisits a landmark of its current piece. The new
/// piece starts at the landmark preceding the revisit, so consecutive pieces
/// share exactly one boundary landmark and every piece is repeat-free.
std::vector<RepresentativeTrajectory> split_at_revisit(const RepresentativeTrajectory& rep);

inline constexpr double kUnboundedWindow = std::numeric_limits<double>::infinity();

/// Strictly merges routes sharing team and root into one graph. Throws
/// CycleError if the merged edges contain a directed cycle.
FlowGraph merge_routes(std::span<const RepresentativeTrajectory> reps);

/// Inserts routes (all sharing team and root) in eviction order: ascending
/// time-span start, then lowest member unit id. A route whose edges would
/// close a cycle goes to the first sibling graph that stays acyclic, or to a
/// fresh graph with the same root.
std::vector<FlowGraph> break_cycles(std::span<const RepresentativeTrajectory> reps);

/// Buckets routes by (team, origin). Within a bucket, routes share a graph
/// only if their time spans, each widened by time_window / 2, overlap
/// pairwise. Routes with fewer than two landmarks carry no transitions and
/// are skipped. Output is sorted by (team, root) and then creation order.
std::vector<FlowGraph> build_flow_graphs(std::span<const RepresentativeTrajectory> reps,
                                         double time_window = kUnboundedWindow);

}  // namespace battleflow
