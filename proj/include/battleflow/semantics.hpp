#pragma once

#include <span>
#include <string>
#include <vector>

#include "battleflow/ingest.hpp"
#include "battleflow/territory.hpp"

namespace battleflow {

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;

  TimeSpan united(const TimeSpan& o) const { return {std::min(start, o.start), std::max(end, o.end)}; }
  friend bool operator==(const TimeSpan&, const TimeSpan&) = default;
};

struct Visit {
  LandmarkId landmark = 0;
  double enter_t = 0.0;
  double exit_t = 0.0;

  friend bool operator==(const Visit&, const Visit&) = default;
};

struct SemanticTrajectory {
  std::string unit_id;
  TeamId team = 0;
  std::vector<Visit> visits;

  std::vector<LandmarkId> landmarks() const;
  TimeSpan time_span() const { return {visits.front().enter_t, visits.back().exit_t}; }

  friend bool operator==(const SemanticTrajectory&, const SemanticTrajectory&) = default;
};

struct TrajectoryGroup {
  TeamId team = 0;
  LandmarkId origin = 0;
  LandmarkId destination = 0;
  std::vector<SemanticTrajectory> members;
};

struct RepresentativeTrajectory {
  TeamId team = 0;
  std::vector<LandmarkId> landmarks;
  /// Time at which the representative route reaches each landmark (taken
  /// from the medoid member); parallel to `landmarks`.
  std::vector<double> landmark_times;
  int unit_count = 0;
  TimeSpan time_span;
  std::vector<std::string> member_ids;  // sorted; one entry per member trajectory
  /// 0 when the route starts at its original origin; > 0 for continuation
  /// pieces produced by splitting at a revisited landmark.
  int segment = 0;

  LandmarkId origin() const { return landmarks.front(); }
  LandmarkId destination() const { return landmarks.back(); }
};

/// Maps samples to landmarks and run-length collapses them into visits.
SemanticTrajectory semantify(const UnitTrack& track, const Territory& territory);

/// Splits wherever a visit dwells longer than `idle_gap` seconds. The dwell
/// landmark closes one episode (visit reduced to its arrival instant) and
/// opens the next (visit reduced to its departure instant). Single-visit
/// episodes are kept; grouping discards them as stationary.
std::vector<SemanticTrajectory> split_episodes(const SemanticTrajectory& st, double idle_gap = 60.0);

/// One group per (team, origin, destination), sorted by that key. Members keep
/// input order. Single-visit trajectories are dropped as stationary.
std::vector<TrajectoryGroup> group_by_od(std::span<const SemanticTrajectory> trajs);

/// Levenshtein distance divided by the longer length; 0 means identical.
double similarity(std::span<const LandmarkId> a, std::span<const LandmarkId> b);

/// Complete-linkage agglomerative clustering of the group's routes; merging
/// stops once the closest pair of clusters is farther apart than `tau`. Each
/// cluster is summarised by its medoid route.
std::vector<RepresentativeTrajectory> cluster_routes(const TrajectoryGroup& group, double tau = 0.5);

}  // namespace battleflow
