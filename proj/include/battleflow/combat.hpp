#pragma once

#include <span>
#include <vector>

#include "battleflow/hermite.hpp"
#include "battleflow/ingest.hpp"
#include "battleflow/semantics.hpp"
#include "battleflow/territory.hpp"

namespace battleflow {

using SiteId = int;

struct CombatSite {
  SiteId id = 0;
  std::vector<std::size_t> members;  // indices into the event list, ascending
  Polygon hull;                      // counterclockwise convex hull of target positions
  std::vector<HermiteSegment> outline;  // closed smooth curve around the hull
  Vec2 centroid;                     // mean target position
  TimeSpan time_span;

  /// Outline sampled into a closed polygon (`per_segment` points per piece).
  Polygon outline_polygon(int per_segment = 8) const;
};

struct LongRangeAttack {
  TeamId attacker_team = 0;
  Vec2 from;
  Vec2 to;
  int count = 0;
  std::vector<std::size_t> events;  // indices into the event list, ascending
};

/// Density-based clustering of event target positions. A point is a core
/// point when at least `min_pts` targets (itself included) lie within `eps`.
/// Events are scanned in input order; a border point joins the first cluster
/// that reaches it. Sites are numbered by centroid (x, then y).
std::vector<CombatSite> cluster_combat(std::span<const CombatEvent> events, double eps, int min_pts = 3);

/// Closed Catmull-Rom style Hermite curve around `hull`: the hull is offset
/// outward by `radius` with round joins, and the curve interpolates the offset
/// vertices. The curve strictly encloses the hull.
std::vector<HermiteSegment> enclosure_outline(std::span<const Vec2> hull, double radius);

/// Events whose attacker-target distance exceeds `range_threshold`, grouped by
/// (attacker team, attacker landmark, target site or target landmark).
std::vector<LongRangeAttack> detect_long_range(std::span<const CombatEvent> events, double range_threshold,
                                               const MatchLog& log, const Territory& territory,
                                               std::span<const CombatSite> sites);

}  // namespace battleflow
