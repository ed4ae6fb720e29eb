#pragma once

#include <span>
#include <vector>

#include "battleflow/geometry.hpp"
#include "battleflow/ingest.hpp"

namespace battleflow {

using LandmarkId = int;

struct Landmark {
  LandmarkId id = 0;
  Vec2 site;      // Voronoi generator (cluster seed)
  Vec2 centroid;  // area centroid of `cell`; the landmark's location
  Polygon cell;   // counterclockwise, clipped to the map bounds
};

struct CharacteristicPointParams {
  double turn_angle_deg = 30.0;
  double stop_speed = 0.5;
  double stop_min_duration = 5.0;
};

/// Per unit, in input order: the first sample, samples whose heading change
/// exceeds the turn angle, centres of stop episodes (runs of segments slower
/// than `stop_speed` lasting at least `stop_min_duration`), and the last
/// sample. Throws DegenerateInput when no unit has two samples.
std::vector<Vec2> extract_characteristic_points(std::span<const UnitTrack> units,
                                                const CharacteristicPointParams& params = {});

/// Greedy sequential clustering over points sorted by (x, y). A point joins
/// the first cluster whose running centroid is within `max_radius`; otherwise
/// it founds a new cluster. Returns the final centroids in creation order.
std::vector<Vec2> cluster_points(std::span<const Vec2> points, double max_radius);

/// Voronoi subdivision of the map with point location. Immutable once built.
class Territory {
 public:
  /// Seeds are deduplicated (within 1e-9) and sorted by (x, y); landmark ids
  /// are the positions in that order. Throws DegenerateInput for no seeds.
  static Territory build(std::span<const Vec2> seeds, const Rect& bounds);

  const std::vector<Landmark>& landmarks() const { return landmarks_; }
  const Landmark& landmark(LandmarkId id) const { return landmarks_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return landmarks_.size(); }
  const Rect& bounds() const { return bounds_; }

  /// Id of the landmark whose site is nearest to `p`; ties go to the lower
  /// id. Throws OutOfBounds when `p` is outside the map.
  LandmarkId locate(Vec2 p) const;

  /// Landmark centroids indexed by id.
  std::vector<Vec2> positions() const;

 private:
  Territory() = default;
  void build_index();

  Rect bounds_;
  std::vector<Landmark> landmarks_;

  // Uniform bucket grid over the sites.
  int grid_cols_ = 1;
  int grid_rows_ = 1;
  double cell_w_ = 1.0;
  double cell_h_ = 1.0;
  std::vector<std::vector<LandmarkId>> buckets_;
};

inline Territory build_territory(std::span<const Vec2> seeds, const Rect& bounds) {
  return Territory::build(seeds, bounds);
}

}  // namespace battleflow
