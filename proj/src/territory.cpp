#include "battleflow/territory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "battleflow/errors.hpp"

namespace battleflow {

namespace {

struct TimedPoint {
  double t;
  Vec2 p;
};

// Turns and stop centres of one track, ordered by time.
std::vector<TimedPoint> interior_points(std::span<const Sample> s, const CharacteristicPointParams& params) {
  std::vector<TimedPoint> out;
  const std::size_t n = s.size();

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 in = s[i].pos - s[i - 1].pos;
    const Vec2 out_dir = s[i + 1].pos - s[i].pos;
    if (norm2(in) == 0.0 || norm2(out_dir) == 0.0) continue;
    const double turn = std::atan2(std::abs(cross(in, out_dir)), dot(in, out_dir)) * 180.0 / std::numbers::pi;
    if (turn > params.turn_angle_deg) out.push_back({s[i].t, s[i].pos});
  }

  const auto slow = [&](std::size_t k) {
    return dist(s[k + 1].pos, s[k].pos) / (s[k + 1].t - s[k].t) < params.stop_speed;
  };
  for (std::size_t k = 0; k + 1 < n;) {
    if (!slow(k)) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end + 2 < n && slow(end + 1)) ++end;
    // Segments k..end are slow; they span samples k..end+1.
    if (s[end + 1].t - s[k].t >= params.stop_min_duration) {
      Vec2 centre{};
      for (std::size_t j = k; j <= end + 1; ++j) centre += s[j].pos;
      centre = centre / static_cast<double>(end + 2 - k);
      out.push_back({0.5 * (s[k].t + s[end + 1].t), centre});
    }
    k = end + 1;
  }

  std::stable_sort(out.begin(), out.end(), [](const TimedPoint& a, const TimedPoint& b) { return a.t < b.t; });
  return out;
}

}  // namespace

std::vector<Vec2> extract_characteristic_points(std::span<const UnitTrack> units,
                                                const CharacteristicPointParams& params) {
  const bool any_movement =
      std::any_of(units.begin(), units.end(), [](const UnitTrack& u) { return u.samples.size() >= 2; });
  if (!any_movement) throw DegenerateInput("no unit has at least two samples");

  std::vector<Vec2> points;
  for (const UnitTrack& unit : units) {
    const auto& s = unit.samples;
    if (s.empty()) continue;
    points.push_back(s.front().pos);
    if (s.size() < 2) continue;
    for (const TimedPoint& tp : interior_points(s, params)) points.push_back(tp.p);
    points.push_back(s.back().pos);
  }
  return points;
}

std::vector<Vec2> cluster_points(std::span<const Vec2> points, double max_radius) {
  std::vector<Vec2> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<Vec2> centroids;
  std::vector<std::size_t> counts;
  const double r2 = max_radius * max_radius;
  for (Vec2 p : sorted) {
    auto it = std::find_if(centroids.begin(), centroids.end(), [&](Vec2 c) { return dist2(c, p) <= r2; });
    if (it == centroids.end()) {
      centroids.push_back(p);
      counts.push_back(1);
      continue;
    }
    const auto k = static_cast<std::size_t>(it - centroids.begin());
    ++counts[k];
    *it += (p - *it) / static_cast<double>(counts[k]);
  }
  return centroids;
}

Territory Territory::build(std::span<const Vec2> seeds, const Rect& bounds) {
  if (seeds.empty()) throw DegenerateInput("territory needs at least one seed");
  for (Vec2 s : seeds)
    if (!bounds.contains(s)) throw OutOfBounds("territory seed outside map bounds");

  std::vector<Vec2> sites(seeds.begin(), seeds.end());
  std::sort(sites.begin(), sites.end());
  constexpr double kDedupTol = 1e-9;
  std::vector<Vec2> unique;
  for (Vec2 s : sites) {
    bool duplicate = false;
    for (auto it = unique.rbegin(); it != unique.rend() && s.x - it->x <= kDedupTol; ++it) {
      if (dist(s, *it) <= kDedupTol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) unique.push_back(s);
  }
  if (seeds.size() > 1 && unique.size() == 1) throw DegenerateInput("all territory seeds coincide");

  Territory territory;
  territory.bounds_ = bounds;
  const Polygon box = rect_polygon(bounds);
  const std::size_t n = unique.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 site = unique[i];
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::pair{dist2(site, unique[a]), a} < std::pair{dist2(site, unique[b]), b};
    });

    Polygon cell = box;
    for (std::size_t j : order) {
      if (j == i) continue;
      double reach2 = 0.0;
      for (Vec2 v : cell) reach2 = std::max(reach2, dist2(site, v));
      // Bisectors farther than twice the cell's reach cannot cut it.
      if (dist2(site, unique[j]) > 4.0 * reach2) break;
      const Vec2 normal = unique[j] - site;
      cell = clip_half_plane(cell, normal, dot(normal, (site + unique[j]) * 0.5));
    }
    territory.landmarks_.push_back(
        {static_cast<LandmarkId>(i), site, polygon_centroid(cell), std::move(cell)});
  }
  territory.build_index();
  return territory;
}

void Territory::build_index() {
  const auto n = static_cast<double>(landmarks_.size());
  const double aspect = bounds_.width() / bounds_.height();
  grid_cols_ = std::clamp(static_cast<int>(std::ceil(std::sqrt(n * aspect))), 1, 512);
  grid_rows_ = std::clamp(static_cast<int>(std::ceil(n / grid_cols_)), 1, 512);
  cell_w_ = bounds_.width() / grid_cols_;
  cell_h_ = bounds_.height() / grid_rows_;
  buckets_.assign(static_cast<std::size_t>(grid_cols_ * grid_rows_), {});
  for (const Landmark& l : landmarks_) {
    const int cx = std::clamp(static_cast<int>((l.site.x - bounds_.xmin) / cell_w_), 0, grid_cols_ - 1);
    const int cy = std::clamp(static_cast<int>((l.site.y - bounds_.ymin) / cell_h_), 0, grid_rows_ - 1);
    buckets_[static_cast<std::size_t>(cy * grid_cols_ + cx)].push_back(l.id);
  }
}

LandmarkId Territory::locate(Vec2 p) const {
  if (!bounds_.contains(p)) throw OutOfBounds("point outside map bounds");

  const int cx = std::clamp(static_cast<int>((p.x - bounds_.xmin) / cell_w_), 0, grid_cols_ - 1);
  const int cy = std::clamp(static_cast<int>((p.y - bounds_.ymin) / cell_h_), 0, grid_rows_ - 1);
  const double min_cell = std::min(cell_w_, cell_h_);
  const double slack = 1e-9 * bounds_.diagonal();
  const int max_ring = std::max(grid_cols_, grid_rows_);

  double best_d2 = std::numeric_limits<double>::infinity();
  LandmarkId best = -1;
  const auto visit = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= grid_cols_ || y >= grid_rows_) return;
    for (LandmarkId id : buckets_[static_cast<std::size_t>(y * grid_cols_ + x)]) {
      const double d2 = dist2(p, landmarks_[static_cast<std::size_t>(id)].site);
      if (d2 < best_d2 || (d2 == best_d2 && id < best)) {
        best_d2 = d2;
        best = id;
      }
    }
  };

  for (int ring = 0; ring <= max_ring; ++ring) {
    if (ring == 0) {
      visit(cx, cy);
    } else {
      for (int dx = -ring; dx <= ring; ++dx) {
        visit(cx + dx, cy - ring);
        visit(cx + dx, cy + ring);
      }
      for (int dy = -ring + 1; dy <= ring - 1; ++dy) {
        visit(cx - ring, cy + dy);
        visit(cx + ring, cy + dy);
      }
    }
    // Every bucket in ring + 1 is at least ring * min_cell away.
    if (best >= 0 && ring * min_cell - slack > std::sqrt(best_d2)) break;
  }
  return best;
}

std::vector<Vec2> Territory::positions() const {
  std::vector<Vec2> out;
  out.reserve(landmarks_.size());
  for (const Landmark& l : landmarks_) out.push_back(l.centroid);
  return out;
}

}  // namespace battleflow
